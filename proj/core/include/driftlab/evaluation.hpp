#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "driftlab/press.hpp"
#include "driftlab/streamgen.hpp"

namespace driftlab {

struct MatchResult {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;
    std::vector<std::uint64_t> delays;
    /// Index into `truth` of the drift matched by each detection, or -1
    /// for a false positive. Aligned with the detection list.
    std::vector<std::int64_t> matched_truth;
};

/// Matches detections to true drifts: a detection at t is a true positive
/// for the latest unmatched true drift d <= t provided t precedes the
/// next true drift; every other detection is a false positive, every
/// unmatched drift a false negative. Inputs must be strictly increasing.
MatchResult match_detections(std::span<const std::uint64_t> truth,
                             std::span<const std::uint64_t> detections,
                             std::uint64_t stream_end);

struct Metrics {
    double fp_rate = 0.0;    // false alarms / instances scored
    double tp_rate = 0.0;    // matched true drifts / true drifts (0 when none)
    double mean_delay = 0.0; // instances, over matched drifts (0 when none)
    std::uint64_t fp = 0;
    std::uint64_t tp = 0;
    std::uint64_t fn = 0;
    std::uint64_t true_drifts = 0;
    std::uint64_t instances = 0;
    bool no_true_drifts = false;
};

enum class DetectorKind { Seed, Press };

struct ExperimentConfig {
    DetectorKind detector = DetectorKind::Seed;
    SeedConfig seed_config;
    VolatilityConfig volatility;
    NetworkConfig network;
    double beta = 0.4;
    /// Leading fraction of the stream used for training: PRESS learns its
    /// network there (predicting afterwards) and detections in that
    /// region are excluded from the metrics for either detector.
    double train_fraction = 0.0;
    std::uint64_t detector_seed = 0;
};

/// Streams every value through the configured detector and scores the
/// drift detections against the ground truth.
Metrics run_experiment(const ExperimentConfig& config, std::span<const double> values,
                       const GroundTruth& truth);

struct DetectorRun {
    std::vector<std::uint64_t> detections;
    std::vector<PressEvent> events; // populated only when requested
};

/// Full pass of the configured detector (training/predicting split per
/// train_fraction), optionally keeping the complete event log.
DetectorRun run_detector_pass(const ExperimentConfig& config, std::span<const double> values,
                              bool keep_events = false);

/// Drift detection indices produced by a full pass (no scoring).
std::vector<std::uint64_t> collect_detections(const ExperimentConfig& config,
                                              std::span<const double> values);

/// Scores a detection list against ground truth, excluding everything at
/// or before `split` (detections must be > split, truths >= split).
Metrics score_detections(std::span<const std::uint64_t> detections, const GroundTruth& truth,
                         std::uint64_t instances, std::uint64_t split);

struct SweepGrid {
    std::string preset = "abrupt10";
    double scale = 0.1;
    std::vector<double> deltas = {0.05, 0.10, 0.15, 0.20, 0.25};
    std::vector<double> betas = {0.4};
    DetectorKind detector = DetectorKind::Press;
    int runs = 10;
    std::uint64_t base_seed = 1;
    double train_fraction = 0.5;
    SeedConfig seed_config;
    VolatilityConfig volatility;
    NetworkConfig network;
    /// 0 = one worker per hardware thread.
    unsigned parallelism = 0;
};

struct SweepRow {
    double delta = 0.0;
    double beta = 0.0;
    int runs = 0;
    double fp_rate_mean = 0.0, fp_rate_sd = 0.0;
    double tp_rate_mean = 0.0, tp_rate_sd = 0.0;
    double delay_mean = 0.0, delay_sd = 0.0;
    double fp_mean = 0.0, tp_mean = 0.0, fn_mean = 0.0;
};

struct SweepReport {
    SweepGrid grid;
    std::vector<SweepRow> rows; // deltas x betas, row-major in grid order
};

/// Runs R seeded experiments per grid cell (stream seeds = base + run
/// index, shared across cells) and aggregates mean/sd per metric. Cells
/// run in parallel; the report is in grid order regardless.
SweepReport sweep(const SweepGrid& grid);

/// Per-tercile behaviour of true drifts binned by magnitude; reproduces
/// the severity-vs-detector relationship (high-severity drifts should
/// show lower delay and miss rate).
struct TercileStats {
    double mean_delay = 0.0;
    double fn_rate = 0.0;
    std::uint64_t drifts = 0;
    std::uint64_t fn = 0;
};

struct TercileReport {
    TercileStats low;
    TercileStats mid;
    TercileStats high;
};

TercileReport severity_tercile_report(std::span<const std::uint64_t> truth,
                                      std::span<const double> magnitudes,
                                      std::span<const std::uint64_t> detections,
                                      std::uint64_t stream_end);

std::string metrics_to_json(const Metrics& m);
std::string sweep_to_json(const SweepReport& report);
std::string sweep_to_csv(const SweepReport& report);

}  // namespace driftlab
