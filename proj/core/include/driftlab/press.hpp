#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "driftlab/pattern_network.hpp"
#include "driftlab/seed_detector.hpp"
#include "driftlab/severity.hpp"
#include "driftlab/volatility.hpp"

namespace driftlab {

enum class Phase { Training, Predicting };

struct PressConfig {
    SeedConfig seed;
    VolatilityConfig volatility;
    NetworkConfig network;
    /// Weight of the predicted severity in the threshold coefficient
    /// c = 1 + beta * phi.
    double beta = 0.4;
    Phase phase = Phase::Training;
    /// Keep updating the network while predicting.
    bool continue_learning = false;
    std::uint64_t rng_seed = 0;
};

struct DriftPayload {
    std::optional<std::uint64_t> interval;
    double post_drift_mean = 0.0;
};

struct ShiftPayload {
    /// Matched or created pattern; absent when prediction found no match.
    std::optional<PatternId> pattern;
};

struct CoefficientPayload {
    double c = 1.0;
};

struct PressEvent {
    enum class Kind { Drift, VolatilityShift, CoefficientUpdate };

    std::uint64_t index = 0;
    std::variant<DriftPayload, ShiftPayload, CoefficientPayload> payload;

    Kind kind() const { return static_cast<Kind>(payload.index()); }
};

/// The full predictive-severity detector: a Seed detector whose threshold
/// coefficient adapts to the severity predicted for the current
/// volatility pattern.
///
/// In the training phase every volatility shift updates the pattern
/// network; the coefficient stays at 1. In the predicting phase the
/// network is read-only (unless continue_learning) and each shift sets
/// c = 1 + beta * phi, falling back to c = 1 when the recent pattern
/// matches no node or the node has no successors.
class PressDetector {
public:
    explicit PressDetector(PressConfig config);

    /// Feeds one observation; returns the events it generated in causal
    /// order (Drift, then VolatilityShift, then CoefficientUpdate).
    std::vector<PressEvent> observe(double x);

    void switch_phase(Phase phase);
    Phase phase() const { return phase_; }

    double coefficient() const { return seed_.coefficient(); }
    std::uint64_t instances_seen() const { return seed_.instances_seen(); }
    std::uint64_t drift_count() const { return drift_count_; }
    double severity_running_max() const { return severity_.running_max(); }
    const PatternNetwork& network() const { return network_; }

    /// Network snapshot including the severity running max.
    std::string export_network() const;
    /// Replaces the network and running max from a snapshot document.
    void import_network(const std::string& json_text);

private:
    PressConfig config_;
    SeedDetector seed_;
    VolatilityDetector volatility_;
    PatternNetwork network_;
    SeveritySnapshot severity_;
    Phase phase_;
    std::uint64_t drift_count_ = 0;
};

}  // namespace driftlab
