#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "driftlab/stats.hpp"

namespace driftlab {

struct SeedConfig {
    std::size_t block_size = 32;
    double delta = 0.05;
    double coefficient_c = 1.0;
    /// Oldest block is evicted once the window grows past this many blocks.
    std::size_t max_blocks = 512;
};

struct DriftEvent {
    /// Number of instances consumed when the alarm fired.
    std::uint64_t index = 0;
    /// Mean of the newer sub-window (W2) of the widest violating partition.
    double post_drift_mean = 0.0;
    /// Instances since the previous drift; absent for the first drift.
    std::optional<std::uint64_t> interval;
};

/// Block-window drift detector.
///
/// Instances accumulate into fixed-size blocks inside a growing window.
/// Each time a block seals, every prefix/suffix partition of the block
/// list is tested against the Hoeffding threshold (whole-window variance,
/// Bonferroni n_tests = blocks - 1). On a violation the widest violating
/// partition wins: its older side is discarded and the newer side becomes
/// the new window.
class SeedDetector {
public:
    explicit SeedDetector(SeedConfig config);

    /// Feeds one observation; returns a drift event when the sealed-block
    /// check alarms. Throws std::domain_error on non-finite input.
    std::optional<DriftEvent> observe(double x);

    /// Sets the threshold coefficient used by subsequent partition tests.
    /// Throws std::domain_error when c < 1.
    void set_coefficient(double c);
    double coefficient() const { return config_.coefficient_c; }

    /// Mean of every retained observation, open block included.
    /// Throws std::domain_error when the window is empty.
    double window_mean() const;

    std::uint64_t instances_seen() const { return seen_; }
    std::size_t block_count() const { return blocks_.size(); }
    const SeedConfig& config() const { return config_; }

private:
    std::optional<DriftEvent> check_partitions();

    SeedConfig config_;
    std::deque<Moments> blocks_;
    Moments open_;
    std::uint64_t seen_ = 0;
    std::optional<std::uint64_t> last_drift_index_;
};

}  // namespace driftlab
