#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "driftlab/stats.hpp"

namespace driftlab {

struct VolatilityConfig {
    /// Size of the recent-interval sliding buffer.
    std::size_t buffer_size = 32;
    /// Capacity of the older-interval reference reservoir.
    std::size_t reference_capacity = 100;
    /// Relative mean-shift threshold for signalling a volatility change.
    double threshold_theta = 0.5;
};

struct VolatilityShift {
    /// Ordinal of the drift whose interval triggered the shift.
    std::uint64_t at_drift_count = 0;
    /// Snapshot of the recent interval buffer at signal time, arrival order.
    std::vector<double> recent_pattern;
};

/// Detects changes in stream volatility from the sequence of drift
/// intervals: a sliding buffer of recent intervals is compared against a
/// reservoir of older ones, and a shift is signalled when the relative
/// difference of their means exceeds threshold_theta. On a signal the
/// reference is reseeded from the recent buffer and the recent buffer is
/// emptied.
class VolatilityDetector {
public:
    VolatilityDetector(VolatilityConfig config, std::uint64_t seed);

    /// Feeds one drift interval. Throws std::domain_error when it is not
    /// strictly positive.
    std::optional<VolatilityShift> observe(double interval);

    /// Copy of the recent buffer in arrival order.
    /// Throws std::domain_error when the buffer is empty (e.g. right
    /// after a shift flushed it).
    std::vector<double> recent_pattern() const;

    std::uint64_t intervals_seen() const { return seen_; }
    std::size_t recent_size() const { return recent_.size(); }
    std::size_t reference_size() const { return reference_.size(); }
    const VolatilityConfig& config() const { return config_; }

private:
    VolatilityConfig config_;
    std::deque<double> recent_;
    Reservoir reference_;
    std::mt19937_64 rng_;
    std::uint64_t seen_ = 0;
};

}  // namespace driftlab
