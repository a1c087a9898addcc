#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <utility>
#include <vector>

namespace driftlab {

enum class DriftKind { Abrupt, Gradual };

/// Full description of a synthetic indicator stream: recurrent volatility
/// patterns (per-pattern interval means), a row-stochastic pattern
/// transition matrix, and a per-transition mu-step magnitude. Values are
/// mu + noise_sd * N(0,1); identical spec and seed give identical output.
struct GeneratorSpec {
    std::size_t num_patterns = 2;
    std::vector<double> pattern_interval_means;
    double interval_jitter = 0.1;
    /// transition_matrix[from][to]; each row sums to 1 (+-1e-12).
    std::vector<std::vector<double>> transition_matrix;
    /// (from-pattern, to-pattern) -> mu-step magnitude, required for every
    /// transition with positive probability.
    std::map<std::pair<std::size_t, std::size_t>, double> severity_map;
    DriftKind drift_kind = DriftKind::Abrupt;
    /// Gradual only: instances over which mu ramps linearly to its target.
    std::size_t ramp_length = 300;
    double noise_sd = 1.0;
    std::size_t total_instances = 0;
    std::uint64_t seed = 0;
    /// A new pattern is drawn every this many drifts.
    std::size_t drifts_per_pattern = 20;
    std::size_t initial_pattern = 0;

    /// Throws std::invalid_argument listing every violated invariant.
    void validate() const;
};

struct GroundTruth {
    /// Index of the first instance of each new concept (ramp start for
    /// gradual drifts). Strictly increasing.
    std::vector<std::uint64_t> drift_positions;
    /// |delta mu| of each drift, aligned with drift_positions.
    std::vector<double> drift_magnitudes;
    /// Drift positions at which a new volatility pattern took over.
    std::vector<std::uint64_t> pattern_change_positions;
};

struct GeneratedStream {
    std::vector<double> values;
    GroundTruth truth;
};

GeneratedStream generate(const GeneratorSpec& spec);

/// Named experiment presets: {abrupt,gradual} x {3,5,10} patterns.
/// total_instances = scale * 1,000,000. Interval means use two bands
/// (ratio >= 2.2) so every pattern change is visible to the volatility
/// detector in both directions; step magnitudes spread over [0.5, 4] with
/// the smallest magnitudes assigned to the longest-interval patterns.
/// Throws std::invalid_argument for an unknown name or scale outside (0,1].
GeneratorSpec paper_preset(std::string_view name, double scale);

}  // namespace driftlab
