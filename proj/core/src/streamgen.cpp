#include "driftlab/streamgen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace driftlab {

namespace {

constexpr double kRowSumTolerance = 1e-12;

std::size_t draw_transition(const std::vector<double>& row, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    double acc = 0.0;
    for (std::size_t to = 0; to < row.size(); ++to) {
        acc += row[to];
        if (u <= acc && row[to] > 0.0) return to;
    }
    // Guard against accumulated rounding: fall back to the last positive entry.
    for (std::size_t to = row.size(); to-- > 0;)
        if (row[to] > 0.0) return to;
    throw std::logic_error("transition row has no positive entry");
}

}  // namespace

void GeneratorSpec::validate() const {
    std::vector<std::string> problems;
    if (num_patterns < 2) problems.push_back("num_patterns must be >= 2");
    if (pattern_interval_means.size() != num_patterns)
        problems.push_back("pattern_interval_means must have one entry per pattern");
    for (std::size_t i = 0; i < pattern_interval_means.size(); ++i)
        if (!(pattern_interval_means[i] > 0.0))
            problems.push_back("pattern_interval_means[" + std::to_string(i) + "] must be > 0");
    if (!(interval_jitter >= 0.0 && interval_jitter < 1.0))
        problems.push_back("interval_jitter must lie in [0,1)");
    if (transition_matrix.size() != num_patterns)
        problems.push_back("transition_matrix must have one row per pattern");
    for (std::size_t from = 0; from < transition_matrix.size(); ++from) {
        const auto& row = transition_matrix[from];
        if (row.size() != num_patterns) {
            problems.push_back("transition_matrix row " + std::to_string(from) +
                               " must have one entry per pattern");
            continue;
        }
        double sum = 0.0;
        for (std::size_t to = 0; to < row.size(); ++to) {
            if (row[to] < 0.0)
                problems.push_back("transition_matrix[" + std::to_string(from) + "][" +
                                   std::to_string(to) + "] must be >= 0");
            sum += row[to];
            if (row[to] > 0.0 && !severity_map.contains({from, to}))
                problems.push_back("severity_map missing transition (" + std::to_string(from) +
                                   "," + std::to_string(to) + ")");
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            problems.push_back("transition_matrix row " + std::to_string(from) +
                               " must sum to 1");
    }
    for (const auto& [key, magnitude] : severity_map)
        if (!(magnitude > 0.0))
            problems.push_back("severity_map magnitude for (" + std::to_string(key.first) + "," +
                               std::to_string(key.second) + ") must be > 0");
    if (drift_kind == DriftKind::Gradual && ramp_length == 0)
        problems.push_back("ramp_length must be >= 1 for gradual drifts");
    if (!(noise_sd >= 0.0)) problems.push_back("noise_sd must be >= 0");
    if (total_instances == 0) problems.push_back("total_instances must be >= 1");
    if (drifts_per_pattern == 0) problems.push_back("drifts_per_pattern must be >= 1");
    if (initial_pattern >= num_patterns) problems.push_back("initial_pattern out of range");

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid generator spec:";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw std::invalid_argument(msg.str());
    }
}

GeneratedStream generate(const GeneratorSpec& spec) {
    spec.validate();

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const auto draw_segment = [&](std::size_t pattern) {
        const double mean = spec.pattern_interval_means[pattern];
        double length = mean;
        if (spec.interval_jitter > 0.0) {
            const double lo = 1.0 - spec.interval_jitter;
            const double hi = 1.0 + spec.interval_jitter;
            length = mean * (lo + (hi - lo) * unit(rng));
        }
        return static_cast<std::uint64_t>(std::max<double>(1.0, std::llround(length)));
    };

    GeneratedStream out;
    out.values.reserve(spec.total_instances);

    std::size_t current = spec.initial_pattern;
    double magnitude = 0.0;
    double mu = 0.0;
    double step_sign = 1.0;
    std::uint64_t drifts_emitted = 0;
    std::uint64_t next_drift = draw_segment(current);

    // Active gradual ramp.
    double ramp_step = 0.0;
    std::uint64_t ramp_left = 0;

    for (std::uint64_t pos = 0; pos < spec.total_instances; ++pos) {
        if (pos == next_drift) {
            if (drifts_emitted % spec.drifts_per_pattern == 0) {
                const std::size_t prev = current;
                current = draw_transition(spec.transition_matrix[prev], rng);
                magnitude = spec.severity_map.at({prev, current});
                out.truth.pattern_change_positions.push_back(pos);
            }
            ++drifts_emitted;
            out.truth.drift_positions.push_back(pos);
            out.truth.drift_magnitudes.push_back(magnitude);

            const double delta = step_sign * magnitude;
            step_sign = -step_sign;
            if (spec.drift_kind == DriftKind::Abrupt) {
                mu += delta;
                ramp_left = 0;
            } else {
                ramp_step = delta / static_cast<double>(spec.ramp_length);
                ramp_left = spec.ramp_length;
            }
            next_drift = pos + draw_segment(current);
        }

        if (ramp_left > 0) {
            mu += ramp_step;
            --ramp_left;
        }

        double value = mu;
        if (spec.noise_sd > 0.0) value += spec.noise_sd * gauss(rng);
        out.values.push_back(value);
    }
    return out;
}

namespace {

struct PresetShape {
    std::size_t patterns;
    DriftKind kind;
    std::uint64_t magnitude_seed;
};

// Interval means are spread so every realized pattern transition moves
// the mean interval by a factor of at least 2.2 up or 0.455 down, which
// the relative-mean volatility rule (theta 0.5) can see in either
// direction. Step magnitudes cover [0.5, 4].
GeneratorSpec build_preset(const PresetShape& shape, double scale) {
    GeneratorSpec spec;
    spec.num_patterns = shape.patterns;
    spec.drift_kind = shape.kind;
    spec.interval_jitter = 0.1;
    spec.noise_sd = 1.0;
    spec.ramp_length = shape.kind == DriftKind::Gradual ? 96 : 300;
    spec.drifts_per_pattern = 32;
    spec.total_instances = static_cast<std::size_t>(std::llround(scale * 1'000'000.0));
    spec.seed = shape.magnitude_seed;
    spec.initial_pattern = 0;

    const std::size_t k = shape.patterns;
    spec.transition_matrix.assign(k, std::vector<double>(k, 0.0));
    const auto edge = [&](std::size_t from, std::size_t to, double prob, double magnitude) {
        spec.transition_matrix[from][to] = prob;
        spec.severity_map[{from, to}] = magnitude;
    };

    if (k == 3) {
        spec.pattern_interval_means = {128.0, 282.0, 620.0};
        edge(0, 1, 1.0, 0.5);
        edge(1, 0, 0.5, 0.6);
        edge(1, 2, 0.5, 4.0);
        edge(2, 1, 1.0, 2.2);
        spec.drifts_per_pattern = 24;
    } else if (k == 5) {
        spec.pattern_interval_means = {120.0, 264.0, 581.0, 118.0, 290.0};
        edge(0, 1, 0.7, 0.5);
        edge(0, 4, 0.3, 1.0);
        edge(1, 0, 0.5, 0.65);
        edge(1, 3, 0.5, 0.8);
        edge(2, 3, 0.6, 2.6);
        edge(2, 0, 0.4, 2.95);
        edge(3, 2, 0.3, 4.0);
        edge(3, 4, 0.7, 1.7);
        edge(4, 0, 0.6, 3.3);
        edge(4, 3, 0.4, 2.25);
        spec.drifts_per_pattern = 24;
    } else {
        // Patterns 0-4 form the short band, 5-9 the long band. The band
        // ratio stays above 3 so a volatility change is visible against
        // the reference even after missed flushes blend it.
        spec.pattern_interval_means = {160.0, 164.0, 168.0, 172.0, 176.0,
                                       520.0, 533.0, 546.0, 559.0, 572.0};
        // Hot cycle L_i <-> H_i carries steps sized so one extra clean
        // block always settles the test (no cascade of residual-block
        // alarms, no threshold-hugging delays); rare same-band edges
        // anchor the magnitude spread out to [0.5, 4].
        for (std::size_t i = 0; i < 5; ++i) {
            const double di = static_cast<double>(i);
            edge(i, 5 + i, 0.995, 1.4 - 0.025 * di);
            edge(i, (i + 1) % 5, 0.005, 3.4 + 0.15 * di);
            edge(5 + i, i, 0.995, 1.44 - 0.02 * di);
            edge(5 + i, 5 + (i + 1) % 5, 0.005, 0.5 + 0.03 * di);
        }
    }

    // Per-transition jitter drawn once from the preset's fixed seed.
    std::mt19937_64 rng(shape.magnitude_seed);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (auto& [key, magnitude] : spec.severity_map)
        magnitude = std::clamp(magnitude + jitter(rng), 0.5, 4.0);

    return spec;
}

}  // namespace

GeneratorSpec paper_preset(std::string_view name, double scale) {
    if (!(scale > 0.0 && scale <= 1.0))
        throw std::invalid_argument("paper_preset: scale must lie in (0,1]");

    static const std::map<std::string_view, PresetShape> kShapes = {
        {"abrupt3", {3, DriftKind::Abrupt, 101}},   {"abrupt5", {5, DriftKind::Abrupt, 105}},
        {"abrupt10", {10, DriftKind::Abrupt, 110}}, {"gradual3", {3, DriftKind::Gradual, 201}},
        {"gradual5", {5, DriftKind::Gradual, 205}}, {"gradual10", {10, DriftKind::Gradual, 210}},
    };
    const auto it = kShapes.find(name);
    if (it == kShapes.end())
        throw std::invalid_argument("paper_preset: unknown preset '" + std::string(name) + "'");
    return build_preset(it->second, scale);
}

}  // namespace driftlab
