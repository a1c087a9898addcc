#include "driftlab/press.hpp"

#include <stdexcept>

namespace driftlab {

namespace {

// Distinct sub-seeds for the volatility and network reservoirs
// (splitmix64 step).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + salt * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

PressDetector::PressDetector(PressConfig config)
    : config_(config),
      seed_(config.seed),
      volatility_(config.volatility, mix_seed(config.rng_seed, 1)),
      network_(config.network, mix_seed(config.rng_seed, 2)),
      phase_(config.phase) {
    if (!(config_.beta >= 0.0 && config_.beta <= 1.0))
        throw std::invalid_argument("PressConfig: beta must lie in [0,1]");
}

void PressDetector::switch_phase(Phase phase) {
    if (phase == phase_) return;
    phase_ = phase;
    // Entering either phase resets the coefficient: training always runs
    // at c = 1, prediction starts at c = 1 until the first shift.
    seed_.set_coefficient(1.0);
}

std::vector<PressEvent> PressDetector::observe(double x) {
    std::vector<PressEvent> events;
    const auto drift = seed_.observe(x);
    if (!drift) return events;

    ++drift_count_;
    events.push_back(PressEvent{drift->index,
                                DriftPayload{drift->interval, drift->post_drift_mean}});

    std::optional<VolatilityShift> shift;
    if (drift->interval)
        shift = volatility_.observe(static_cast<double>(*drift->interval));

    const std::optional<double> raw_severity = severity_.on_drift(drift->post_drift_mean);
    const bool learning = phase_ == Phase::Training || config_.continue_learning;
    if (raw_severity && learning) network_.record_severity(*raw_severity);

    if (!shift) return events;

    std::optional<PatternId> pattern;
    if (learning)
        pattern = network_.on_volatility_shift(shift->recent_pattern);
    else
        pattern = network_.match_pattern(shift->recent_pattern);
    events.push_back(PressEvent{drift->index, ShiftPayload{pattern}});

    if (phase_ == Phase::Predicting) {
        const double phi =
            pattern ? network_.predicted_severity(*pattern, severity_.running_max()) : 0.0;
        const double c = 1.0 + config_.beta * phi;
        seed_.set_coefficient(c);
        events.push_back(PressEvent{drift->index, CoefficientPayload{c}});
    }
    return events;
}

std::string PressDetector::export_network() const {
    return network_.to_json(severity_.running_max());
}

void PressDetector::import_network(const std::string& json_text) {
    auto [net, running_max] = PatternNetwork::from_json(json_text, mix_seed(config_.rng_seed, 2));
    network_ = std::move(net);
    severity_.set_running_max(running_max);
}

}  // namespace driftlab
