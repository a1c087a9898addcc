#include "driftlab/volatility.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace driftlab {

namespace {

double mean_of(const std::deque<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

}  // namespace

VolatilityDetector::VolatilityDetector(VolatilityConfig config, std::uint64_t seed)
    : config_(config), reference_(config.reference_capacity), rng_(seed) {
    if (config_.buffer_size == 0)
        throw std::invalid_argument("VolatilityConfig: buffer_size must be >= 1");
    if (config_.threshold_theta <= 0.0)
        throw std::invalid_argument("VolatilityConfig: threshold_theta must be > 0");
}

std::optional<VolatilityShift> VolatilityDetector::observe(double interval) {
    if (!(interval > 0.0) || !std::isfinite(interval))
        throw std::domain_error("volatility: interval must be finite and > 0");
    ++seen_;

    recent_.push_back(interval);
    if (recent_.size() > config_.buffer_size) {
        reference_.offer(recent_.front(), rng_);
        recent_.pop_front();
    }

    // Warm-up: no decision until both sides are populated.
    if (recent_.size() < config_.buffer_size || reference_.size() < config_.buffer_size)
        return std::nullopt;

    const double recent_mean = mean_of(recent_);
    const double reference_mean = mean_of(reference_.items());
    if (std::abs(recent_mean - reference_mean) / reference_mean <= config_.threshold_theta)
        return std::nullopt;

    VolatilityShift shift;
    shift.at_drift_count = seen_;
    shift.recent_pattern.assign(recent_.begin(), recent_.end());

    reference_.clear();
    for (double v : shift.recent_pattern) reference_.offer(v, rng_);
    recent_.clear();
    return shift;
}

std::vector<double> VolatilityDetector::recent_pattern() const {
    if (recent_.empty()) throw std::domain_error("volatility: recent buffer is empty");
    return {recent_.begin(), recent_.end()};
}

}  // namespace driftlab
