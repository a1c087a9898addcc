#include "driftlab/seed_detector.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace driftlab {

SeedDetector::SeedDetector(SeedConfig config) : config_(config) {
    if (config_.block_size == 0) throw std::invalid_argument("SeedConfig: block_size must be >= 1");
    if (!(config_.delta > 0.0 && config_.delta < 1.0))
        throw std::invalid_argument("SeedConfig: delta must lie strictly in (0,1)");
    if (config_.coefficient_c < 1.0)
        throw std::invalid_argument("SeedConfig: coefficient_c must be >= 1");
    if (config_.max_blocks < 2)
        throw std::invalid_argument("SeedConfig: max_blocks must be >= 2");
}

void SeedDetector::set_coefficient(double c) {
    if (!(c >= 1.0)) throw std::domain_error("set_coefficient: c must be >= 1");
    config_.coefficient_c = c;
}

double SeedDetector::window_mean() const {
    Moments total = open_;
    for (const auto& b : blocks_) total.merge(b);
    if (total.count == 0) throw std::domain_error("window_mean: window is empty");
    return total.mean();
}

std::optional<DriftEvent> SeedDetector::observe(double x) {
    if (!std::isfinite(x)) throw std::domain_error("observe: input must be finite");
    ++seen_;
    open_.add(x);
    if (open_.count < config_.block_size) return std::nullopt;

    blocks_.push_back(open_);
    open_ = Moments{};
    if (blocks_.size() > config_.max_blocks) blocks_.pop_front();
    return check_partitions();
}

std::optional<DriftEvent> SeedDetector::check_partitions() {
    const std::size_t k = blocks_.size();
    if (k < 2) return std::nullopt;

    // Suffix aggregates: suffix[j] = moments of blocks j..k-1.
    std::vector<Moments> suffix(k + 1);
    for (std::size_t j = k; j-- > 0;) {
        suffix[j] = suffix[j + 1];
        suffix[j].merge(blocks_[j]);
    }
    const double window_variance = suffix[0].variance();
    const std::uint64_t n_tests = static_cast<std::uint64_t>(k - 1);

    std::optional<std::size_t> widest;
    Moments prefix;
    for (std::size_t j = 1; j < k; ++j) {
        prefix.merge(blocks_[j - 1]);
        const double eps = hoeffding_epsilon(prefix.count, suffix[j].count, window_variance,
                                             config_.delta, n_tests, config_.coefficient_c);
        if (std::abs(prefix.mean() - suffix[j].mean()) > eps) widest = j;
    }
    if (!widest) return std::nullopt;

    DriftEvent event;
    event.index = seen_;
    event.post_drift_mean = suffix[*widest].mean();
    if (last_drift_index_) event.interval = seen_ - *last_drift_index_;
    last_drift_index_ = seen_;

    blocks_.erase(blocks_.begin(), blocks_.begin() + static_cast<std::ptrdiff_t>(*widest));
    return event;
}

}  // namespace driftlab
