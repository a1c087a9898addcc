#include "driftlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace driftlab {

Reservoir::Reservoir(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("Reservoir capacity must be >= 1");
    items_.reserve(capacity_);
}

void Reservoir::offer(double x, std::mt19937_64& rng) {
    ++seen_;
    if (items_.size() < capacity_) {
        items_.push_back(x);
        return;
    }
    // Replace a uniform slot with probability capacity/seen: draw a slot
    // in [0, seen) and keep x only when it lands inside the reservoir.
    std::uniform_int_distribution<std::uint64_t> dist(0, seen_ - 1);
    const std::uint64_t j = dist(rng);
    if (j < capacity_) items_[static_cast<std::size_t>(j)] = x;
}

void Reservoir::restore(std::vector<double> items, std::uint64_t seen) {
    if (items.size() > capacity_ || items.size() != std::min<std::uint64_t>(seen, capacity_))
        throw std::invalid_argument("Reservoir snapshot inconsistent with capacity/seen");
    items_ = std::move(items);
    seen_ = seen;
}

double hoeffding_epsilon(std::uint64_t n0, std::uint64_t n1, double variance,
                         double delta, std::uint64_t n_tests, double c) {
    if (n0 == 0 || n1 == 0 || n_tests == 0)
        throw std::domain_error("hoeffding_epsilon: counts must be positive");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::domain_error("hoeffding_epsilon: delta must lie strictly in (0,1)");
    if (!std::isfinite(variance) || variance < 0.0)
        throw std::domain_error("hoeffding_epsilon: variance must be finite and non-negative");
    if (!std::isfinite(c) || c < 1.0)
        throw std::domain_error("hoeffding_epsilon: coefficient must be finite and >= 1");

    const double m = 1.0 / (1.0 / static_cast<double>(n0) + 1.0 / static_cast<double>(n1));
    const double delta_prime = delta / static_cast<double>(n_tests);
    const double log_term = std::log(2.0 / delta_prime);
    return c * std::sqrt((2.0 / m) * variance * log_term) + (2.0 / (3.0 * m)) * log_term;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty())
        throw std::domain_error("ks_statistic: samples must be non-empty");

    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double na = static_cast<double>(sa.size());
    const double nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] <= x) ++i;
        while (j < sb.size() && sb[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    // Once one sample is exhausted the gap only shrinks back to 0.
    return d;
}

bool ks_same_distribution(double d, std::size_t n, std::size_t m, double alpha) {
    if (n == 0 || m == 0)
        throw std::domain_error("ks_same_distribution: sample sizes must be positive");
    double coeff = 0.0;
    if (std::abs(alpha - 0.10) < 1e-12)
        coeff = 1.22;
    else if (std::abs(alpha - 0.05) < 1e-12)
        coeff = 1.36;
    else if (std::abs(alpha - 0.01) < 1e-12)
        coeff = 1.63;
    else
        throw std::domain_error("ks_same_distribution: unsupported alpha (use 0.10, 0.05 or 0.01)");

    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(m);
    const double critical = coeff * std::sqrt((nn + mm) / (nn * mm));
    return d <= critical;
}

}  // namespace driftlab
