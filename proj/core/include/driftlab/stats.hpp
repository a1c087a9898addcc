#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace driftlab {

/// Running first and second moments of a sample, mergeable field-wise.
struct Moments {
    std::uint64_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        ++count;
        sum += x;
        sum_sq += x * x;
    }

    void merge(const Moments& other) {
        count += other.count;
        sum += other.sum;
        sum_sq += other.sum_sq;
    }

    /// Arithmetic mean. Undefined for an empty accumulator (caller checks count).
    double mean() const { return sum / static_cast<double>(count); }

    /// Population variance, clamped at zero to absorb cancellation.
    double variance() const {
        if (count == 0) return 0.0;
        const double n = static_cast<double>(count);
        const double m = sum / n;
        const double v = sum_sq / n - m * m;
        return v > 0.0 ? v : 0.0;
    }
};

/// Bounded uniform sample of an unbounded stream (Vitter's algorithm R).
///
/// After n >= capacity offers every offered item is retained with
/// probability capacity/n. The random source is supplied per offer so a
/// single seeded engine can drive many reservoirs deterministically.
class Reservoir {
public:
    explicit Reservoir(std::size_t capacity);

    void offer(double x, std::mt19937_64& rng);

    std::size_t capacity() const { return capacity_; }
    std::uint64_t seen() const { return seen_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::span<const double> items() const { return items_; }

    void clear() {
        items_.clear();
        seen_ = 0;
    }

    /// Restores a snapshot (used by network deserialization).
    void restore(std::vector<double> items, std::uint64_t seen);

private:
    std::size_t capacity_;
    std::vector<double> items_;
    std::uint64_t seen_ = 0;
};

/// Hoeffding/Bernstein-style threshold on the difference of two
/// sub-window means:
///
///     eps = c * sqrt((2/m) * variance * ln(2/delta'))
///         + (2/(3m)) * ln(2/delta')
///
/// with m the harmonic-mean sample size 1/(1/n0 + 1/n1) and
/// delta' = delta/n_tests the Bonferroni-corrected confidence. The
/// coefficient c >= 1 scales only the first term and is how a caller
/// lowers detection sensitivity.
///
/// Throws std::domain_error when a count is zero, delta is outside (0,1),
/// variance is negative, c < 1, or any argument is non-finite.
double hoeffding_epsilon(std::uint64_t n0, std::uint64_t n1, double variance,
                         double delta, std::uint64_t n_tests, double c);

/// Two-sample Kolmogorov-Smirnov statistic: sup_x |ECDF_a(x) - ECDF_b(x)|.
/// Symmetric in its arguments. Throws std::domain_error on an empty sample.
double ks_statistic(std::span<const double> a, std::span<const double> b);

/// Two-sample KS decision at the asymptotic critical value: returns true
/// ("same distribution", not rejected) when
/// D <= c(alpha) * sqrt((n+m)/(n*m)), boundary inclusive.
/// Supported alpha: 0.10 (1.22), 0.05 (1.36), 0.01 (1.63); anything else
/// throws std::domain_error.
bool ks_same_distribution(double d, std::size_t n, std::size_t m, double alpha);

}  // namespace driftlab
