#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace driftlab {

/// Normalizes a raw severity into [0,1] against the largest severity seen
/// so far; 0 when no severity has been observed yet.
inline double normalize_severity(double raw, double running_max) {
    if (raw < 0.0) throw std::domain_error("normalize_severity: raw severity must be >= 0");
    if (running_max <= 0.0) return 0.0;
    return std::clamp(raw / running_max, 0.0, 1.0);
}

/// Warning-free severity measurement: the distance between the post-drift
/// window means of consecutive drifts.
///
/// The mean of W2 at each drift is kept as a snapshot; the next drift's
/// severity is the absolute difference between its W2 mean and that
/// snapshot. The first drift only seeds the snapshot.
class SeveritySnapshot {
public:
    std::optional<double> on_drift(double w2_mean) {
        if (!std::isfinite(w2_mean))
            throw std::domain_error("severity: W2 mean must be finite");
        std::optional<double> raw;
        if (snapshot_) {
            raw = std::abs(w2_mean - *snapshot_);
            running_max_ = std::max(running_max_, *raw);
        }
        snapshot_ = w2_mean;
        return raw;
    }

    double running_max() const { return running_max_; }
    std::optional<double> snapshot() const { return snapshot_; }

    void set_running_max(double value) {
        if (value < 0.0) throw std::domain_error("severity: running max must be >= 0");
        running_max_ = value;
    }

private:
    std::optional<double> snapshot_;
    double running_max_ = 0.0;
};

}  // namespace driftlab
