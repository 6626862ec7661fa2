#pragma once

#include <cmath>
#include <cstddef>
#include <limits>

namespace sigvol {

/// Running count / mean / centred second moment (Welford). `merge` combines two
/// partial accumulators (Chan et al.), so per-path results can be reduced in any grouping.
struct MomentAccumulator {
    std::size_t count = 0;
    double mean_ = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++count;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count);
        m2 += delta * (x - mean_);
    }
    void merge(const MomentAccumulator& o) noexcept {
        if (o.count == 0) return;
        if (count == 0) {
            *this = o;
            return;
        }
        const double n1 = static_cast<double>(count), n2 = static_cast<double>(o.count);
        const double delta = o.mean_ - mean_;
        mean_ += delta * n2 / (n1 + n2);
        m2 += o.m2 + delta * delta * n1 * n2 / (n1 + n2);
        count += o.count;
    }
    double mean() const noexcept { return mean_; }
    /// Unbiased sample variance; 0 for fewer than two samples.
    double variance() const noexcept { return count < 2 ? 0.0 : m2 / static_cast<double>(count - 1); }
    double standard_error() const noexcept {
        return count ? std::sqrt(variance() / static_cast<double>(count)) : std::numeric_limits<double>::infinity();
    }
};

} // namespace sigvol
