#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace hdi::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Parameter values closer than this to a pole of 1/(a(1-a)) are evaluated
// with the closed-form limit expressions instead of the ratio form.
inline constexpr double kLimitTol = 1e-6;

inline bool near(double a, double b, double tol = kLimitTol) {
    return std::abs(a - b) < tol;
}

// log(sum_j exp(t_j)) with the usual max shift. Entries of -inf contribute
// nothing; if every entry is -inf the result is -inf.
inline double log_sum_exp(std::span<const double> t) {
    double hi = -kInf;
    for (double v : t) hi = std::max(hi, v);
    if (!std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double v : t) s += std::exp(v - hi);
    return hi + std::log(s);
}

inline double log_sum_exp(const std::vector<double>& t) {
    return log_sum_exp(std::span<const double>(t.data(), t.size()));
}

// Relative difference scaled by max magnitude; 0 when both are 0.
inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale == 0.0) return 0.0;
    return std::abs(a - b) / scale;
}

}  // namespace hdi::num
