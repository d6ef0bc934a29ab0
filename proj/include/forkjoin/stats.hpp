#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace forkjoin {

/// Two-sided Kolmogorov-Smirnov statistic of `values` against cdf F.
inline double ks_statistic(std::vector<double> values,
                           const std::function<double(double)>& cdf) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double d = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double f = cdf(values[i]);
        d = std::max(d, std::max(f - i / n, (i + 1.0) / n - f));
    }
    return d;
}

/// Critical KS value at level 0.001 (two-sided), with the usual
/// small-sample denominator adjustment.
inline double ks_critical_001(std::size_t n) {
    const double c = 1.9494755;  // sqrt(-log(0.0005)/2)
    const double rn = std::sqrt(static_cast<double>(n));
    return c / (rn + 0.12 + 0.11 / rn);
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1.0));
}

}  // namespace forkjoin
