#include "forkjoin/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace forkjoin {

namespace {
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) {
    if (std::isnan(x)) throw std::domain_error("std_normal_cdf: x must be finite");
    return 0.5 * std::erfc(-x / kSqrt2);
}

double std_normal_quantile_fast(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("std_normal_quantile: p must lie in (0,1)");
    // Acklam's rational approximation, ~1.15e-9 absolute error.
    static constexpr double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                    -2.759285104469687e+02, 1.383577518672690e+02,
                                    -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                    -1.556989798598866e+02, 6.680131188771972e+01,
                                    -1.328068155288572e+01};
    static constexpr double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                    -2.400758277161838e+00, -2.549732539343734e+00,
                                    4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                    2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double std_normal_quantile(double p) {
    double x = std_normal_quantile_fast(p);
    const double dens = std_normal_pdf(x);
    if (dens > 0.0) x -= (std_normal_cdf(x) - p) / dens;
    return x;
}

double gumbel_cdf(double x) {
    if (std::isnan(x)) throw std::domain_error("gumbel_cdf: x must be finite");
    return std::exp(-std::exp(-x));
}

double gumbel_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("gumbel_quantile: p must lie in (0,1)");
    return -std::log(-std::log(p));
}

double exp_integral_e1(double u) {
    if (!(u > 0.0)) throw std::domain_error("exp_integral_e1: u must be > 0");
    if (u >= 1.0) {
        if (u > 700.0) return 0.0;  // below double underflow once e^{-u} applied
        // continued fraction E1(u) = e^{-u} / (u + 1 - 1/(u + 3 - 4/(u + 5 - ...)))
        // evaluated by the modified Lentz scheme.
        constexpr double tiny = 1e-300;
        double bterm = u + 1.0;
        double C = 1.0 / tiny;
        double D = 1.0 / bterm;
        double h = D;
        for (int k = 1; k <= 400; ++k) {
            const double ak = -static_cast<double>(k) * k;
            bterm += 2.0;
            D = bterm + ak * D;
            if (std::abs(D) < tiny) D = tiny;
            C = bterm + ak / C;
            if (std::abs(C) < tiny) C = tiny;
            D = 1.0 / D;
            const double delta = C * D;
            h *= delta;
            if (std::abs(delta - 1.0) < 1e-15) break;
        }
        return std::exp(-u) * h;
    }
    // convergent series for small arguments
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 80; ++k) {
        term *= -u / k;
        const double add = -term / k;
        sum += add;
        if (std::abs(add) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum - kEulerGamma - std::log(u);
}

double gumbel_partial_expectation(double a) {
    if (std::isnan(a)) throw std::domain_error("gumbel_partial_expectation: a must be finite");
    if (a < -690.0) return kEulerGamma - a;  // E1(e^{-a}) underflows to 0
    const double u = std::exp(-a);
    if (u <= 1.0) {
        // E1(u) + Gamma + log(u) summed as the cancellation-free series
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 80; ++k) {
            term *= -u / k;
            const double add = -term / k;
            sum += add;
            if (std::abs(add) < 1e-18 * std::max(sum, 1e-300)) break;
        }
        return sum;
    }
    return exp_integral_e1(u) + kEulerGamma - a;
}

double normal_partial_expectation(double m, double s, double I) {
    if (!(s > 0.0)) throw std::domain_error("normal_partial_expectation: s must be > 0");
    const double z = (I - m) / s;
    const double r = s * (std_normal_pdf(z) - z * (1.0 - std_normal_cdf(z)));
    return std::max(r, std::max(0.0, m - I));
}

namespace {
void check_exp_max_args(int n, double sigma) {
    if (n < 1) throw std::domain_error("exp_max: n must be >= 1");
    if (!(sigma > 0.0)) throw std::domain_error("exp_max: sigma must be > 0");
}
}  // namespace

double exp_max_cdf(int n, double sigma, double x) {
    check_exp_max_args(n, sigma);
    if (!(x > 0.0)) return 0.0;
    const double lq = std::log1p(-std::exp(-2.0 * x / (sigma * sigma)));
    return std::exp(n * lq);
}

double exp_max_quantile(int n, double sigma, double p) {
    check_exp_max_args(n, sigma);
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("exp_max_quantile: p must lie in (0,1)");
    // 1 - p^{1/n} computed as -expm1(log(p)/n) to stay exact for large n
    const double one_minus_root = -std::expm1(std::log(p) / n);
    return -0.5 * sigma * sigma * std::log(one_minus_root);
}

double exp_max_partial_expectation(int n, double sigma, double I,
                                   const QuadratureConfig& cfg) {
    check_exp_max_args(n, sigma);
    if (!(I >= 0.0)) throw std::domain_error("exp_max_partial_expectation: I must be >= 0");
    const double s2 = sigma * sigma;
    if (n <= 50) {
        // (s2/2) sum_k C(n,k) (-1)^{k+1} e^{-2kI/s2} / k, watching for cancellation
        const double q = std::exp(-2.0 * I / s2);
        double binom = 1.0;
        double sum = 0.0, peak = 0.0, qk = 1.0;
        bool unstable = false;
        for (int k = 1; k <= n; ++k) {
            binom *= static_cast<double>(n - k + 1) / k;
            qk *= q;
            const double term = binom * qk / k;
            sum += (k % 2 == 1) ? term : -term;
            peak = std::max(peak, term);
            if (peak > 1e18) { unstable = true; break; }
        }
        if (!unstable && (sum > 0.0) && peak <= 1e6 * sum) return 0.5 * s2 * sum;
    }
    // tail integral of the survival function; truncation error below e^{-40}
    const double hi = I + 0.5 * s2 * (std::log(static_cast<double>(n)) + 40.0);
    auto survival = [n, s2](double x) {
        return -std::expm1(n * std::log1p(-std::exp(-2.0 * x / s2)));
    };
    return integrate(survival, I, hi, cfg);
}

}  // namespace forkjoin
