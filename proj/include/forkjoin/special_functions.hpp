#pragma once

#include "forkjoin/quadrature.hpp"

namespace forkjoin {

inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal cdf, |error| < 1e-12.
double std_normal_cdf(double x);

/// Inverse standard normal cdf on (0,1); rational approximation with one
/// Newton refinement, |cdf(result) - p| < 1e-10.
double std_normal_quantile(double p);

/// Rational approximation alone (~1e-9 absolute), used in sampling hot paths.
double std_normal_quantile_fast(double p);

/// Standard Gumbel cdf exp(-exp(-x)) and its inverse -log(-log p).
double gumbel_cdf(double x);
double gumbel_quantile(double p);

/// Exponential integral E1(u) = int_u^inf e^{-t}/t dt, u > 0.
double exp_integral_e1(double u);

/// E[(G - a)^+] for standard Gumbel G; equals E1(e^{-a}) + EulerGamma - a.
double gumbel_partial_expectation(double a);

/// E[(m + s X - I)^+] for X standard normal, s > 0.
double normal_partial_expectation(double m, double s, double I);

/// P(max of n iid Exp(2/sigma^2) <= x): the law of max_i sup_t(W_i(t) - t).
double exp_max_cdf(int n, double sigma, double x);

/// Quantile of exp_max_cdf: (sigma^2/2) log(1/(1 - p^{1/n})).
double exp_max_quantile(int n, double sigma, double p);

/// E[(max_i Q_i - I)^+] for n independent exponential backlogs, I >= 0.
/// Alternating binomial sum for small n, adaptive quadrature of the tail
/// integral when cancellation would exceed tolerance.
double exp_max_partial_expectation(int n, double sigma, double I,
                                   const QuadratureConfig& cfg = QuadratureConfig{});

}  // namespace forkjoin
