#pragma once

#include <functional>

namespace forkjoin {

/// Tolerances and subdivision budget for the adaptive integrator.
struct QuadratureConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 512;

    void validate() const;  // throws std::invalid_argument
};

/// Adaptive Gauss-Kronrod (7,15) integration of f over [a, b].
/// Subdivides the interval with the largest error estimate until
/// total error <= max(abs_tol, rel_tol * |integral|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = QuadratureConfig{});

/// Integral of f over [a, inf), mapped to (0,1) via x = a + t/(1-t).
double integrate_to_inf(const std::function<double(double)>& f, double a,
                        const QuadratureConfig& cfg = QuadratureConfig{});

/// Brent's method on [lo, hi]; f(lo) and f(hi) must bracket a sign change.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol, int max_iter = 200);

}  // namespace forkjoin
