#pragma once

#include "forkjoin/quadrature.hpp"

namespace forkjoin {

/// A fork-join instance: n component queues with volatility sigma, fed by a
/// common demand stream with volatility sigma_a (sigma_a = 0: deterministic
/// demand, independent backlogs). At capacity 1 a single backlog is
/// exponential with mean (sigma^2 + sigma_a^2)/2.
///
/// Policies are symmetric across components (one inventory, one capacity);
/// per-component heterogeneous capacities in the dependent case are not
/// supported.
struct SystemParams {
    int n_components;
    double sigma;
    double sigma_a = 0.0;

    SystemParams(int n, double sig, double sig_a = 0.0);
    double mean_backlog_unit_capacity() const {
        return 0.5 * (sigma * sigma + sigma_a * sigma_a);
    }
};

/// Per-instance holding and backorder rates; gamma(n) = n h / (n h + b) is
/// the newsvendor fractile of the max backlog at the optimal inventory.
struct CostRates {
    double holding;
    double backorder;

    CostRates(double h, double b);
    double gamma(int n) const {
        return n * holding / (n * holding + backorder);
    }
};

enum class Regime { Balanced, QualityDriven, EfficiencyDriven };

/// A candidate decision in capacity-normalized units: physical stock is
/// inventory/capacity.
struct Policy {
    double inventory;
    double capacity;

    Policy(double inv, double cap);
};

enum class Method { ExactIndep, FirstOrder, GumbelIndep, NormalDep, Mixed, SimulatedDep };

const char* method_name(Method m);

struct Solution {
    Policy policy;
    double cost_c;    // C_N(I) under the method's own backlog law
    double cost_f;    // F_N(I, beta) = cost_c / beta + beta * N
    Method method;
    double stderr_f = 0.0;  // 0 for deterministic methods
};

/// n h / (n h + b), in (0,1).
double gamma_of(const SystemParams& params, const CostRates& rates);

/// Closed-form C_N(I) for deterministic demand (sigma_a must be 0):
/// N h (I - sigma^2/2) + (N h + b) E[(max_i Q_i - I)^+].
double cost_c_indep(const SystemParams& params, const CostRates& rates, double inventory);

/// F = c / beta + beta * n; convex in beta with minimum at sqrt(c/n).
double total_cost(double c, double beta, int n);

/// beta* = sqrt(c/n), the capacity minimizing total_cost for fixed c > 0.
double capacity_from_cost(double c, int n);

/// Regime from the limiting fractile: 0 -> quality driven, 1 -> efficiency
/// driven, interior -> balanced.
Regime classify_regime(double gamma_limit);

}  // namespace forkjoin
