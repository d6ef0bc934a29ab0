#pragma once

#include <cstdint>

#include "forkjoin/model.hpp"
#include "forkjoin/simulate.hpp"

namespace forkjoin {

/// Exact optimum for deterministic demand: the 1-gamma quantile of the max
/// of N exponential backlogs, capacity sqrt(C/N).
Solution solve_exact_indep(const SystemParams& params, const CostRates& rates);

/// Simulation-based optimum for stochastic demand: median-unbiased quantile
/// for the inventory, simulated overshoot for the capacity; total cost and
/// its stderr come from a fresh overshoot estimate on a disjoint stream.
Solution solve_dep_simulated(const SystemParams& params, const CostRates& rates,
                             const SimConfig& cfg, std::uint64_t stream_domain = 0);

/// F_N(I, beta) of an arbitrary policy under the true backlog law: closed
/// form when sigma_a = 0 (stderr 0), simulated otherwise.
MonteCarloEstimate evaluate_policy(const SystemParams& params, const CostRates& rates,
                                   const Policy& policy, const SimConfig& cfg,
                                   std::uint64_t stream_domain = 0);

struct GapDiagnostic {
    double scaled_gap;  // (1 - F_exact/F_approx) * regime scale
    double stderr;      // delta-method stderr, 0 for deterministic inputs
};

/// Scaled optimality gap between an exact/simulated optimum and an
/// approximate solution, with both policies costed under the true backlog
/// law. Deterministic demand re-evaluates the closed form internally; for
/// sigma_a > 0 the Solutions' cost_f/stderr_f must already hold true-law
/// (simulated) costs. Scale: N log N (balanced), (N/gamma) log(N/gamma)
/// (quality), log N (efficiency); sqrt(log N) for any dependent instance.
GapDiagnostic gap_diagnostic(const SystemParams& params, const CostRates& rates,
                             const Solution& exact, const Solution& approx, Regime regime);

struct CBoundCheck {
    double lhs1, rhs1;  // |C(I*) - C(I_hat)| vs its bound
    double lhs2, rhs2;  // |C_hat(I_hat) - C(I_hat)| vs its bound
    double exact_inventory, approx_inventory;
};

/// Evaluates both cost-difference inequalities for the independent case and
/// asserts them (plus I* > I_hat); throws std::logic_error on violation.
CBoundCheck cbound_check(const SystemParams& params, const CostRates& rates);

}  // namespace forkjoin
