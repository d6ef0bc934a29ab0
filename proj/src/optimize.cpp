#include "forkjoin/optimize.hpp"

#include <cmath>
#include <stdexcept>

#include "forkjoin/approximations.hpp"
#include "forkjoin/special_functions.hpp"

namespace forkjoin {

Solution solve_exact_indep(const SystemParams& params, const CostRates& rates) {
    if (params.sigma_a != 0.0)
        throw std::domain_error("solve_exact_indep: requires sigma_a = 0");
    const int n = params.n_components;
    const double gamma = gamma_of(params, rates);
    const double inventory = exp_max_quantile(n, params.sigma, 1.0 - gamma);
    const double cost = cost_c_indep(params, rates, inventory);
    const double beta = capacity_from_cost(cost, n);
    return Solution{Policy{inventory, beta}, cost, 2.0 * n * beta, Method::ExactIndep, 0.0};
}

Solution solve_dep_simulated(const SystemParams& params, const CostRates& rates,
                             const SimConfig& cfg, std::uint64_t stream_domain) {
    if (!(params.sigma_a > 0.0))
        throw std::domain_error("solve_dep_simulated: requires sigma_a > 0");
    const int n = params.n_components;
    const double gamma = gamma_of(params, rates);
    const double inventory =
        estimate_quantile(params, 1.0 - gamma, cfg, stream_domain * 4 + 0);
    const MonteCarloEstimate cost =
        estimate_cost_c_dep(params, rates, inventory, cfg, stream_domain * 4 + 1);
    const double beta = capacity_from_cost(cost.value, n);
    // total cost re-estimated on a disjoint stream to avoid optimization bias
    const MonteCarloEstimate fresh =
        estimate_cost_c_dep(params, rates, inventory, cfg, stream_domain * 4 + 2);
    return Solution{Policy{inventory, beta}, cost.value,
                    fresh.value / beta + beta * n, Method::SimulatedDep,
                    fresh.stderr / beta};
}

MonteCarloEstimate evaluate_policy(const SystemParams& params, const CostRates& rates,
                                   const Policy& policy, const SimConfig& cfg,
                                   std::uint64_t stream_domain) {
    if (params.sigma_a == 0.0) {
        const double cost = cost_c_indep(params, rates, policy.inventory);
        return MonteCarloEstimate{total_cost(cost, policy.capacity, params.n_components), 0.0};
    }
    const MonteCarloEstimate cost =
        estimate_cost_c_dep(params, rates, policy.inventory, cfg, stream_domain);
    return MonteCarloEstimate{
        cost.value / policy.capacity + policy.capacity * params.n_components,
        cost.stderr / policy.capacity};
}

GapDiagnostic gap_diagnostic(const SystemParams& params, const CostRates& rates,
                             const Solution& exact, const Solution& approx, Regime regime) {
    const double n = params.n_components;
    const double log_n = std::log(n);
    double scale;
    if (params.sigma_a > 0.0) {
        scale = std::sqrt(log_n);
    } else {
        switch (regime) {
            case Regime::Balanced:
                scale = n * log_n;
                break;
            case Regime::QualityDriven: {
                const double gamma = gamma_of(params, rates);
                scale = n / gamma * std::log(n / gamma);
                break;
            }
            case Regime::EfficiencyDriven:
                scale = log_n;
                break;
            default:
                scale = n * log_n;
        }
    }
    // the gap compares both policies under the true backlog law; with
    // deterministic demand that law is in closed form, otherwise the caller
    // must pass simulated true-law costs in cost_f/stderr_f
    double f_exact = exact.cost_f, se_exact = exact.stderr_f;
    double f_approx = approx.cost_f, se_approx = approx.stderr_f;
    if (params.sigma_a == 0.0) {
        f_exact = total_cost(cost_c_indep(params, rates, exact.policy.inventory),
                             exact.policy.capacity, params.n_components);
        f_approx = total_cost(cost_c_indep(params, rates, approx.policy.inventory),
                              approx.policy.capacity, params.n_components);
        se_exact = se_approx = 0.0;
    }
    const double gap = 1.0 - f_exact / f_approx;
    double se = 0.0;
    if (se_exact > 0.0 || se_approx > 0.0) {
        const double d_exact = se_exact / f_approx;
        const double d_approx = f_exact * se_approx / (f_approx * f_approx);
        se = std::sqrt(d_exact * d_exact + d_approx * d_approx);
    }
    return GapDiagnostic{gap * scale, se * scale};
}

CBoundCheck cbound_check(const SystemParams& params, const CostRates& rates) {
    if (params.sigma_a != 0.0)
        throw std::domain_error("cbound_check: requires sigma_a = 0");
    const int n = params.n_components;
    const double gamma = gamma_of(params, rates);
    if (!(gamma < 1.0 - std::exp(-static_cast<double>(n))))
        throw std::domain_error("cbound_check: requires gamma < 1 - e^{-N}");

    const Solution exact = solve_exact_indep(params, rates);
    const Solution approx = gumbel_indep(params, rates);
    const double i_star = exact.policy.inventory;
    const double i_hat = approx.policy.inventory;
    if (!(i_star > i_hat))
        throw std::logic_error("cbound_check: exact inventory not above the Gumbel one");

    const double cost_at_hat = cost_c_indep(params, rates, i_hat);
    const double nh = n * rates.holding;
    const double nhb = nh + rates.backorder;
    // (1 + log(1-gamma)/N)^N, zero once log(1-gamma) <= -N
    const double log_one_minus = std::log1p(-gamma);
    const double base = 1.0 + log_one_minus / n;
    const double pow_term = base > 0.0 ? std::exp(n * std::log(base)) : 0.0;

    CBoundCheck check;
    check.exact_inventory = i_star;
    check.approx_inventory = i_hat;
    check.lhs1 = std::abs(exact.cost_c - cost_at_hat);
    check.rhs1 = (i_star - i_hat) * nhb * (1.0 - gamma - pow_term);
    check.lhs2 = std::abs(approx.cost_c - cost_at_hat);
    // (N h + b) [gamma + (1 - gamma - pow)]: the indicator split behind the
    // bound gives the full rate on both pieces
    check.rhs2 = (i_star - i_hat) * nhb * (1.0 - pow_term);
    const double slack1 = 1e-12 * std::max(1.0, std::abs(check.rhs1));
    const double slack2 = 1e-12 * std::max(1.0, std::abs(check.rhs2));
    if (check.lhs1 > check.rhs1 + slack1)
        throw std::logic_error("cbound_check: first cost-difference bound violated");
    if (check.lhs2 > check.rhs2 + slack2)
        throw std::logic_error("cbound_check: second cost-difference bound violated");
    return check;
}

}  // namespace forkjoin
