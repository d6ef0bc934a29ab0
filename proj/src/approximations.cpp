#include "forkjoin/approximations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "forkjoin/special_functions.hpp"

namespace forkjoin {

namespace {

double log_n(const SystemParams& params) {
    return std::log(static_cast<double>(params.n_components));
}

// scale of the normal component: sigma sigma_a / sqrt(2) * sqrt(log N)
double normal_scale(const SystemParams& params) {
    return params.sigma * params.sigma_a * std::sqrt(0.5 * log_n(params));
}

Solution make_solution(const SystemParams& params, double inventory, double cost_c,
                       Method method) {
    const int n = params.n_components;
    const double beta = capacity_from_cost(cost_c, n);
    return Solution{Policy{inventory, beta}, cost_c, 2.0 * n * beta, method, 0.0};
}

}  // namespace

void MixedQuadConfig::validate() const {
    if (outer_nodes < 16)
        throw std::invalid_argument("MixedQuadConfig: outer_nodes must be >= 16");
    if (!(root_tol > 0.0))
        throw std::invalid_argument("MixedQuadConfig: root_tol must be > 0");
    if (!(bracket_expansion > 1.0))
        throw std::invalid_argument("MixedQuadConfig: bracket_expansion must be > 1");
}

Solution first_order(const SystemParams& params, const CostRates& rates) {
    const int n = params.n_components;
    const double inventory = 0.5 * params.sigma * params.sigma * log_n(params);
    const double cost =
        n * rates.holding * (inventory - params.mean_backlog_unit_capacity());
    if (!(cost > 0.0))
        throw std::domain_error("first_order: N too small, first-order cost is not positive");
    return make_solution(params, inventory, cost, Method::FirstOrder);
}

Solution gumbel_indep(const SystemParams& params, const CostRates& rates) {
    if (params.sigma_a != 0.0)
        throw std::domain_error("gumbel_indep: requires sigma_a = 0");
    const int n = params.n_components;
    const double gamma = gamma_of(params, rates);
    if (!(gamma < 1.0 - std::exp(-static_cast<double>(n))))
        throw std::domain_error("gumbel_indep: gamma too close to 1, inventory would be negative");
    const double s2h = 0.5 * params.sigma * params.sigma;
    const double u = -std::log1p(-gamma);  // -log(1-gamma)
    const double inventory = s2h * (log_n(params) - std::log(u));
    const double nh = n * rates.holding;
    const double cost = nh * (inventory - s2h) +
                        (nh + rates.backorder) * s2h * gumbel_partial_expectation(-std::log(u));
    return make_solution(params, inventory, cost, Method::GumbelIndep);
}

Solution normal_dep(const SystemParams& params, const CostRates& rates) {
    if (!(params.sigma_a > 0.0))
        throw std::domain_error("normal_dep: requires sigma_a > 0; use gumbel_indep when "
                                "demand is deterministic");
    if (params.n_components < 2)
        throw std::domain_error("normal_dep: requires n_components >= 2");
    const int n = params.n_components;
    const double gamma = gamma_of(params, rates);
    const double m = 0.5 * params.sigma * params.sigma * log_n(params);
    const double s = normal_scale(params);
    const double quantile = std_normal_quantile(1.0 - gamma);
    const double inventory = m + s * quantile;

    const double nh = n * rates.holding;
    const double cost = nh * (m - params.mean_backlog_unit_capacity()) +
                        (nh + rates.backorder) * params.sigma * params.sigma_a *
                            std::sqrt(log_n(params)) * std::exp(-0.5 * quantile * quantile) /
                            (2.0 * std::sqrt(M_PI));
    // same cost through the partial-expectation route; the quantile terms
    // cancel because (N h + b) gamma = N h
    const double cost_pe = nh * (inventory - params.mean_backlog_unit_capacity()) +
                           (nh + rates.backorder) * normal_partial_expectation(m, s, inventory);
    if (std::abs(cost - cost_pe) > 1e-10 * std::max(1.0, std::abs(cost)))
        throw std::logic_error("normal_dep: closed form and partial-expectation route disagree");
    return make_solution(params, inventory, cost, Method::NormalDep);
}

double mixed_cdf(const SystemParams& params, double inventory) {
    if (params.n_components < 2)
        throw std::domain_error("mixed_cdf: requires n_components >= 2");
    const double s2h = 0.5 * params.sigma * params.sigma;
    const double gumbel_arg0 = inventory / s2h - log_n(params);
    const double s = normal_scale(params);
    if (s == 0.0) return gumbel_cdf(gumbel_arg0);
    const double xscale = s / s2h;
    auto integrand = [gumbel_arg0, xscale](double x) {
        return gumbel_cdf(gumbel_arg0 - xscale * x) * std_normal_pdf(x);
    };
    // phi mass beyond |x|=10 is ~1.5e-23
    return integrate(integrand, -10.0, 10.0, QuadratureConfig{1e-13, 1e-10, 1024});
}

double mixed_overshoot(const SystemParams& params, double inventory,
                       const MixedQuadConfig& quad) {
    quad.validate();
    if (params.n_components < 2)
        throw std::domain_error("mixed_overshoot: requires n_components >= 2");
    const double s2h = 0.5 * params.sigma * params.sigma;
    const double m = s2h * log_n(params);
    const double s = normal_scale(params);
    // E[(s2h G + m + s X - I)^+] integrated over the Gumbel coordinate with
    // the normal part in closed form; e^{-z - e^{-z}} truncations < 1e-18
    auto integrand = [&](double z) {
        const double density = std::exp(-z - std::exp(-z));
        const double shift = m + s2h * z;
        const double partial = (s > 0.0)
                                   ? normal_partial_expectation(shift, s, inventory)
                                   : std::max(0.0, shift - inventory);
        return density * partial;
    };
    QuadratureConfig cfg{1e-13, 1e-9, 8 * quad.outer_nodes};
    return integrate(integrand, -7.0, 50.0, cfg);
}

Solution mixed(const SystemParams& params, const CostRates& rates,
               const MixedQuadConfig& quad) {
    quad.validate();
    if (params.n_components < 2)
        throw std::domain_error("mixed: requires n_components >= 2");
    const int n = params.n_components;
    const double gamma = gamma_of(params, rates);
    const double target = 1.0 - gamma;

    const double s2h = 0.5 * params.sigma * params.sigma;
    const double center = s2h * log_n(params);
    const double spread = s2h * M_PI / std::sqrt(6.0) + normal_scale(params);
    double lo = center - 5.0 * spread;
    double hi = center + 5.0 * spread;
    auto objective = [&](double inv) { return mixed_cdf(params, inv) - target; };
    double flo = objective(lo), fhi = objective(hi);
    for (int attempt = 0; (flo > 0.0 || fhi < 0.0) && attempt < 64; ++attempt) {
        const double width = hi - lo;
        if (flo > 0.0) lo -= (quad.bracket_expansion - 1.0) * width;
        if (fhi < 0.0) hi += (quad.bracket_expansion - 1.0) * width;
        flo = objective(lo);
        fhi = objective(hi);
    }
    if (flo > 0.0 || fhi < 0.0)
        throw std::runtime_error("mixed: failed to bracket the quantile equation in [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
    const double inventory = find_root(objective, lo, hi, quad.root_tol);

    const double nh = n * rates.holding;
    const double cost = nh * (inventory - params.mean_backlog_unit_capacity()) +
                        (nh + rates.backorder) * mixed_overshoot(params, inventory, quad);
    if (!(cost > 0.0))
        throw std::domain_error("mixed: nonpositive cost at the mixed optimum");
    return make_solution(params, inventory, cost, Method::Mixed);
}

}  // namespace forkjoin
