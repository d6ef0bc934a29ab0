#include "forkjoin/model.hpp"

#include <cmath>
#include <stdexcept>

#include "forkjoin/special_functions.hpp"

namespace forkjoin {

SystemParams::SystemParams(int n, double sig, double sig_a)
    : n_components(n), sigma(sig), sigma_a(sig_a) {
    if (n_components < 1)
        throw std::invalid_argument("SystemParams: n_components must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("SystemParams: sigma must be finite and > 0");
    if (!(sigma_a >= 0.0) || !std::isfinite(sigma_a))
        throw std::invalid_argument("SystemParams: sigma_a must be finite and >= 0");
}

CostRates::CostRates(double h, double b) : holding(h), backorder(b) {
    if (!(holding > 0.0) || !std::isfinite(holding))
        throw std::invalid_argument("CostRates: holding rate must be finite and > 0");
    if (!(backorder > 0.0) || !std::isfinite(backorder))
        throw std::invalid_argument("CostRates: backorder rate must be finite and > 0");
}

Policy::Policy(double inv, double cap) : inventory(inv), capacity(cap) {
    if (!(inventory >= 0.0))
        throw std::invalid_argument("Policy: inventory must be >= 0");
    if (!(capacity > 0.0))
        throw std::invalid_argument("Policy: capacity must be > 0");
}

const char* method_name(Method m) {
    switch (m) {
        case Method::ExactIndep: return "exact";
        case Method::FirstOrder: return "first-order";
        case Method::GumbelIndep: return "gumbel";
        case Method::NormalDep: return "normal";
        case Method::Mixed: return "mixed";
        case Method::SimulatedDep: return "simulate";
    }
    return "?";
}

double gamma_of(const SystemParams& params, const CostRates& rates) {
    return rates.gamma(params.n_components);
}

double cost_c_indep(const SystemParams& params, const CostRates& rates, double inventory) {
    if (params.sigma_a != 0.0)
        throw std::domain_error(
            "cost_c_indep: sigma_a > 0 requires simulation or a dependent approximation");
    const int n = params.n_components;
    const double nh = n * rates.holding;
    QuadratureConfig tight{1e-13, 1e-12, 4096};
    const double overshoot =
        exp_max_partial_expectation(n, params.sigma, inventory, tight);
    return nh * (inventory - 0.5 * params.sigma * params.sigma) +
           (nh + rates.backorder) * overshoot;
}

double total_cost(double c, double beta, int n) {
    if (!(beta > 0.0)) throw std::domain_error("total_cost: beta must be > 0");
    if (!(c >= 0.0)) throw std::domain_error("total_cost: c must be >= 0");
    return c / beta + beta * n;
}

double capacity_from_cost(double c, int n) {
    if (!(c > 0.0)) throw std::domain_error("capacity_from_cost: c must be > 0");
    if (n < 1) throw std::domain_error("capacity_from_cost: n must be >= 1");
    return std::sqrt(c / n);
}

Regime classify_regime(double gamma_limit) {
    if (!(gamma_limit >= 0.0 && gamma_limit <= 1.0))
        throw std::domain_error("classify_regime: gamma limit must lie in [0,1]");
    if (gamma_limit == 0.0) return Regime::QualityDriven;
    if (gamma_limit == 1.0) return Regime::EfficiencyDriven;
    return Regime::Balanced;
}

}  // namespace forkjoin
