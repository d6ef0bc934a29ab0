#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "forkjoin/model.hpp"
#include "forkjoin/special_functions.hpp"

using namespace forkjoin;

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(SystemParams(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SystemParams(10, 1.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(CostRates(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(CostRates(1.0, -2.0), std::invalid_argument);
    CHECK_THROWS_AS(Policy(-1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(Policy(1.0, 0.0), std::invalid_argument);
    CHECK(SystemParams(10, 1.0, 0.5).mean_backlog_unit_capacity() ==
          doctest::Approx(0.625).epsilon(1e-14));
}

TEST_CASE("gamma fractile") {
    CHECK(gamma_of(SystemParams(10, 1.0), CostRates(1.0, 10.0)) ==
          doctest::Approx(0.5).epsilon(1e-14));
    CHECK(gamma_of(SystemParams(10, 1.0), CostRates(1.0, 100.0)) ==
          doctest::Approx(1.0 / 11.0).epsilon(1e-14));
    CHECK(gamma_of(SystemParams(10, 1.0), CostRates(10.0, 1.0)) ==
          doctest::Approx(100.0 / 101.0).epsilon(1e-14));
}

TEST_CASE("independent-demand cost") {
    const SystemParams params(10, 1.0);
    const CostRates rates(1.0, 10.0);
    CHECK(std::abs(cost_c_indep(params, rates, 1.35178) - 14.3156) < 2e-3);

    const SystemParams one(1, 1.0);
    CHECK(cost_c_indep(one, CostRates(1.0, 1.0), 0.0) ==
          doctest::Approx(0.5).epsilon(1e-10));

    // overshoot vanishes for large inventories
    CHECK(std::abs(cost_c_indep(params, rates, 30.0) - 10.0 * (30.0 - 0.5)) < 1e-8);

    const SystemParams dep(10, 1.0, 0.5);
    CHECK_THROWS_AS(cost_c_indep(dep, rates, 1.0), std::domain_error);

    // convex in I
    for (double I = 0.125; I <= 4.0; I += 0.125) {
        const double h = 0.125;
        const double lo = cost_c_indep(params, rates, I - h);
        const double mid = cost_c_indep(params, rates, I);
        const double hi = cost_c_indep(params, rates, I + h);
        CHECK(lo + hi - 2.0 * mid >= -1e-9);
    }
}

TEST_CASE("total cost and optimal capacity") {
    // the reference prints 23.9315; 2 N beta* makes it 23.9296 (within 1e-3 rel)
    CHECK(std::abs(total_cost(14.3156, 1.19648, 10) - 23.9315) / 23.9315 < 1e-3);
    CHECK(total_cost(25.0, 1.0, 25) == doctest::Approx(50.0).epsilon(1e-14));
    CHECK(total_cost(0.0, 1.0, 10) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK_THROWS_AS(total_cost(1.0, 0.0, 10), std::domain_error);
    CHECK_THROWS_AS(total_cost(1.0, -1.0, 10), std::domain_error);

    CHECK(std::abs(capacity_from_cost(14.3156, 10) - 1.19648) < 1e-4);
    CHECK(capacity_from_cost(25.0, 25) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(capacity_from_cost(9.54353, 10) - 0.976910) < 1e-5);
    CHECK_THROWS_AS(capacity_from_cost(0.0, 10), std::domain_error);

    // unique minimizer: the gradient changes sign exactly at sqrt(c/n)
    const double c = 14.3156;
    const int n = 10;
    const double beta_star = capacity_from_cost(c, n);
    const double h = 1e-4;
    CHECK(total_cost(c, beta_star - h, n) > total_cost(c, beta_star, n));
    CHECK(total_cost(c, beta_star + h, n) > total_cost(c, beta_star, n));
    CHECK(std::abs(total_cost(c, beta_star, n) - 2.0 * n * beta_star) < 1e-9);
}

TEST_CASE("regime classifier") {
    CHECK(classify_regime(0.5) == Regime::Balanced);
    CHECK(classify_regime(0.0) == Regime::QualityDriven);
    CHECK(classify_regime(1.0) == Regime::EfficiencyDriven);
    CHECK(classify_regime(1e-9) == Regime::Balanced);
    CHECK_THROWS_AS(classify_regime(-0.1), std::domain_error);
    CHECK_THROWS_AS(classify_regime(1.1), std::domain_error);
}

TEST_CASE("capacity rescaling identity") {
    // the physical-unit cost of policy (I/beta, beta), with every backlog
    // scaled by 1/beta, equals C_N(I)/beta + beta N
    const SystemParams params(10, 1.0);
    const CostRates rates(1.0, 10.0);
    const int n = params.n_components;
    for (double beta : {0.5, 0.9, 1.0, 1.3, 2.4}) {
        for (double I : {0.4, 1.0, 1.35178, 2.2}) {
            const double physical_inventory = I / beta;
            const double mean_backlog = 0.5 * params.sigma * params.sigma / beta;
            const double overshoot =
                exp_max_partial_expectation(n, params.sigma, beta * physical_inventory) / beta;
            const double physical =
                n * rates.holding * (physical_inventory - mean_backlog) +
                (n * rates.holding + rates.backorder) * overshoot + beta * n;
            const double normalized = total_cost(cost_c_indep(params, rates, I), beta, n);
            CHECK(physical == doctest::Approx(normalized).epsilon(1e-9));
        }
    }
}

TEST_CASE("method names") {
    CHECK(std::string(method_name(Method::ExactIndep)) == "exact");
    CHECK(std::string(method_name(Method::SimulatedDep)) == "simulate");
}
