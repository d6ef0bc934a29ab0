#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "forkjoin/simulate.hpp"
#include "forkjoin/special_functions.hpp"
#include "forkjoin/stats.hpp"

using namespace forkjoin;

namespace {

SimConfig quick_cfg(double grid_step = 1e-3, std::uint64_t seed = 7041) {
    SimConfig cfg;
    cfg.grid_step = grid_step;
    cfg.seed = seed;
    return cfg;
}

std::vector<double> max_values(const std::vector<MaxSample>& samples) {
    std::vector<double> out(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) out[i] = samples[i].max_backlog;
    return out;
}

}  // namespace

TEST_CASE("config validation and helpers") {
    SimConfig bad = quick_cfg();
    bad.grid_step = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = quick_cfg();
    bad.horizon_factor = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = quick_cfg();
    bad.overshoot_reps = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    // t_hat = (sigma^2 + sigma_a^2)/2 * H_n
    const SystemParams params(3, 1.0, 1.0);
    CHECK(attainment_time_scale(params) ==
          doctest::Approx((1.0 + 1.0 / 2 + 1.0 / 3)).epsilon(1e-14));
    // default slack solves n exp(-2 slack / (s^2+sa^2)) = 1e-6
    const double slack = default_early_stop_slack(params);
    CHECK(3.0 * std::exp(-2.0 * slack / 2.0) == doctest::Approx(1e-6).epsilon(1e-10));
}

TEST_CASE("step budget is enforced") {
    SimConfig cfg = quick_cfg(1e-5);
    cfg.step_budget = 1000;
    RngStream stream(1, 2);
    CHECK_THROWS_AS(sample_max_backlog(SystemParams(10, 1.0), cfg, stream),
                    std::runtime_error);
}

TEST_CASE("single queue matches the exponential law") {
    const SystemParams params(1, 1.0);
    SimConfig cfg = quick_cfg(5e-5);
    // the 2 t_hat protocol horizon cuts the upper tail hard at n=1;
    // run long enough that truncation is below the statistical resolution
    cfg.horizon_factor = 10.0;
    const int reps = 4000;
    const std::vector<MaxSample> samples = sample_replications(params, cfg, 11, 0, reps);
    std::vector<double> values = max_values(samples);
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= reps;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double se = std::sqrt(var / (reps - 1.0) / reps);
    CHECK(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("deterministic across worker counts and seeds") {
    const SystemParams params(3, 1.0, 0.4);
    SimConfig serial = quick_cfg();
    serial.overshoot_reps = 200;
    serial.max_workers = 1;
    SimConfig wide = serial;
    wide.max_workers = 4;
    const MonteCarloEstimate a = estimate_overshoot(params, 0.7, serial, 5);
    const MonteCarloEstimate b = estimate_overshoot(params, 0.7, wide, 5);
    CHECK(a.value == b.value);
    CHECK(a.stderr == b.stderr);

    SimConfig other = wide;
    other.seed = 999;
    CHECK(estimate_overshoot(params, 0.7, other, 5).value != a.value);
}

TEST_CASE("independent-demand samples follow the exponential-max law") {
    const SystemParams params(10, 1.0);
    SimConfig cfg = quick_cfg(2e-4, 90210);
    cfg.horizon_factor = 5.0;
    const int reps = 2000;
    const std::vector<MaxSample> samples = sample_replications(params, cfg, 17, 0, reps);
    std::vector<double> values = max_values(samples);

    const double ks = ks_statistic(values, [&](double x) { return exp_max_cdf(10, 1.0, x); });
    CHECK(ks < ks_critical_001(values.size()));

    // median near the gamma = 1/2 quantile
    std::sort(values.begin(), values.end());
    const double median = 0.5 * (values[reps / 2 - 1] + values[reps / 2]);
    CHECK(std::abs(median - 1.35178) < 0.08);

    // transformed uniformity
    std::vector<double> transformed(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        transformed[i] = exp_max_cdf(10, 1.0, values[i]);
    const double ks_u =
        ks_statistic(transformed, [](double u) { return std::clamp(u, 0.0, 1.0); });
    CHECK(ks_u < ks_critical_001(transformed.size()));
}

TEST_CASE("coupling transform inequality and monotone gap") {
    const SystemParams params(10, 1.0);
    const SimConfig cfg = quick_cfg(1e-3, 5150);
    const std::vector<MaxSample> samples = sample_replications(params, cfg, 23, 0, 4000);
    std::vector<double> values = max_values(samples);
    std::sort(values.begin(), values.end());
    double prev_gap = std::numeric_limits<double>::infinity();
    int violations = 0;
    for (double x : values) {
        if (!(x > 0.0)) continue;
        // the coupled Gumbel point (s^2/2) G_N + (s^2/2) log n from the same sample
        const double u = exp_max_cdf(10, 1.0, x);
        const double coupled = -0.5 * std::log(-std::log(u)) + 0.5 * std::log(10.0);
        if (!(x > coupled)) ++violations;
        const double gap = x - coupled;
        if (!(gap < prev_gap + 1e-12)) ++violations;
        prev_gap = gap;
    }
    CHECK(violations == 0);
}

TEST_CASE("early stop leaves estimates unchanged at default slack") {
    const SystemParams params(5, 1.0);
    SimConfig with_stop = quick_cfg(1e-3, 333);
    with_stop.overshoot_reps = 500;
    SimConfig no_stop = with_stop;
    no_stop.early_stop_slack = 1e9;
    const MonteCarloEstimate a = estimate_overshoot(params, 0.8, with_stop, 2);
    const MonteCarloEstimate b = estimate_overshoot(params, 0.8, no_stop, 2);
    CHECK(std::abs(a.value - b.value) < 1e-3);
}

TEST_CASE("quantile estimator hits known quantiles") {
    SimConfig cfg = quick_cfg(2e-4, 777);
    CHECK(std::abs(estimate_quantile(SystemParams(1, 1.0), 0.5, cfg, 31) - 0.34657) < 0.05);

    SimConfig cfg10 = quick_cfg(2e-4, 778);
    CHECK(std::abs(estimate_quantile(SystemParams(10, 1.0), 0.5, cfg10, 32) - 1.35178) < 0.08);

    // the fractional estimator lands in the same band
    SimConfig frac = cfg10;
    frac.fractional_quantile = true;
    CHECK(std::abs(estimate_quantile(SystemParams(10, 1.0), 0.5, frac, 32) - 1.35178) < 0.08);

    CHECK_THROWS_AS(estimate_quantile(SystemParams(10, 1.0), 0.001, cfg, 33),
                    std::domain_error);
    CHECK_THROWS_AS(estimate_quantile(SystemParams(10, 1.0), 1.5, cfg, 33),
                    std::domain_error);
}

TEST_CASE("overshoot estimates against closed forms") {
    const SystemParams params(10, 1.0);
    SimConfig cfg = quick_cfg(2e-4, 1234);
    cfg.horizon_factor = 6.0;
    cfg.overshoot_reps = 2000;
    const MonteCarloEstimate at_zero = estimate_overshoot(params, 0.0, cfg, 41);
    CHECK(std::abs(at_zero.value - 1.46448) < 3.0 * at_zero.stderr + 0.01);

    const MonteCarloEstimate at_star = estimate_overshoot(params, 1.35178, cfg, 42);
    CHECK(std::abs(at_star.value - 0.28989) < 3.0 * at_star.stderr + 0.01);

    const MonteCarloEstimate far = estimate_overshoot(params, 20.0, cfg, 43);
    CHECK(far.value == 0.0);
    CHECK(far.stderr == 0.0);

    CHECK_THROWS_AS(estimate_overshoot(params, -1.0, cfg, 44), std::domain_error);
}

TEST_CASE("dependent cost estimate is consistent with the closed form at sigma_a=0") {
    const SystemParams params(1, 1.0);
    const CostRates rates(1.0, 1.0);
    SimConfig cfg = quick_cfg(5e-5, 555);
    cfg.horizon_factor = 10.0;
    cfg.overshoot_reps = 4000;
    const MonteCarloEstimate est = estimate_cost_c_dep(params, rates, 0.0, cfg, 51);
    CHECK(std::abs(est.value - 0.5) < 3.0 * est.stderr + 0.01);
}

TEST_CASE("clt sample harness") {
    const SystemParams params(50, 1.0, 1.0);
    SimConfig cfg = quick_cfg(1e-3, 4242);
    const int reps = 400;
    const std::vector<CltSample> samples = clt_samples(params, reps, cfg, 61);
    REQUIRE(static_cast<int>(samples.size()) == reps);

    std::vector<double> x(reps);
    for (int i = 0; i < reps; ++i) x[i] = samples[i].x_coupled;
    CHECK(std::abs(mean_of(x)) < 3.0 / std::sqrt(static_cast<double>(reps)));
    CHECK(sd_of(x) == doctest::Approx(1.0).epsilon(0.15));
    CHECK(ks_statistic(x, [](double v) { return std_normal_cdf(v); }) <
          ks_critical_001(x.size()));

    CHECK_THROWS_AS(clt_samples(SystemParams(50, 1.0, 0.0), 10, cfg, 62), std::domain_error);
    CHECK_THROWS_AS(clt_samples(SystemParams(1, 1.0, 1.0), 10, cfg, 63), std::domain_error);
}

TEST_CASE("sample dump format") {
    const SystemParams params(3, 1.0, 0.2);
    const SimConfig cfg = quick_cfg(1e-3, 99);
    const std::vector<MaxSample> samples = sample_replications(params, cfg, 71, 0, 5);
    std::ostringstream out;
    write_samples_csv(out, samples);
    std::istringstream in(out.str());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "rep_index,max_backlog,demand_at_d,argmax_time,truncated_flag");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(std::count(line.begin(), line.end(), ',') == 4);
        ++rows;
    }
    CHECK(rows == 5);
}

TEST_CASE("bridge correction removes most of the coarse-grid bias") {
    // at dt = 0.01 the discrete max of a single queue sits ~0.058 below the
    // 0.5 exponential mean; the per-step bridge maximum restores it
    const SystemParams params(1, 1.0);
    SimConfig cfg = quick_cfg(1e-2, 2024);
    cfg.horizon_factor = 12.0;
    cfg.bridge_correction = true;
    const int reps = 4000;
    const std::vector<MaxSample> corrected = sample_replications(params, cfg, 81, 0, reps);
    double mean = 0.0;
    for (const MaxSample& s : corrected) mean += s.max_backlog;
    mean /= reps;
    double var = 0.0;
    for (const MaxSample& s : corrected) var += (s.max_backlog - mean) * (s.max_backlog - mean);
    const double se = std::sqrt(var / (reps - 1.0) / reps);
    CHECK(std::abs(mean - 0.5) < 3.0 * se + 0.005);

    cfg.bridge_correction = false;
    const std::vector<MaxSample> plain = sample_replications(params, cfg, 81, 0, reps);
    double plain_mean = 0.0;
    for (const MaxSample& s : plain) plain_mean += s.max_backlog;
    plain_mean /= reps;
    CHECK(plain_mean < mean - 0.03);
}

TEST_CASE("worker count respects the environment cap") {
    SimConfig cfg;
    cfg.max_workers = 3;
    CHECK(worker_count(cfg) == 3);
    cfg.max_workers = 0;
    setenv("FORKJOIN_EVT_THREADS", "1", 1);
    CHECK(worker_count(cfg) == 1);
    unsetenv("FORKJOIN_EVT_THREADS");
    CHECK(worker_count(cfg) >= 1);
}

TEST_CASE("pairwise sum basics") {
    std::vector<double> v;
    for (int i = 1; i <= 10; ++i) v.push_back(i);
    CHECK(pairwise_sum(v) == 55.0);
    CHECK(pairwise_sum({}) == 0.0);
    CHECK(pairwise_sum({3.25}) == 3.25);
}
