#include "forkjoin/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace forkjoin {

void SimConfig::validate() const {
    if (!(grid_step > 0.0)) throw std::invalid_argument("SimConfig: grid_step must be > 0");
    if (!(horizon_factor >= 1.0))
        throw std::invalid_argument("SimConfig: horizon_factor must be >= 1");
    if (quantile_batch < 1 || quantile_reps < 1 || overshoot_reps < 1)
        throw std::invalid_argument("SimConfig: replication counts must be >= 1");
    if (early_stop_slack && !(*early_stop_slack > 0.0))
        throw std::invalid_argument("SimConfig: early_stop_slack must be > 0");
    if (step_budget < 1) throw std::invalid_argument("SimConfig: step_budget must be >= 1");
    if (max_workers < 0) throw std::invalid_argument("SimConfig: max_workers must be >= 0");
}

double attainment_time_scale(const SystemParams& params) {
    double harmonic = 0.0;
    for (int j = params.n_components; j >= 1; --j) harmonic += 1.0 / j;
    return 0.5 * (params.sigma * params.sigma + params.sigma_a * params.sigma_a) * harmonic;
}

double default_early_stop_slack(const SystemParams& params) {
    const double v = params.sigma * params.sigma + params.sigma_a * params.sigma_a;
    return 0.5 * v * std::log(params.n_components / 1e-6);
}

int worker_count(const SimConfig& cfg) {
    if (cfg.max_workers > 0) return cfg.max_workers;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("FORKJOIN_EVT_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) hw = std::min(hw, cap);
    }
    return hw;
}

namespace {

template <class Fn>
void parallel_for(int count, int workers, Fn&& fn) {
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=]() {
            for (int i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

double median_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// P(Bin(n, p) >= j)
double binomial_upper_tail(int n, double p, int j) {
    if (j <= 0) return 1.0;
    if (j > n) return 0.0;
    const double lp = std::log(p), lq = std::log1p(-p);
    double tail = 0.0;
    for (int k = j; k <= n; ++k) {
        const double lpmf = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(n - k + 1.0) + k * lp + (n - k) * lq;
        tail += std::exp(lpmf);
    }
    return std::min(tail, 1.0);
}

}  // namespace

double pairwise_sum(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    std::vector<double> acc(values);
    std::size_t n = acc.size();
    while (n > 1) {
        const std::size_t half = n / 2;
        for (std::size_t i = 0; i < half; ++i) acc[i] = acc[2 * i] + acc[2 * i + 1];
        if (n % 2 == 1) acc[half] = acc[n - 1];
        n = half + n % 2;
    }
    return acc[0];
}

MaxSample sample_max_backlog(const SystemParams& params, const SimConfig& cfg,
                             RngStream& stream) {
    cfg.validate();
    const int n = params.n_components;
    const double dt = cfg.grid_step;
    const double horizon = cfg.horizon_factor * attainment_time_scale(params);
    const long long steps = static_cast<long long>(std::ceil(horizon / dt));
    if (steps * static_cast<long long>(n) > cfg.step_budget)
        throw std::runtime_error("sample_max_backlog: n * horizon / grid_step exceeds step budget");

    const double slack = cfg.early_stop_slack ? *cfg.early_stop_slack
                                              : default_early_stop_slack(params);
    const double comp_scale = params.sigma * std::sqrt(dt);
    const double dem_scale = params.sigma_a * std::sqrt(dt);
    const bool has_demand = params.sigma_a > 0.0;
    const double bridge_var = (params.sigma * params.sigma +
                               params.sigma_a * params.sigma_a) * dt;

    // grid point closest to the critical time d log n, d = sigma^2/2
    const double d_time = 0.5 * params.sigma * params.sigma *
                          std::log(static_cast<double>(n));
    long long d_step = std::llround(d_time / dt);
    d_step = std::clamp(d_step, 0LL, steps);

    std::vector<double> paths(n, 0.0);
    std::vector<double> prev;
    if (cfg.bridge_correction) prev.assign(n, 0.0);

    double run_max = 0.0;  // sup over s -> 0+ is >= 0
    double argmax_time = 0.0;
    double demand_path = 0.0;
    double demand_at_d = 0.0;
    for (long long k = 1; k <= steps; ++k) {
        double shared = -dt;
        if (has_demand) {
            const double da = dem_scale * stream.normal32();
            demand_path += da;
            shared += da;
        }
        double step_max = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double next = paths[i] + shared + comp_scale * stream.normal32();
            if (cfg.bridge_correction) {
                // max of the Brownian bridge between consecutive grid values
                // (per-path marginal; bridges share the demand increment)
                const double diff = next - prev[i];
                const double u = stream.uniform();
                const double bridge_max =
                    0.5 * (prev[i] + next +
                           std::sqrt(diff * diff - 2.0 * bridge_var * std::log(u)));
                step_max = std::max(step_max, bridge_max);
                prev[i] = next;
            }
            paths[i] = next;
            step_max = std::max(step_max, next);
        }
        if (step_max > run_max) {
            run_max = step_max;
            argmax_time = k * dt;
        }
        if (k == d_step) demand_at_d = demand_path;
        if (run_max - step_max > slack && k >= d_step) break;
    }
    return MaxSample{run_max, demand_at_d, argmax_time,
                     argmax_time > 0.95 * horizon};
}

std::vector<MaxSample> sample_replications(const SystemParams& params, const SimConfig& cfg,
                                           std::uint64_t stream_domain, std::uint64_t kind,
                                           int count) {
    std::vector<MaxSample> out(count);
    parallel_for(count, worker_count(cfg), [&](int r) {
        RngStream stream(cfg.seed, make_stream_id(stream_domain, kind, r));
        out[r] = sample_max_backlog(params, cfg, stream);
    });
    return out;
}

double estimate_quantile(const SystemParams& params, double p, const SimConfig& cfg,
                         std::uint64_t stream_domain) {
    cfg.validate();
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("estimate_quantile: p must lie in (0,1)");
    const int batch = cfg.quantile_batch;
    int j = static_cast<int>(std::floor(p * batch));
    if (j < 1 || j > batch - 1)
        throw std::domain_error(
            "estimate_quantile: p * quantile_batch needs order statistics inside the batch");

    // weight on the upper order statistic solving
    // (1-pi) P(Bin >= j) + pi P(Bin >= j+1) = 1/2
    double upper_weight = 0.0;
    if (!cfg.fractional_quantile) {
        while (j > 1 && binomial_upper_tail(batch, p, j) < 0.5) --j;
        while (j < batch - 1 && binomial_upper_tail(batch, p, j + 1) >= 0.5) ++j;
        const double qj = binomial_upper_tail(batch, p, j);
        const double qj1 = binomial_upper_tail(batch, p, j + 1);
        upper_weight = (qj > qj1) ? std::clamp((qj - 0.5) / (qj - qj1), 0.0, 1.0) : 0.0;
    }

    const int total = batch * cfg.quantile_reps;
    std::vector<MaxSample> samples = sample_replications(params, cfg, stream_domain, 0, total);

    std::vector<double> estimates(cfg.quantile_reps);
    std::vector<double> sorted(batch);
    for (int b = 0; b < cfg.quantile_reps; ++b) {
        for (int s = 0; s < batch; ++s) sorted[s] = samples[b * batch + s].max_backlog;
        std::sort(sorted.begin(), sorted.end());
        const double lower = sorted[j - 1], upper = sorted[j];
        if (cfg.fractional_quantile) {
            const double w = p * batch - j;
            estimates[b] = (w <= 0.0) ? lower : (1.0 - w) * lower + w * upper;
        } else {
            RngStream pick(cfg.seed, make_stream_id(stream_domain, 1, b));
            estimates[b] = (pick.uniform() < upper_weight) ? upper : lower;
        }
    }
    return median_sorted(estimates);
}

MonteCarloEstimate estimate_overshoot(const SystemParams& params, double inventory,
                                      const SimConfig& cfg, std::uint64_t stream_domain) {
    if (!(inventory >= 0.0))
        throw std::domain_error("estimate_overshoot: inventory must be >= 0");
    const int reps = cfg.overshoot_reps;
    std::vector<MaxSample> samples = sample_replications(params, cfg, stream_domain, 2, reps);
    std::vector<double> vals(reps);
    for (int r = 0; r < reps; ++r) vals[r] = std::max(0.0, samples[r].max_backlog - inventory);
    const double mean = pairwise_sum(vals) / reps;
    double se = 0.0;
    if (reps > 1) {
        std::vector<double> sq(reps);
        for (int r = 0; r < reps; ++r) sq[r] = (vals[r] - mean) * (vals[r] - mean);
        se = std::sqrt(pairwise_sum(sq) / (static_cast<double>(reps) * (reps - 1)));
    }
    return MonteCarloEstimate{mean, se};
}

MonteCarloEstimate estimate_cost_c_dep(const SystemParams& params, const CostRates& rates,
                                       double inventory, const SimConfig& cfg,
                                       std::uint64_t stream_domain) {
    const MonteCarloEstimate overshoot =
        estimate_overshoot(params, inventory, cfg, stream_domain);
    const double nh = params.n_components * rates.holding;
    const double weight = nh + rates.backorder;
    return MonteCarloEstimate{
        nh * (inventory - params.mean_backlog_unit_capacity()) + weight * overshoot.value,
        weight * overshoot.stderr};
}

std::vector<CltSample> clt_samples(const SystemParams& params, int reps, const SimConfig& cfg,
                                   std::uint64_t stream_domain) {
    if (!(params.sigma_a > 0.0))
        throw std::domain_error("clt_samples: requires sigma_a > 0");
    if (params.n_components < 2)
        throw std::domain_error("clt_samples: requires n_components >= 2");
    if (reps < 1) throw std::invalid_argument("clt_samples: reps must be >= 1");
    const double log_n = std::log(static_cast<double>(params.n_components));
    const double sqrt_log_n = std::sqrt(log_n);
    const double center = 0.5 * params.sigma * params.sigma * log_n;
    const double demand_scale = std::sqrt(2.0) / (params.sigma * params.sigma_a);

    std::vector<MaxSample> samples = sample_replications(params, cfg, stream_domain, 3, reps);
    std::vector<CltSample> out(reps);
    for (int r = 0; r < reps; ++r) {
        out[r].z = (samples[r].max_backlog - center) / sqrt_log_n;
        out[r].x_coupled = demand_scale * samples[r].demand_at_d / sqrt_log_n;
        out[r].truncated = samples[r].truncated;
    }
    return out;
}

void write_samples_csv(std::ostream& out, const std::vector<MaxSample>& samples) {
    out << "rep_index,max_backlog,demand_at_d,argmax_time,truncated_flag\n";
    char buf[128];
    for (std::size_t r = 0; r < samples.size(); ++r) {
        const MaxSample& s = samples[r];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%d\n", r, s.max_backlog,
                      s.demand_at_d, s.argmax_time, s.truncated ? 1 : 0);
        out << buf;
    }
}

}  // namespace forkjoin
