#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "forkjoin/model.hpp"
#include "forkjoin/rng.hpp"

namespace forkjoin {

/// Grid-simulation protocol: step 0.001, horizon 2*t_hat with
/// t_hat = (sigma^2+sigma_a^2)/2 * H_N, early stop once the whole
/// replication has drifted `slack` below its running maximum.
struct SimConfig {
    double grid_step = 1e-3;
    double horizon_factor = 2.0;
    /// Drop below the running max that triggers early stop; unset means the
    /// slack solving n * exp(-2 slack / (sigma^2+sigma_a^2)) = 1e-6.
    std::optional<double> early_stop_slack;
    int quantile_batch = 100;
    int quantile_reps = 100;
    int overshoot_reps = 10000;
    std::uint64_t seed = 0;
    bool bridge_correction = false;
    /// Use the fractional-order-statistic estimator instead of the
    /// randomized median-unbiased one.
    bool fractional_quantile = false;
    /// Cap on n_components * steps per replication.
    long long step_budget = 2'000'000'000LL;
    /// 0: hardware concurrency, capped by env FORKJOIN_EVT_THREADS.
    int max_workers = 0;

    void validate() const;
};

struct MaxSample {
    double max_backlog;   // realized max_i sup_t X_i(t), >= 0
    double demand_at_d;   // W_A at the grid point nearest (sigma^2/2) log n
    double argmax_time;
    bool truncated;       // argmax fell in the final 5% of the horizon
};

struct MonteCarloEstimate {
    double value;
    double stderr;
};

struct CltSample {
    double z;          // (max - (sigma^2/2) log n) / sqrt(log n)
    double x_coupled;  // sqrt(2)/(sigma sigma_a) * demand_at_d / sqrt(log n)
    bool truncated;    // argmax fell in the final 5% of the horizon
};

/// t_hat: expected attainment-time scale (sigma^2+sigma_a^2)/2 * sum 1/j.
double attainment_time_scale(const SystemParams& params);

double default_early_stop_slack(const SystemParams& params);

/// Effective worker count: cfg.max_workers, else FORKJOIN_EVT_THREADS,
/// else hardware concurrency.
int worker_count(const SimConfig& cfg);

/// One replication of max_i sup_t (W_i + W_A - t) on the grid.
MaxSample sample_max_backlog(const SystemParams& params, const SimConfig& cfg,
                             RngStream& stream);

/// `count` replications on streams (seed, domain/kind/rep); schedule-independent.
std::vector<MaxSample> sample_replications(const SystemParams& params, const SimConfig& cfg,
                                           std::uint64_t stream_domain, std::uint64_t kind,
                                           int count);

/// Median-unbiased p-quantile of max_i Q_i: per batch, randomize between the
/// bracketing order statistics with the weight solving the binomial
/// median-unbiasedness condition; return the median over batches.
double estimate_quantile(const SystemParams& params, double p, const SimConfig& cfg,
                         std::uint64_t stream_domain = 0);

/// Monte-Carlo E[(max_i Q_i - I)^+] with sample standard error.
MonteCarloEstimate estimate_overshoot(const SystemParams& params, double inventory,
                                      const SimConfig& cfg, std::uint64_t stream_domain = 0);

/// C_N(I) = N h (I - (sigma^2+sigma_a^2)/2) + (N h + b) E[(max - I)^+],
/// overshoot estimated by simulation.
MonteCarloEstimate estimate_cost_c_dep(const SystemParams& params, const CostRates& rates,
                                       double inventory, const SimConfig& cfg,
                                       std::uint64_t stream_domain = 0);

/// Standardized (max, coupled demand) pairs for the normal-limit harness;
/// requires sigma_a > 0 and n >= 2.
std::vector<CltSample> clt_samples(const SystemParams& params, int reps, const SimConfig& cfg,
                                   std::uint64_t stream_domain = 0);

/// Raw sample dump, one CSV record per replication:
/// rep_index,max_backlog,demand_at_d,argmax_time,truncated_flag
void write_samples_csv(std::ostream& out, const std::vector<MaxSample>& samples);

/// Index-ordered pairwise summation (deterministic regardless of how the
/// values were produced).
double pairwise_sum(const std::vector<double>& values);

}  // namespace forkjoin
