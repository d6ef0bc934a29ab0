#pragma once

#include "forkjoin/model.hpp"

namespace forkjoin {

/// Numerical knobs for the mixed Gumbel+normal approximation.
struct MixedQuadConfig {
    /// Budget for the outer expectation integral (max subdivisions = 8x this).
    int outer_nodes = 64;
    double root_tol = 1e-10;
    double bracket_expansion = 2.0;

    void validate() const;
};

/// First-order rule: I = (sigma^2/2) log N, all mass at the log N scale.
/// Requires log N > (sigma^2 + sigma_a^2) / sigma^2 so costs stay positive.
Solution first_order(const SystemParams& params, const CostRates& rates);

/// Gumbel limit of the independent max (sigma_a = 0); closed form via the
/// exponential integral. Requires gamma < 1 - e^{-N} so the inventory is
/// nonnegative.
Solution gumbel_indep(const SystemParams& params, const CostRates& rates);

/// Normal limit for dependent demand (sigma_a > 0, N >= 2).
Solution normal_dep(const SystemParams& params, const CostRates& rates);

/// P((sigma^2/2) G + (sigma^2/2) log N + (sigma sigma_a/sqrt2) sqrt(log N) X <= I).
double mixed_cdf(const SystemParams& params, double inventory);

/// E[(mixed max - I)^+]: outer integral over the Gumbel component with the
/// inner normal integral in closed form.
double mixed_overshoot(const SystemParams& params, double inventory,
                       const MixedQuadConfig& quad = MixedQuadConfig{});

/// Combined Gumbel+normal approximation; inventory from the mixed quantile
/// equation, capacity from the mixed cost.
Solution mixed(const SystemParams& params, const CostRates& rates,
               const MixedQuadConfig& quad = MixedQuadConfig{});

}  // namespace forkjoin
