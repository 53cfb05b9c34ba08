#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "shark/core.hpp"
#include "shark/lloyd.hpp"

namespace shark {

// ---------------------------------------------------------------------------
// FWSA: feature weight self-adjustment k-means.

struct FwsaSeparations {
    std::vector<double> a;  // within-cluster, sum of squared deviations from the centroid
    std::vector<double> b;  // between-cluster, size-weighted squared centroid offset
};

FwsaSeparations fwsa_separations(const DataMatrix& X, const Labeling& labels, const Centroids& Z);

// w_v <- (prev_v + r_v / sum_u r_u) / 2 with r_v = b_v / a_v.
//
// A feature with a_v = 0 and b_v > 0 takes ten times the largest finite
// ratio (or 1 if no finite ratio is positive); a_v = b_v = 0 gives ratio 0.
// If every ratio is zero the previous weights are returned unchanged.
std::vector<double> fwsa_update_weights(std::span<const double> prev, std::span<const double> a,
                                        std::span<const double> b);

struct FwsaOptions {
    InitMethod init = InitMethod::UniformDistinct;
    LloydOptions lloyd;
};

// Objective is sum_v w_v a_v at the final state.
ClusterModel run_fwsa(const DataMatrix& X, Centroids initial, const LloydOptions& opts = {});
ClusterModel run_fwsa(const DataMatrix& X, std::size_t k, Rng& rng, const FwsaOptions& opts = {});

// ---------------------------------------------------------------------------
// LW-k-means: lasso-weighted k-means.

struct LwParams {
    double lambda = 0.005;
    // Unset: mean first-iteration dispersion times 2 / beta.
    std::optional<double> alpha;
    double beta = 4.0;

    // Throws std::invalid_argument for lambda < 0 or beta <= 1.
    void validate() const;
};

// Per-feature dispersion sum_i sum_l u_il (x_iv - z_lv)^2; the same quantity
// as the k-means Shapley value.
std::vector<double> lw_dispersion(const DataMatrix& X, const Labeling& labels, const Centroids& Z);

double soft_threshold(double x, double lambda);

// Closed-form weight step. `alpha` must be resolved (set) in `params`.
std::vector<double> lw_update_weights(std::span<const double> D, const LwParams& params);

struct LwOptions {
    InitMethod init = InitMethod::KMeansPlusPlus;
    LloydOptions lloyd;
    // Keep the initial uniform weights throughout (diagnostic).
    bool freeze_weights = false;
};

// Assignment minimises sum_v (w_v^beta + lambda |w_v|) (x_iv - z_lv)^2.
// A model whose weights all vanish is marked failed. The objective is the
// full penalised cost including the -alpha * sum(w) term.
ClusterModel run_lw(const DataMatrix& X, Centroids initial, const LwParams& params,
                    const LwOptions& opts = {});
ClusterModel run_lw(const DataMatrix& X, std::size_t k, const LwParams& params, Rng& rng,
                    const LwOptions& opts = {});

// Evenly spaced lambdas over [0, 1].
std::vector<double> lambda_grid(std::size_t grid_size);

struct StabilitySelection {
    double lambda = 0.0;
    std::vector<double> grid;
    // Mean ARI between paired subsample fits; NaN where every fit failed.
    std::vector<double> scores;
    bool fell_back = false;
};

struct StabilityOptions {
    std::size_t grid_size = 20;
    std::size_t runs_per_lambda = 10;
    double fallback_start = 0.005;
    LwParams params;  // lambda is overwritten per grid point
    LwOptions lw;
};

// For every grid lambda, fits two random half-subsamples `runs_per_lambda`
// times and scores the ARI of the two fits on their shared points (failed
// pairs score 0). Picks the highest mean score, smallest lambda on ties.
// Falls back to lambda_fallback when every lambda fails.
StabilitySelection lambda_stability_select(const DataMatrix& X, std::size_t k, Rng& rng,
                                           const StabilityOptions& opts = {});

struct LwFit {
    double lambda = 0.0;
    ClusterModel model;
};

inline constexpr std::size_t kFallbackDecades = 8;

// First lambda in {start, start/10, ...} (8 values) whose fit does not fail.
// Every attempt starts from the same random state. Throws std::runtime_error
// when none succeeds.
LwFit fit_lw_with_fallback(const DataMatrix& X, std::size_t k, double start_lambda, Rng& rng,
                           const LwParams& params = {}, const LwOptions& opts = {});
double lambda_fallback(const DataMatrix& X, std::size_t k, double start_lambda, Rng& rng,
                       const LwParams& params = {}, const LwOptions& opts = {});

}  // namespace shark
