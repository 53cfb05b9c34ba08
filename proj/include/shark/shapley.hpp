#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "shark/core.hpp"
#include "shark/lloyd.hpp"

namespace shark {

// Per-feature Shapley values of the k-means cost game, where a coalition S of
// features pays the within-cluster sum of squares restricted to S.
struct ShapleyProfile {
    std::vector<double> phi;

    std::size_t size() const { return phi.size(); }
    double total() const;
};

struct GapReport {
    double arithmetic_mean = 0.0;
    double harmonic_mean = 0.0;
    double epsilon = 0.0;      // arithmetic_mean - harmonic_mean
    double lower_bound = 0.0;  // (max - min)^2 / (2 (max + min))
    // (max - min)^2 / (m (max + min)): holds for every m, equals lower_bound
    // at m = 2, attained when all interior values are 2 min max / (min + max).
    double guaranteed_bound = 0.0;
};

// The cost game is additive, so each feature's Shapley value is its own
// within-cluster dispersion. O(n m).
ShapleyProfile shapley_closed_form(const DataMatrix& X, const Labeling& labels, const Centroids& Z);

inline constexpr std::size_t kMaxOracleFeatures = 15;

// Literal Shapley sum over all coalitions, with the characteristic function
// evaluated from scratch on every subset. O(2^m n m); refuses m > 15.
ShapleyProfile shapley_exact_oracle(const DataMatrix& X, const Labeling& labels, const Centroids& Z);

// Smallest admissible Shapley value before inversion: 1e-12 * max(1, sum phi).
double shapley_floor(const ShapleyProfile& profile);

// w_v proportional to 1/phi_v, with phi clamped at shapley_floor.
WeightVector update_weights(const ShapleyProfile& profile);

// Harmonic mean m / sum_v 1/phi_v (clamped), the cost SHARK minimises.
double shark_objective(const ShapleyProfile& profile);

// Arithmetic mean of phi: the k-means cost divided by m.
double comparable_kmeans_objective(const ShapleyProfile& profile);

GapReport gap_report(const ShapleyProfile& profile);

struct SharkOptions {
    InitMethod init = InitMethod::UniformDistinct;
    LloydOptions lloyd;
};

// Shapley reweighted k-means. Reported objective is the harmonic mean of the
// final Shapley values.
ClusterModel run_shark(const DataMatrix& X, Centroids initial, const LloydOptions& opts = {});
ClusterModel run_shark(const DataMatrix& X, std::size_t k, Rng& rng, const SharkOptions& opts = {});

}  // namespace shark
