#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "shark/core.hpp"

namespace shark {

using Rng = std::mt19937_64;

enum class InitMethod { UniformDistinct, KMeansPlusPlus };

std::string_view to_string(InitMethod m);
InitMethod init_method_from_string(std::string_view s);

// Raised by update_centroids when a cluster has no members.
class EmptyCluster : public std::runtime_error {
public:
    explicit EmptyCluster(std::size_t cluster);
    std::size_t cluster() const { return cluster_; }

private:
    std::size_t cluster_;
};

struct ClusterModel {
    Labeling labels;
    Centroids centroids;
    std::vector<double> weights;
    double objective = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    bool failed = false;
    // Algorithm objective after each completed iteration.
    std::vector<double> objective_trace;
};

struct LloydOptions {
    std::size_t max_iterations = 300;
    // Treat hitting the iteration cap as a failure.
    bool strict = false;
};

// k distinct data rows chosen uniformly without replacement.
Centroids init_uniform(const DataMatrix& X, std::size_t k, Rng& rng);
// D^2 seeding.
Centroids init_kmeanspp(const DataMatrix& X, std::size_t k, Rng& rng);
Centroids initialize(const DataMatrix& X, std::size_t k, InitMethod method, Rng& rng);

// Nearest centroid under the weighted squared distance; exact ties go to the
// smallest centroid index. `w` need not lie on the simplex.
Labeling assign(const DataMatrix& X, const Centroids& Z, std::span<const double> w);

// Component-wise means. Throws EmptyCluster naming the first empty cluster.
Centroids update_centroids(const DataMatrix& X, const Labeling& labels, std::size_t k);

double kmeans_objective(const DataMatrix& X, const Labeling& labels, const Centroids& Z);

// Per-feature within-cluster sum of squares, sum_l sum_{i in C_l} (x_iv - z_lv)^2.
std::vector<double> feature_dispersion(const DataMatrix& X, const Labeling& labels,
                                       const Centroids& Z);

// Plugs an algorithm-specific weighting into the Lloyd loop.
//
// Each iteration: labels <- assign(X, Z, distance_weights(w)); stop when the
// labels repeat; fail on an empty cluster; Z <- means; w <- update(...);
// fail if update returns nullopt.
struct WeightingScheme {
    std::vector<double> initial;
    // Per-feature coefficients used by the assignment step. Identity when empty.
    std::function<std::vector<double>(std::span<const double> w)> distance_weights;
    // Nullopt when no weights remain usable.
    std::function<std::optional<std::vector<double>>(
        const DataMatrix& X, const Labeling& labels, const Centroids& Z,
        std::span<const double> prev, std::size_t iteration)>
        update;
    std::function<double(const DataMatrix& X, const Labeling& labels, const Centroids& Z,
                         std::span<const double> w)>
        objective;
};

ClusterModel weighted_lloyd(const DataMatrix& X, Centroids initial,
                            const WeightingScheme& scheme, const LloydOptions& opts = {});

// Plain Lloyd iteration with uniform weights 1/m; objective is the k-means cost.
ClusterModel run_kmeans(const DataMatrix& X, Centroids initial, const LloydOptions& opts = {});
ClusterModel run_kmeans(const DataMatrix& X, std::size_t k, InitMethod init, Rng& rng,
                        const LloydOptions& opts = {});

}  // namespace shark
