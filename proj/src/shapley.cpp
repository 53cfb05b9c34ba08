#include "shark/shapley.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace shark {

double ShapleyProfile::total() const { return std::accumulate(phi.begin(), phi.end(), 0.0); }

namespace {

void require_fitted_state(const DataMatrix& X, const Labeling& labels, const Centroids& Z) {
    if (labels.size() != X.rows() || Z.cols() != X.cols() || labels.k != Z.rows())
        throw DimensionError("Shapley: data, labels and centroids disagree in shape");
    const auto sizes = labels.cluster_sizes();
    for (std::size_t l = 0; l < sizes.size(); ++l)
        if (sizes[l] == 0) throw EmptyCluster(l);
}

void require_positive(const ShapleyProfile& profile) {
    if (profile.phi.empty()) throw std::invalid_argument("Shapley profile is empty");
    for (double p : profile.phi)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("Shapley values must be finite and nonnegative");
}

}  // namespace

ShapleyProfile shapley_closed_form(const DataMatrix& X, const Labeling& labels, const Centroids& Z) {
    require_fitted_state(X, labels, Z);
    return {feature_dispersion(X, labels, Z)};
}

ShapleyProfile shapley_exact_oracle(const DataMatrix& X, const Labeling& labels, const Centroids& Z) {
    require_fitted_state(X, labels, Z);
    const std::size_t m = X.cols();
    if (m > kMaxOracleFeatures)
        throw std::invalid_argument("shapley_exact_oracle: refusing m = " + std::to_string(m) +
                                    " > " + std::to_string(kMaxOracleFeatures));

    // Characteristic function on every coalition, evaluated directly.
    const std::size_t subsets = std::size_t{1} << m;
    std::vector<double> cost(subsets, 0.0);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        double f = 0.0;
        for (std::size_t i = 0; i < X.rows(); ++i) {
            auto x = X.row(i);
            auto z = Z.row(labels[i]);
            for (std::size_t v = 0; v < m; ++v) {
                if (!(mask >> v & 1u)) continue;
                const double d = x[v] - z[v];
                f += d * d;
            }
        }
        cost[mask] = f;
    }

    std::vector<double> factorial(m + 1, 1.0);
    for (std::size_t j = 1; j <= m; ++j) factorial[j] = factorial[j - 1] * static_cast<double>(j);

    ShapleyProfile out{std::vector<double>(m, 0.0)};
    for (std::size_t v = 0; v < m; ++v) {
        const std::size_t bit = std::size_t{1} << v;
        double phi = 0.0;
        for (std::size_t mask = 0; mask < subsets; ++mask) {
            if (mask & bit) continue;
            const auto s = static_cast<std::size_t>(std::popcount(mask));
            const double weight = factorial[s] * factorial[m - s - 1] / factorial[m];
            phi += weight * (cost[mask | bit] - cost[mask]);
        }
        out.phi[v] = phi;
    }
    return out;
}

double shapley_floor(const ShapleyProfile& profile) {
    return 1e-12 * std::max(1.0, profile.total());
}

WeightVector update_weights(const ShapleyProfile& profile) {
    require_positive(profile);
    const double floor = shapley_floor(profile);
    std::vector<double> inv(profile.size());
    for (std::size_t v = 0; v < inv.size(); ++v) inv[v] = 1.0 / std::max(profile.phi[v], floor);
    const double sum = std::accumulate(inv.begin(), inv.end(), 0.0);
    for (double& w : inv) w /= sum;
    return WeightVector(std::move(inv));
}

double shark_objective(const ShapleyProfile& profile) {
    require_positive(profile);
    const double floor = shapley_floor(profile);
    double inv_sum = 0.0;
    for (double p : profile.phi) inv_sum += 1.0 / std::max(p, floor);
    return static_cast<double>(profile.size()) / inv_sum;
}

double comparable_kmeans_objective(const ShapleyProfile& profile) {
    if (profile.phi.empty()) throw std::invalid_argument("Shapley profile is empty");
    return profile.total() / static_cast<double>(profile.size());
}

GapReport gap_report(const ShapleyProfile& profile) {
    if (profile.size() < 2) throw std::invalid_argument("gap_report: needs at least two features");
    for (double p : profile.phi)
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::invalid_argument("gap_report: Shapley values must be positive");
    const auto [lo, hi] = std::minmax_element(profile.phi.begin(), profile.phi.end());
    GapReport r;
    r.arithmetic_mean = comparable_kmeans_objective(profile);
    r.harmonic_mean = shark_objective(profile);
    r.epsilon = r.arithmetic_mean - r.harmonic_mean;
    r.lower_bound = (*hi - *lo) * (*hi - *lo) / (2.0 * (*hi + *lo));
    r.guaranteed_bound = r.lower_bound * 2.0 / static_cast<double>(profile.size());
    return r;
}

ClusterModel run_shark(const DataMatrix& X, Centroids initial, const LloydOptions& opts) {
    WeightingScheme scheme;
    scheme.initial = WeightVector::uniform(X.cols()).values();
    scheme.update = [](const DataMatrix& data, const Labeling& labels, const Centroids& Z,
                       std::span<const double>, std::size_t) {
        return std::optional<std::vector<double>>(
            update_weights(shapley_closed_form(data, labels, Z)).values());
    };
    scheme.objective = [](const DataMatrix& data, const Labeling& labels, const Centroids& Z,
                          std::span<const double>) {
        return shark_objective(shapley_closed_form(data, labels, Z));
    };
    return weighted_lloyd(X, std::move(initial), scheme, opts);
}

ClusterModel run_shark(const DataMatrix& X, std::size_t k, Rng& rng, const SharkOptions& opts) {
    return run_shark(X, initialize(X, k, opts.init, rng), opts.lloyd);
}

}  // namespace shark
