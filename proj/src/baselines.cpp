#include "shark/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include "shark/eval.hpp"

namespace shark {

// ---------------------------------------------------------------------------
// FWSA

FwsaSeparations fwsa_separations(const DataMatrix& X, const Labeling& labels, const Centroids& Z) {
    if (labels.size() != X.rows() || Z.cols() != X.cols() || labels.k != Z.rows())
        throw DimensionError("fwsa_separations: shape mismatch");
    const auto sizes = labels.cluster_sizes();
    for (std::size_t l = 0; l < sizes.size(); ++l)
        if (sizes[l] == 0) throw EmptyCluster(l);

    const std::size_t m = X.cols();
    FwsaSeparations s;
    s.a = feature_dispersion(X, labels, Z);
    s.b.assign(m, 0.0);
    std::vector<double> centre(m, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i)
        for (std::size_t v = 0; v < m; ++v) centre[v] += X(i, v);
    for (double& c : centre) c /= static_cast<double>(X.rows());
    for (std::size_t l = 0; l < Z.rows(); ++l)
        for (std::size_t v = 0; v < m; ++v) {
            const double d = Z(l, v) - centre[v];
            s.b[v] += static_cast<double>(sizes[l]) * d * d;
        }
    return s;
}

std::vector<double> fwsa_update_weights(std::span<const double> prev, std::span<const double> a,
                                        std::span<const double> b) {
    const std::size_t m = prev.size();
    if (a.size() != m || b.size() != m) throw DimensionError("fwsa_update_weights: size mismatch");

    std::vector<double> ratio(m, 0.0);
    std::vector<bool> compact(m, false);
    double max_finite = 0.0;
    for (std::size_t v = 0; v < m; ++v) {
        if (a[v] > 0.0) {
            ratio[v] = b[v] / a[v];
            max_finite = std::max(max_finite, ratio[v]);
        } else if (b[v] > 0.0) {
            compact[v] = true;
        }
    }
    const double compact_ratio = max_finite > 0.0 ? 10.0 * max_finite : 1.0;
    for (std::size_t v = 0; v < m; ++v)
        if (compact[v]) ratio[v] = compact_ratio;

    const double total = std::accumulate(ratio.begin(), ratio.end(), 0.0);
    if (!(total > 0.0) || !std::isfinite(total)) return {prev.begin(), prev.end()};

    std::vector<double> w(m);
    for (std::size_t v = 0; v < m; ++v) w[v] = 0.5 * (prev[v] + ratio[v] / total);
    return w;
}

ClusterModel run_fwsa(const DataMatrix& X, Centroids initial, const LloydOptions& opts) {
    WeightingScheme scheme;
    scheme.initial = WeightVector::uniform(X.cols()).values();
    scheme.update = [](const DataMatrix& data, const Labeling& labels, const Centroids& Z,
                       std::span<const double> prev, std::size_t) {
        const auto s = fwsa_separations(data, labels, Z);
        return std::optional<std::vector<double>>(fwsa_update_weights(prev, s.a, s.b));
    };
    scheme.objective = [](const DataMatrix& data, const Labeling& labels, const Centroids& Z,
                          std::span<const double> w) {
        const auto a = feature_dispersion(data, labels, Z);
        return std::inner_product(a.begin(), a.end(), w.begin(), 0.0);
    };
    return weighted_lloyd(X, std::move(initial), scheme, opts);
}

ClusterModel run_fwsa(const DataMatrix& X, std::size_t k, Rng& rng, const FwsaOptions& opts) {
    return run_fwsa(X, initialize(X, k, opts.init, rng), opts.lloyd);
}

// ---------------------------------------------------------------------------
// LW-k-means

void LwParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("LwParams: lambda must be finite and >= 0");
    if (!(beta > 1.0) || !std::isfinite(beta))
        throw std::invalid_argument("LwParams: beta must be > 1");
    if (alpha && !std::isfinite(*alpha)) throw std::invalid_argument("LwParams: alpha must be finite");
}

std::vector<double> lw_dispersion(const DataMatrix& X, const Labeling& labels, const Centroids& Z) {
    return feature_dispersion(X, labels, Z);
}

double soft_threshold(double x, double lambda) {
    if (x > lambda) return x - lambda;
    if (x < -lambda) return x + lambda;
    return 0.0;
}

std::vector<double> lw_update_weights(std::span<const double> D, const LwParams& params) {
    params.validate();
    if (!params.alpha) throw std::invalid_argument("lw_update_weights: alpha is not resolved");
    const double alpha = *params.alpha;
    const double exponent = 1.0 / (params.beta - 1.0);
    std::vector<double> w(D.size(), 0.0);
    for (std::size_t v = 0; v < D.size(); ++v) {
        if (D[v] == 0.0) continue;
        const double base = soft_threshold(alpha / D[v], params.lambda) / params.beta;
        // Negative bases have no real fractional power; treated as pruned.
        if (base > 0.0) w[v] = std::pow(base, exponent);
    }
    return w;
}

namespace {

std::vector<double> lw_distance_weights(std::span<const double> w, const LwParams& params) {
    std::vector<double> out(w.size());
    for (std::size_t v = 0; v < w.size(); ++v)
        out[v] = std::pow(w[v], params.beta) + params.lambda * std::abs(w[v]);
    return out;
}

double lw_cost(const DataMatrix& X, const Centroids& Z, std::span<const double> w,
               const LwParams& params, double alpha) {
    const auto coef = lw_distance_weights(w, params);
    double total = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < Z.rows(); ++t)
            best = std::min(best, weighted_sqdist(X.row(i), Z.row(t), coef));
        total += best;
    }
    return total - alpha * std::accumulate(w.begin(), w.end(), 0.0);
}

}  // namespace

ClusterModel run_lw(const DataMatrix& X, Centroids initial, const LwParams& params,
                    const LwOptions& opts) {
    params.validate();
    auto resolved = std::make_shared<LwParams>(params);

    WeightingScheme scheme;
    scheme.initial = WeightVector::uniform(X.cols()).values();
    scheme.distance_weights = [resolved](std::span<const double> w) {
        return lw_distance_weights(w, *resolved);
    };
    const bool frozen = opts.freeze_weights;
    scheme.update = [resolved, frozen](const DataMatrix& data, const Labeling& labels,
                                       const Centroids& Z, std::span<const double> prev,
                                       std::size_t) -> std::optional<std::vector<double>> {
        const auto D = lw_dispersion(data, labels, Z);
        if (!resolved->alpha) {
            const double mean_d = std::accumulate(D.begin(), D.end(), 0.0) / static_cast<double>(D.size());
            resolved->alpha = mean_d * 2.0 / resolved->beta;
        }
        if (frozen) return std::vector<double>(prev.begin(), prev.end());
        auto w = lw_update_weights(D, *resolved);
        if (std::none_of(w.begin(), w.end(), [](double x) { return x > 0.0; })) return std::nullopt;
        return w;
    };
    scheme.objective = [resolved](const DataMatrix& data, const Labeling&, const Centroids& Z,
                                  std::span<const double> w) {
        return lw_cost(data, Z, w, *resolved, resolved->alpha.value_or(0.0));
    };
    return weighted_lloyd(X, std::move(initial), scheme, opts.lloyd);
}

ClusterModel run_lw(const DataMatrix& X, std::size_t k, const LwParams& params, Rng& rng,
                    const LwOptions& opts) {
    params.validate();
    return run_lw(X, initialize(X, k, opts.init, rng), params, opts);
}

std::vector<double> lambda_grid(std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("lambda_grid: grid_size must be >= 2");
    std::vector<double> grid(grid_size);
    for (std::size_t g = 0; g < grid_size; ++g)
        grid[g] = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    return grid;
}

LwFit fit_lw_with_fallback(const DataMatrix& X, std::size_t k, double start_lambda, Rng& rng,
                           const LwParams& params, const LwOptions& opts) {
    if (!(start_lambda > 0.0)) throw std::invalid_argument("lambda fallback: start must be > 0");
    double lambda = start_lambda;
    for (std::size_t decade = 0; decade < kFallbackDecades; ++decade, lambda /= 10.0) {
        Rng attempt = rng;
        LwParams p = params;
        p.lambda = lambda;
        ClusterModel model = run_lw(X, k, p, attempt, opts);
        if (!model.failed) {
            rng = attempt;
            return {lambda, std::move(model)};
        }
    }
    throw std::runtime_error("lambda fallback: no lambda within 8 decades of " +
                             std::to_string(start_lambda) + " produced a valid clustering");
}

double lambda_fallback(const DataMatrix& X, std::size_t k, double start_lambda, Rng& rng,
                       const LwParams& params, const LwOptions& opts) {
    return fit_lw_with_fallback(X, k, start_lambda, rng, params, opts).lambda;
}

namespace {

std::vector<std::size_t> half_sample(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(n / 2);
    std::sort(idx.begin(), idx.end());
    return idx;
}

// ARI of two subsample fits restricted to the points both samples contain.
double paired_stability(const DataMatrix& X, std::size_t k, const LwParams& params,
                        const LwOptions& opts, Rng& rng) {
    const auto first = half_sample(X.rows(), rng);
    const auto second = half_sample(X.rows(), rng);
    const DataMatrix Xa = X.select_rows(first);
    const DataMatrix Xb = X.select_rows(second);
    const auto fit_a = run_lw(Xa, k, params, rng, opts);
    const auto fit_b = run_lw(Xb, k, params, rng, opts);
    if (fit_a.failed || fit_b.failed) return std::nan("");

    std::vector<std::size_t> la, lb;
    std::size_t i = 0, j = 0;
    while (i < first.size() && j < second.size()) {
        if (first[i] < second[j]) {
            ++i;
        } else if (second[j] < first[i]) {
            ++j;
        } else {
            la.push_back(fit_a.labels[i++]);
            lb.push_back(fit_b.labels[j++]);
        }
    }
    return ari(la, lb);
}

}  // namespace

StabilitySelection lambda_stability_select(const DataMatrix& X, std::size_t k, Rng& rng,
                                           const StabilityOptions& opts) {
    validate_data(X);
    if (opts.runs_per_lambda == 0)
        throw std::invalid_argument("lambda_stability_select: runs_per_lambda must be >= 1");
    if (X.rows() / 2 < k)
        throw std::invalid_argument("lambda_stability_select: half-samples smaller than k");

    StabilitySelection out;
    out.grid = lambda_grid(opts.grid_size);
    out.scores.assign(out.grid.size(), std::nan(""));
    const std::uint64_t base_seed = rng();

    std::size_t best = out.grid.size();
    for (std::size_t g = 0; g < out.grid.size(); ++g) {
        Rng stream(base_seed + g);
        LwParams p = opts.params;
        p.lambda = out.grid[g];
        double sum = 0.0;
        std::size_t successes = 0;
        for (std::size_t r = 0; r < opts.runs_per_lambda; ++r) {
            const double s = paired_stability(X, k, p, opts.lw, stream);
            if (std::isnan(s)) continue;
            sum += s;
            ++successes;
        }
        if (successes == 0) continue;
        out.scores[g] = sum / static_cast<double>(opts.runs_per_lambda);
        if (best == out.grid.size() || out.scores[g] > out.scores[best]) best = g;
    }

    if (best == out.grid.size()) {
        out.fell_back = true;
        out.lambda = lambda_fallback(X, k, opts.fallback_start, rng, opts.params, opts.lw);
    } else {
        out.lambda = out.grid[best];
    }
    return out;
}

}  // namespace shark
