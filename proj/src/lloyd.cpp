#include "shark/lloyd.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace shark {

std::string_view to_string(InitMethod m) {
    switch (m) {
        case InitMethod::UniformDistinct: return "uniform";
        case InitMethod::KMeansPlusPlus: return "kmeans++";
    }
    return "unknown";
}

InitMethod init_method_from_string(std::string_view s) {
    if (s == "uniform" || s == "uniform_distinct") return InitMethod::UniformDistinct;
    if (s == "kmeans++" || s == "kmeanspp" || s == "kmeans_pp") return InitMethod::KMeansPlusPlus;
    throw std::invalid_argument("unknown init method: " + std::string(s));
}

EmptyCluster::EmptyCluster(std::size_t cluster)
    : std::runtime_error("cluster " + std::to_string(cluster) + " is empty"), cluster_(cluster) {}

namespace {

// One representative index per distinct row value.
std::vector<std::size_t> distinct_rows(const DataMatrix& X) {
    std::vector<std::size_t> idx(X.rows());
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [&](std::size_t a, std::size_t b) {
        auto ra = X.row(a), rb = X.row(b);
        return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    auto same = [&](std::size_t a, std::size_t b) {
        auto ra = X.row(a), rb = X.row(b);
        return std::equal(ra.begin(), ra.end(), rb.begin());
    };
    std::stable_sort(idx.begin(), idx.end(), less);
    idx.erase(std::unique(idx.begin(), idx.end(), same), idx.end());
    std::sort(idx.begin(), idx.end());
    return idx;
}

void check_k(const DataMatrix& X, std::size_t k) {
    validate_data(X);
    if (k == 0) throw std::invalid_argument("k must be at least 1");
    if (k > X.rows()) throw std::invalid_argument("k exceeds the number of data points");
}

}  // namespace

Centroids init_uniform(const DataMatrix& X, std::size_t k, Rng& rng) {
    check_k(X, k);
    auto pool = distinct_rows(X);
    if (pool.size() < k)
        throw std::invalid_argument("init_uniform: fewer than k distinct rows");
    // Partial Fisher-Yates.
    for (std::size_t j = 0; j < k; ++j) {
        std::uniform_int_distribution<std::size_t> pick(j, pool.size() - 1);
        std::swap(pool[j], pool[pick(rng)]);
    }
    pool.resize(k);
    return X.select_rows(pool);
}

Centroids init_kmeanspp(const DataMatrix& X, std::size_t k, Rng& rng) {
    check_k(X, k);
    const std::size_t n = X.rows();
    std::vector<std::size_t> chosen;
    chosen.reserve(k);
    chosen.push_back(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = sqdist(X.row(i), X.row(chosen[0]));

    while (chosen.size() < k) {
        const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t next = n;
        if (total > 0.0) {
            const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
            double cum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (d2[i] <= 0.0) continue;
                cum += d2[i];
                next = i;
                if (cum > u) break;
            }
        } else {
            // Every row coincides with a chosen centroid; nothing distinct is left.
            throw std::invalid_argument("init_kmeanspp: fewer than k distinct rows");
        }
        chosen.push_back(next);
        for (std::size_t i = 0; i < n; ++i)
            d2[i] = std::min(d2[i], sqdist(X.row(i), X.row(next)));
    }
    return X.select_rows(chosen);
}

Centroids initialize(const DataMatrix& X, std::size_t k, InitMethod method, Rng& rng) {
    return method == InitMethod::KMeansPlusPlus ? init_kmeanspp(X, k, rng)
                                                : init_uniform(X, k, rng);
}

Labeling assign(const DataMatrix& X, const Centroids& Z, std::span<const double> w) {
    const std::size_t n = X.rows(), m = X.cols(), k = Z.rows();
    if (Z.cols() != m || w.size() != m) throw DimensionError("assign: dimension mismatch");
    if (k == 0) throw std::invalid_argument("assign: no centroids");
    std::vector<std::size_t> labels(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = X.row(i).data();
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_t = 0;
        for (std::size_t t = 0; t < k; ++t) {
            const double* z = Z.row(t).data();
            double d = 0.0;
            for (std::size_t v = 0; v < m; ++v) {
                const double diff = x[v] - z[v];
                d += w[v] * diff * diff;
            }
            if (d < best) {
                best = d;
                best_t = t;
            }
        }
        labels[i] = best_t;
    }
    return Labeling(std::move(labels), k);
}

Centroids update_centroids(const DataMatrix& X, const Labeling& labels, std::size_t k) {
    if (labels.size() != X.rows()) throw DimensionError("update_centroids: label count mismatch");
    const std::size_t m = X.cols();
    Centroids Z(k, m);
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const std::size_t l = labels[i];
        if (l >= k) throw std::invalid_argument("update_centroids: label out of range");
        ++counts[l];
        auto z = Z.row(l);
        auto x = X.row(i);
        for (std::size_t v = 0; v < m; ++v) z[v] += x[v];
    }
    for (std::size_t l = 0; l < k; ++l) {
        if (counts[l] == 0) throw EmptyCluster(l);
        for (double& z : Z.row(l)) z /= static_cast<double>(counts[l]);
    }
    return Z;
}

std::vector<double> feature_dispersion(const DataMatrix& X, const Labeling& labels,
                                       const Centroids& Z) {
    if (labels.size() != X.rows() || Z.cols() != X.cols())
        throw DimensionError("feature_dispersion: dimension mismatch");
    const std::size_t m = X.cols();
    std::vector<double> phi(m, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        auto x = X.row(i);
        auto z = Z.row(labels[i]);
        for (std::size_t v = 0; v < m; ++v) {
            const double d = x[v] - z[v];
            phi[v] += d * d;
        }
    }
    return phi;
}

double kmeans_objective(const DataMatrix& X, const Labeling& labels, const Centroids& Z) {
    if (labels.size() != X.rows() || Z.cols() != X.cols())
        throw DimensionError("kmeans_objective: dimension mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < X.rows(); ++i) total += sqdist(X.row(i), Z.row(labels[i]));
    return total;
}

ClusterModel weighted_lloyd(const DataMatrix& X, Centroids initial,
                            const WeightingScheme& scheme, const LloydOptions& opts) {
    validate_data(X);
    const std::size_t k = initial.rows();
    if (k == 0 || initial.cols() != X.cols())
        throw DimensionError("weighted_lloyd: initial centroids do not match the data");
    if (scheme.initial.size() != X.cols())
        throw DimensionError("weighted_lloyd: initial weights do not match the data");

    ClusterModel model;
    model.centroids = std::move(initial);
    model.weights = scheme.initial;

    std::optional<Labeling> previous;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        const std::vector<double> dw =
            scheme.distance_weights ? scheme.distance_weights(model.weights) : model.weights;
        Labeling labels = assign(X, model.centroids, dw);
        if (previous && labels == *previous) {
            model.converged = true;
            break;
        }
        model.iterations = it;
        model.labels = std::move(labels);
        if (!model.labels.valid()) {
            model.failed = true;
            return model;
        }
        model.centroids = update_centroids(X, model.labels, k);
        auto next = scheme.update(X, model.labels, model.centroids, model.weights, it);
        if (!next) {
            model.failed = true;
            return model;
        }
        model.weights = std::move(*next);
        model.objective_trace.push_back(
            scheme.objective(X, model.labels, model.centroids, model.weights));
        previous = model.labels;
    }
    model.objective = model.objective_trace.empty() ? 0.0 : model.objective_trace.back();
    if (!model.converged && opts.strict) model.failed = true;
    return model;
}

ClusterModel run_kmeans(const DataMatrix& X, Centroids initial, const LloydOptions& opts) {
    WeightingScheme scheme;
    scheme.initial = WeightVector::uniform(X.cols()).values();
    scheme.update = [](const DataMatrix&, const Labeling&, const Centroids&,
                       std::span<const double> prev, std::size_t) {
        return std::optional<std::vector<double>>(std::vector<double>(prev.begin(), prev.end()));
    };
    scheme.objective = [](const DataMatrix& X, const Labeling& labels, const Centroids& Z,
                          std::span<const double>) { return kmeans_objective(X, labels, Z); };
    return weighted_lloyd(X, std::move(initial), scheme, opts);
}

ClusterModel run_kmeans(const DataMatrix& X, std::size_t k, InitMethod init, Rng& rng,
                        const LloydOptions& opts) {
    return run_kmeans(X, initialize(X, k, init, rng), opts);
}

}  // namespace shark
