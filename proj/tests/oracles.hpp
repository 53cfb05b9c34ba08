#pragma once

// Test-only reference computations, written independently of the library
// code paths they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "shark/core.hpp"

namespace shark::testing {

// Hubert-Arabie ARI from the four pair-agreement counts over all n(n-1)/2 pairs.
inline double pair_counting_ari(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double both = 0, only_a = 0, only_b = 0, neither = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            const bool sa = a[i] == a[j], sb = b[i] == b[j];
            if (sa && sb) ++both;
            else if (sa) ++only_a;
            else if (sb) ++only_b;
            else ++neither;
        }
    const double denom = (neither + only_b) * (only_b + both) + (neither + only_a) * (only_a + both);
    if (denom == 0.0) return only_a == 0 && only_b == 0 ? 1.0 : 0.0;
    return 2.0 * (neither * both - only_b * only_a) / denom;
}

inline std::size_t brute_force_nearest(const std::vector<double>& x, const std::vector<std::vector<double>>& Z) {
    std::size_t best = 0;
    double best_d = INFINITY;
    for (std::size_t t = 0; t < Z.size(); ++t) {
        double d = 0;
        for (std::size_t v = 0; v < x.size(); ++v) d += (x[v] - Z[t][v]) * (x[v] - Z[t][v]);
        if (d < best_d) {
            best_d = d;
            best = t;
        }
    }
    return best;
}

inline DataMatrix random_matrix(std::size_t n, std::size_t m, std::mt19937_64& rng, double scale = 1.0) {
    std::normal_distribution<double> g(0.0, scale);
    DataMatrix X(n, m);
    for (std::size_t i = 0; i < n; ++i)
        for (double& x : X.row(i)) x = g(rng);
    return X;
}

// Random labeling of n points in which all k clusters are used (n >= k).
inline Labeling random_valid_labeling(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> l(n);
    for (std::size_t i = 0; i < n; ++i) l[i] = i < k ? i : std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
    std::shuffle(l.begin(), l.end(), rng);
    return Labeling(std::move(l), k);
}

// Cluster means, computed without the library.
inline Centroids means_of(const DataMatrix& X, const Labeling& labels) {
    Centroids Z(labels.k, X.cols());
    std::vector<double> count(labels.k, 0.0);
    for (std::size_t i = 0; i < X.rows(); ++i) {
        count[labels[i]] += 1;
        for (std::size_t v = 0; v < X.cols(); ++v) Z(labels[i], v) += X(i, v);
    }
    for (std::size_t l = 0; l < labels.k; ++l)
        for (std::size_t v = 0; v < X.cols(); ++v) Z(l, v) /= count[l];
    return Z;
}

// Two tight Gaussian blobs far apart, plus `noise` uniform columns.
struct BlobFixture {
    DataMatrix X;
    Labeling truth;
};

inline BlobFixture separated_blobs(std::size_t per_blob, std::size_t informative, std::size_t noise,
                                   std::uint64_t seed, double separation = 10.0, double spread = 0.1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, spread);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 2 * per_blob, m = informative + noise;
    DataMatrix X(n, m);
    std::vector<std::size_t> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i] = i < per_blob ? 0 : 1;
        for (std::size_t v = 0; v < informative; ++v) X(i, v) = labels[i] * separation + g(rng);
        for (std::size_t v = informative; v < m; ++v) X(i, v) = u(rng) * separation;
    }
    return {X, Labeling(labels, 2)};
}

}  // namespace shark::testing
