#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "shark/eval.hpp"
#include "shark/lloyd.hpp"
#include "shark/shapley.hpp"

using namespace shark;

namespace {

struct Partition {
    DataMatrix X;
    Labeling labels;
    Centroids Z;
};

Partition random_partition(std::size_t n, std::size_t m, std::size_t k, std::mt19937_64& rng) {
    auto X = testing::random_matrix(n, m, rng);
    auto labels = testing::random_valid_labeling(n, k, rng);
    auto Z = testing::means_of(X, labels);
    return {std::move(X), std::move(labels), std::move(Z)};
}

}  // namespace

TEST_CASE("closed form agrees with the coalition oracle") {
    std::mt19937_64 rng(17);
    for (std::size_t m = 1; m <= 8; ++m)
        for (int trial = 0; trial < 6; ++trial) {
            const auto p = random_partition(12 + trial, m, 1 + trial % 3, rng);
            const auto fast = shapley_closed_form(p.X, p.labels, p.Z);
            const auto slow = shapley_exact_oracle(p.X, p.labels, p.Z);
            REQUIRE(fast.size() == m);
            for (std::size_t v = 0; v < m; ++v)
                CHECK(std::abs(fast.phi[v] - slow.phi[v]) <= 1e-9 * std::max(1.0, std::abs(slow.phi[v])));
        }
}

TEST_CASE("Shapley values are efficient and non-negative") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_partition(40, 5, 3, rng);
        const auto profile = shapley_closed_form(p.X, p.labels, p.Z);
        CHECK(profile.total() == doctest::Approx(kmeans_objective(p.X, p.labels, p.Z)).epsilon(1e-12));
        for (double v : profile.phi) CHECK(v >= 0.0);
    }
}

TEST_CASE("a feature constant within clusters is a null player") {
    // Column 1 equals the cluster id, so it has no within-cluster spread.
    const auto X = Matrix::from_rows({{0.3, 0}, {1.2, 0}, {-0.4, 1}, {2.0, 1}});
    const Labeling labels({0, 0, 1, 1}, 2);
    const auto Z = testing::means_of(X, labels);
    const auto oracle = shapley_exact_oracle(X, labels, Z);
    CHECK(oracle.phi[1] == doctest::Approx(0.0));
    CHECK(shapley_closed_form(X, labels, Z).phi[1] == 0.0);
}

TEST_CASE("identical columns receive identical values") {
    const auto X = Matrix::from_rows({{1, 1, 5}, {2, 2, 0}, {4, 4, 1}, {8, 8, 3}});
    const Labeling labels({0, 0, 1, 1}, 2);
    const auto Z = testing::means_of(X, labels);
    const auto oracle = shapley_exact_oracle(X, labels, Z);
    CHECK(oracle.phi[0] == doctest::Approx(oracle.phi[1]));
    const auto fast = shapley_closed_form(X, labels, Z);
    CHECK(fast.phi[0] == fast.phi[1]);
}

TEST_CASE("the oracle refuses more than fifteen features") {
    std::mt19937_64 rng(1);
    const auto p = random_partition(20, kMaxOracleFeatures + 1, 2, rng);
    CHECK_THROWS_AS(shapley_exact_oracle(p.X, p.labels, p.Z), std::invalid_argument);
    const auto q = random_partition(20, kMaxOracleFeatures, 2, rng);
    CHECK_NOTHROW(shapley_exact_oracle(q.X, q.labels, q.Z));
}

TEST_CASE("closed form rejects empty clusters and shape mismatches") {
    const auto X = Matrix::from_rows({{0}, {1}});
    CHECK_THROWS(shapley_closed_form(X, Labeling({0, 0}, 2), Matrix::from_rows({{0.5}, {9}})));
    CHECK_THROWS_AS(shapley_closed_form(X, Labeling({0, 1}, 2), Matrix::from_rows({{0, 0}, {1, 1}})),
                    DimensionError);
}

TEST_CASE("weights are inversely proportional to the values") {
    const auto w = update_weights(ShapleyProfile{{1.0, 3.0}});
    CHECK(w[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.25).epsilon(1e-12));

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(0.01, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        ShapleyProfile p{std::vector<double>(2 + trial % 7)};
        for (double& x : p.phi) x = u(rng);
        const auto wv = update_weights(p);
        double sum = 0;
        for (std::size_t v = 0; v < p.size(); ++v) {
            sum += wv[v];
            CHECK(wv[v] > 0.0);
            // w_v * phi_v is the same constant for every feature.
            CHECK(wv[v] * p.phi[v] == doctest::Approx(wv[0] * p.phi[0]).epsilon(1e-10));
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("zero values are clamped, not inverted") {
    const ShapleyProfile p{{0.0, 2.0}};
    CHECK(shapley_floor(p) == doctest::Approx(1e-12));
    const auto w = update_weights(p);
    CHECK(std::isfinite(w[0]));
    CHECK(w[0] > 0.999999);
    CHECK(std::isfinite(shark_objective(p)));
}

TEST_CASE("harmonic and arithmetic objectives") {
    const ShapleyProfile p{{1.0, 3.0}};
    CHECK(shark_objective(p) == doctest::Approx(1.5));
    CHECK(comparable_kmeans_objective(p) == doctest::Approx(2.0));
    const auto gap = gap_report(p);
    CHECK(gap.arithmetic_mean == doctest::Approx(2.0));
    CHECK(gap.harmonic_mean == doctest::Approx(1.5));
    CHECK(gap.epsilon == doctest::Approx(0.5));
    // Two features: the bound is tight.
    CHECK(gap.lower_bound == doctest::Approx(0.5));

    const auto flat = gap_report(ShapleyProfile{{2.0, 2.0, 2.0}});
    CHECK(flat.epsilon == doctest::Approx(0.0));
    CHECK(flat.lower_bound == 0.0);

    CHECK_THROWS(gap_report(ShapleyProfile{{1.0}}));
    CHECK_THROWS(gap_report(ShapleyProfile{{0.0, 1.0}}));
}

TEST_CASE("the gap dominates the guaranteed bound") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.001, 100.0);
    for (int trial = 0; trial < 500; ++trial) {
        ShapleyProfile p{std::vector<double>(2 + trial % 12)};
        for (double& x : p.phi) x = u(rng);
        const auto g = gap_report(p);
        CHECK(g.harmonic_mean <= g.arithmetic_mean * (1 + 1e-12));
        CHECK(g.epsilon >= g.guaranteed_bound - 1e-9 * g.arithmetic_mean);
        if (p.size() == 2) CHECK(g.epsilon >= g.lower_bound - 1e-9 * g.arithmetic_mean);
    }
}

TEST_CASE("the two-extreme bound is not a bound beyond two features") {
    // (1, 2, 3): gap 4/11, range term 1/2, guaranteed 1/3.
    const auto g = gap_report(ShapleyProfile{{1.0, 2.0, 3.0}});
    CHECK(g.epsilon == doctest::Approx(4.0 / 11.0));
    CHECK(g.lower_bound == doctest::Approx(0.5));
    CHECK(g.guaranteed_bound == doctest::Approx(1.0 / 3.0));
    CHECK(g.epsilon < g.lower_bound);

    // Equality when every interior value is the harmonic mean of the extremes.
    const double mid = 2.0 * 1.0 * 9.0 / (1.0 + 9.0);
    const auto tight = gap_report(ShapleyProfile{{1.0, mid, mid, mid, 9.0}});
    CHECK(std::abs(tight.epsilon - tight.guaranteed_bound) <= 1e-12);
}

TEST_CASE("SHARK and k-means agree on the first assignment but SHARK costs less") {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const auto X = range_normalize(testing::random_matrix(80, 4, rng));
        Rng init_rng(trial);
        const auto Z0 = init_uniform(X, 3, init_rng);
        const LloydOptions one{1, false};
        const auto km = run_kmeans(X, Z0, one);
        const auto sh = run_shark(X, Z0, one);
        if (km.failed || sh.failed) continue;
        CHECK(km.labels == sh.labels);
        const auto profile = shapley_closed_form(X, sh.labels, sh.centroids);
        CHECK(shark_objective(profile) <= comparable_kmeans_objective(profile) + 1e-12);
        CHECK(sh.objective == doctest::Approx(shark_objective(profile)));
    }
}

TEST_CASE("SHARK down-weights uninformative columns") {
    const auto fx = testing::separated_blobs(60, 2, 4, 41);
    const auto X = range_normalize(fx.X);
    Rng rng(3);
    const auto model = run_shark(X, 2, rng);
    REQUIRE_FALSE(model.failed);
    CHECK(ari(model.labels.assign, fx.truth.assign) == 1.0);
    double informative = 0, noise = 0;
    for (std::size_t v = 0; v < 2; ++v) informative += model.weights[v];
    for (std::size_t v = 2; v < 6; ++v) noise += model.weights[v];
    CHECK(noise / 4 < 0.1 * informative / 2);
    CHECK(std::accumulate(model.weights.begin(), model.weights.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("run_shark is deterministic and keeps its trace") {
    std::mt19937_64 rng(43);
    const auto X = range_normalize(testing::random_matrix(100, 5, rng));
    Rng a(5), b(5);
    const auto m1 = run_shark(X, 3, a);
    const auto m2 = run_shark(X, 3, b);
    CHECK(m1.labels == m2.labels);
    CHECK(m1.weights == m2.weights);
    CHECK(m1.objective_trace == m2.objective_trace);
    CHECK(m1.objective_trace.size() == m1.iterations);
}
