#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shark/core.hpp"

using namespace shark;

namespace {
DataMatrix column(std::initializer_list<double> values) {
    std::vector<std::vector<double>> rows;
    for (double v : values) rows.push_back({v});
    return Matrix::from_rows(rows);
}
}  // namespace

TEST_CASE("range_normalize centres and divides by the range") {
    auto a = range_normalize(column({-1, 0, 1}));
    CHECK(a(0, 0) == doctest::Approx(-0.5));
    CHECK(a(1, 0) == doctest::Approx(0.0));
    CHECK(a(2, 0) == doctest::Approx(0.5));

    // Mean 4/3, range 3.
    auto b = range_normalize(column({0, 1, 3}));
    CHECK(b(0, 0) == doctest::Approx(-4.0 / 9.0).epsilon(1e-14));
    CHECK(b(1, 0) == doctest::Approx(-1.0 / 9.0).epsilon(1e-14));
    CHECK(b(2, 0) == doctest::Approx(5.0 / 9.0).epsilon(1e-14));
}

TEST_CASE("constant columns normalise to zero") {
    const auto X = column({5, 5, 5});
    for (const auto& out : {range_normalize(X), zscore_normalize(X)})
        for (std::size_t i = 0; i < 3; ++i) CHECK(out(i, 0) == 0.0);
}

TEST_CASE("zscore uses the population deviation") {
    auto z = zscore_normalize(column({-1, 0, 1}));
    CHECK(z(0, 0) == doctest::Approx(-std::sqrt(1.5)));
    CHECK(z(1, 0) == doctest::Approx(0.0));
    CHECK(z(2, 0) == doctest::Approx(std::sqrt(1.5)));

    std::mt19937_64 rng(3);
    const auto once = zscore_normalize(testing::random_matrix(40, 5, rng));
    const auto twice = zscore_normalize(once);
    for (std::size_t i = 0; i < once.rows(); ++i)
        for (std::size_t v = 0; v < once.cols(); ++v) CHECK(std::abs(once(i, v) - twice(i, v)) < 1e-12);
}

TEST_CASE("range-normalised columns have unit range and zero mean") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto X = range_normalize(testing::random_matrix(30, 6, rng, 5.0));
        for (std::size_t v = 0; v < X.cols(); ++v) {
            const auto col = X.column(v);
            const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
            CHECK(*hi - *lo == doctest::Approx(1.0).epsilon(1e-12));
            double mean = 0;
            for (double x : col) mean += x;
            CHECK(std::abs(mean / col.size()) < 1e-9);
        }
    }
}

TEST_CASE("normalisation rejects non-finite data") {
    auto X = column({1, 2, 3});
    X(1, 0) = NAN;
    CHECK_THROWS_AS(range_normalize(X), std::invalid_argument);
}

TEST_CASE("weighted_sqdist") {
    const std::vector<double> x{1, 2}, z{0, 0};
    CHECK(weighted_sqdist(x, x, std::vector<double>{0.5, 0.5}) == 0.0);
    CHECK(weighted_sqdist(std::vector<double>{1, 0}, z, std::vector<double>{1, 0}) == 1.0);
    CHECK(weighted_sqdist(x, z, std::vector<double>{0.25, 0.75}) == doctest::Approx(3.25));
    CHECK_THROWS_AS(weighted_sqdist(x, std::vector<double>{0}, std::vector<double>{1, 0}), DimensionError);
}

TEST_CASE("weighted_sqdist properties") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + trial % 9;
        std::vector<double> x(m), z(m);
        for (std::size_t v = 0; v < m; ++v) {
            x[v] = u(rng);
            z[v] = u(rng);
        }
        const auto uniform = WeightVector::uniform(m);
        const double plain = sqdist(x, z);
        CHECK(weighted_sqdist(x, z, uniform) == doctest::Approx(plain / m).epsilon(1e-12));

        // Zero iff x and z agree on every positively weighted feature.
        std::vector<double> w(m, 0.0);
        w[0] = 1.0;
        auto y = x;
        for (std::size_t v = 1; v < m; ++v) y[v] += 1.0;
        CHECK(weighted_sqdist(x, y, w) == 0.0);
        CHECK(weighted_sqdist(x, z, w) >= 0.0);
        if (x[0] != z[0]) CHECK(weighted_sqdist(x, z, w) > 0.0);
    }
}

TEST_CASE("WeightVector enforces the simplex") {
    CHECK_NOTHROW(WeightVector({0.25, 0.75}));
    CHECK_THROWS_AS(WeightVector({0.5, 0.6}), std::invalid_argument);
    CHECK_THROWS_AS(WeightVector({1.5, -0.5}), std::invalid_argument);
    const auto w = WeightVector::normalized({1, 3});
    CHECK(w[0] == doctest::Approx(0.25));
    CHECK(w[1] == doctest::Approx(0.75));
}

TEST_CASE("Labeling validity") {
    Labeling ok({0, 1, 1}, 2);
    CHECK(ok.valid());
    Labeling missing({0, 0, 0}, 2);
    CHECK_FALSE(missing.valid());
    CHECK(missing.non_empty_clusters() == 1);
    CHECK_THROWS_AS(Labeling({0, 2}, 2), std::invalid_argument);
}
