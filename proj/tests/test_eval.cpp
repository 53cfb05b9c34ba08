#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "shark/eval.hpp"

using namespace shark;

using Labels = std::vector<std::size_t>;

TEST_CASE("ARI on small hand examples") {
    CHECK(ari(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 1}) == 1.0);
    CHECK(ari(Labels{0, 0, 1, 1}, Labels{1, 1, 0, 0}) == 1.0);
    CHECK(ari(Labels{0, 0, 1, 1}, Labels{0, 1, 0, 1}) == doctest::Approx(-0.5));
    CHECK(ari(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 2}) == doctest::Approx(4.0 / 7.0));
    CHECK(ari(Labels{7, 7, 3, 3}, Labels{0, 0, 1, 1}) == 1.0);
}

TEST_CASE("ARI degenerate partitions") {
    CHECK(ari(Labels{0, 0, 0}, Labels{5, 5, 5}) == 1.0);
    CHECK(ari(Labels{0, 1, 2}, Labels{2, 0, 1}) == 1.0);
    CHECK(ari(Labels{0, 0, 0}, Labels{0, 1, 2}) == 0.0);
    CHECK(ari(Labels{0}, Labels{0}) == 1.0);
    CHECK_THROWS(ari(Labels{0, 1}, Labels{0}));
}

TEST_CASE("ARI matches the pair-counting oracle") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 40;
        std::uniform_int_distribution<std::size_t> ka(1, 5), kb(1, 5);
        const std::size_t ca = ka(rng), cb = kb(rng);
        Labels a(n), b(n);
        for (auto& x : a) x = std::uniform_int_distribution<std::size_t>(0, ca - 1)(rng);
        for (auto& x : b) x = std::uniform_int_distribution<std::size_t>(0, cb - 1)(rng);
        const double got = ari(a, b);
        CHECK(got == doctest::Approx(testing::pair_counting_ari(a, b)).epsilon(1e-12));
        CHECK(got == doctest::Approx(ari(b, a)).epsilon(1e-12));
        CHECK(got <= 1.0 + 1e-12);

        // Relabelling either side is invisible.
        Labels perm(6);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        Labels relabelled(n);
        for (std::size_t i = 0; i < n; ++i) relabelled[i] = perm[a[i]] + 10;
        CHECK(ari(relabelled, b) == doctest::Approx(got).epsilon(1e-12));
        CHECK(ari(a, a) == 1.0);
    }
}

TEST_CASE("best_of_runs picks the lowest objective among successes") {
    std::vector<RunRecord> runs(4);
    runs[0].objective = 5.0;
    runs[0].ari = 0.1;
    runs[1].objective = 1.0;
    runs[1].ari = 0.9;
    runs[1].failed = true;
    runs[2].objective = 2.0;
    runs[2].ari = 0.7;
    runs[3].objective = 2.0;
    runs[3].ari = 0.6;
    CHECK(best_of_runs(runs).ari == 0.7);

    std::vector<RunRecord> failed(2);
    failed[0].failed = failed[1].failed = true;
    CHECK_THROWS_AS(best_of_runs(failed), NoSuccessfulRun);
    CHECK_THROWS_AS(best_of_runs({}), NoSuccessfulRun);
}

TEST_CASE("aggregate") {
    std::vector<RunRecord> runs(3);
    runs[0].ari = 0.5;
    runs[1].ari = 1.0;
    runs[2].failed = true;
    const auto r = aggregate(runs);
    CHECK(r.n_runs == 3);
    CHECK(r.n_failures == 1);
    CHECK(r.mean_ari == doctest::Approx(0.75));
    CHECK(r.std_ari == doctest::Approx(0.25));

    const auto none = aggregate(std::vector<RunRecord>(1, RunRecord{.failed = true}));
    CHECK(std::isnan(none.mean_ari));
}

TEST_CASE("descending ranks share ties") {
    CHECK(descending_ranks(std::vector<double>{0.9, 0.5, 0.5, 0.1}) == std::vector<double>{1, 2.5, 2.5, 4});
    CHECK(descending_ranks(std::vector<double>{0.1, 0.2, 0.3}) == std::vector<double>{3, 2, 1});
    CHECK(descending_ranks(std::vector<double>{0.4, 0.4, 0.4}) == std::vector<double>{2, 2, 2});
}

TEST_CASE("mean relative rank averages over configurations") {
    std::map<std::string, std::map<std::string, double>> table;
    table["a"] = {{"shark", 0.9}, {"kmeans_pp", 0.5}};
    table["b"] = {{"shark", 0.7}, {"kmeans_pp", 0.7}};
    const auto r = mean_relative_rank(table);
    CHECK(r.at("shark") == doctest::Approx(1.25));
    CHECK(r.at("kmeans_pp") == doctest::Approx(1.75));

    table["c"] = {{"shark", 0.1}};
    CHECK_THROWS(mean_relative_rank(table));
    table["c"] = {{"shark", 0.1}, {"kmeans_pp", NAN}};
    CHECK_THROWS(mean_relative_rank(table));
}
