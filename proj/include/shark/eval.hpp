#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shark {

// Adjusted Rand index from the contingency table of two labelings. Labels
// may be arbitrary nonnegative integers. When the chance-corrected
// denominator vanishes the result is 1 for identical partitions, else 0.
double ari(std::span<const std::size_t> a, std::span<const std::size_t> b);

struct RunRecord {
    std::string algorithm;
    std::string dataset;
    std::uint64_t seed = 0;
    double ari = 0.0;
    double objective = 0.0;
    bool failed = false;
    double wall_time = 0.0;  // seconds
};

class NoSuccessfulRun : public std::runtime_error {
public:
    NoSuccessfulRun() : std::runtime_error("every run failed") {}
};

// Lowest-objective record among the non-failed ones. Ties keep the earliest.
const RunRecord& best_of_runs(std::span<const RunRecord> records);

struct AggregateResult {
    double mean_ari = 0.0;
    double std_ari = 0.0;  // population deviation over successful runs
    double per_algorithm_rank = 0.0;
    std::size_t n_runs = 0;
    std::size_t n_failures = 0;
};

// Mean and deviation of the ARI over non-failed records; counts failures.
AggregateResult aggregate(std::span<const RunRecord> records);

// Ranks of `scores` in descending order, 1-based, ties share the average rank.
std::vector<double> descending_ranks(std::span<const double> scores);

// table[config][algorithm] = mean ARI. Every row must score the same
// algorithms. Returns the per-algorithm mean of the per-config ranks.
std::map<std::string, double> mean_relative_rank(
    const std::map<std::string, std::map<std::string, double>>& table);

}  // namespace shark
