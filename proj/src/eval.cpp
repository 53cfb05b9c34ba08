#include "shark/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace shark {

namespace {

double choose2(double x) { return x * (x - 1.0) / 2.0; }

std::vector<std::size_t> compact(std::span<const std::size_t> labels, std::size_t& count) {
    std::unordered_map<std::size_t, std::size_t> ids;
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], ids.size());
        out[i] = it->second;
    }
    count = ids.size();
    return out;
}

}  // namespace

double ari(std::span<const std::size_t> a, std::span<const std::size_t> b) {
    if (a.size() != b.size()) throw std::invalid_argument("ari: labelings differ in length");
    const std::size_t n = a.size();
    std::size_t ka = 0, kb = 0;
    const auto ca = compact(a, ka);
    const auto cb = compact(b, kb);

    std::vector<std::size_t> table(ka * kb, 0), rows(ka, 0), cols(kb, 0);
    for (std::size_t i = 0; i < n; ++i) {
        ++table[ca[i] * kb + cb[i]];
        ++rows[ca[i]];
        ++cols[cb[i]];
    }
    double index = 0.0, sum_a = 0.0, sum_b = 0.0;
    for (auto c : table) index += choose2(static_cast<double>(c));
    for (auto r : rows) sum_a += choose2(static_cast<double>(r));
    for (auto c : cols) sum_b += choose2(static_cast<double>(c));

    const double pairs = choose2(static_cast<double>(n));
    const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
    const double max_index = 0.5 * (sum_a + sum_b);
    const double denom = max_index - expected;
    if (denom == 0.0) {
        // Identical partitions have one nonzero cell per row and per column.
        const bool identical = ka == kb && std::count_if(table.begin(), table.end(),
                                                         [](std::size_t c) { return c > 0; }) ==
                                               static_cast<std::ptrdiff_t>(ka);
        return identical ? 1.0 : 0.0;
    }
    return (index - expected) / denom;
}

const RunRecord& best_of_runs(std::span<const RunRecord> records) {
    const RunRecord* best = nullptr;
    for (const auto& r : records) {
        if (r.failed) continue;
        if (!best || r.objective < best->objective) best = &r;
    }
    if (!best) throw NoSuccessfulRun();
    return *best;
}

AggregateResult aggregate(std::span<const RunRecord> records) {
    AggregateResult out;
    out.n_runs = records.size();
    std::vector<double> scores;
    for (const auto& r : records) {
        if (r.failed)
            ++out.n_failures;
        else
            scores.push_back(r.ari);
    }
    if (scores.empty()) {
        out.mean_ari = std::nan("");
        out.std_ari = std::nan("");
        return out;
    }
    const double n = static_cast<double>(scores.size());
    out.mean_ari = std::accumulate(scores.begin(), scores.end(), 0.0) / n;
    double ss = 0.0;
    for (double s : scores) ss += (s - out.mean_ari) * (s - out.mean_ari);
    out.std_ari = std::sqrt(ss / n);
    return out;
}

std::vector<double> descending_ranks(std::span<const double> scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<double> ranks(scores.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

std::map<std::string, double> mean_relative_rank(
    const std::map<std::string, std::map<std::string, double>>& table) {
    std::map<std::string, double> totals;
    if (table.empty()) return totals;
    const auto& first = table.begin()->second;
    for (const auto& [algo, _] : first) totals[algo] = 0.0;

    for (const auto& [config, row] : table) {
        if (row.size() != totals.size())
            throw std::invalid_argument("mean_relative_rank: config '" + config +
                                        "' does not score every algorithm");
        std::vector<double> scores;
        for (const auto& [algo, _] : totals) {
            auto it = row.find(algo);
            if (it == row.end() || std::isnan(it->second))
                throw std::invalid_argument("mean_relative_rank: missing score for '" + algo +
                                            "' in config '" + config + "'");
            scores.push_back(it->second);
        }
        const auto ranks = descending_ranks(scores);
        std::size_t j = 0;
        for (auto& [algo, total] : totals) total += ranks[j++];
    }
    for (auto& [algo, total] : totals) total /= static_cast<double>(table.size());
    return totals;
}

}  // namespace shark
