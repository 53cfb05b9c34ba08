#include "shark/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace shark {

namespace {
// Offset for the stream that draws noise columns, so that clean and noisy
// variants of a config share their informative part.
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ULL;
}  // namespace

void SynthConfig::validate() const {
    if (k == 0 || m == 0 || n == 0) throw std::invalid_argument("SynthConfig: n, m, k must be >= 1");
    if (n < k * min_cluster_size)
        throw std::invalid_argument("SynthConfig: n < k * min_cluster_size");
    if (!(noise_fraction >= 0.0) || !std::isfinite(noise_fraction))
        throw std::invalid_argument("SynthConfig: noise_fraction must be >= 0");
}

std::size_t SynthConfig::noise_features() const {
    return static_cast<std::size_t>(std::llround(noise_fraction * static_cast<double>(m)));
}

std::string SynthConfig::name() const {
    std::string s = std::to_string(n) + "x" + std::to_string(m) + "-" + std::to_string(k) + "k";
    if (noise_features() > 0) s += "+" + std::to_string(noise_features()) + "NF";
    return s;
}

std::size_t LabeledDataset::informative_count() const {
    return static_cast<std::size_t>(std::count(informative_mask.begin(), informative_mask.end(), true));
}

std::vector<std::size_t> draw_cluster_sizes(std::size_t n, std::size_t k, std::size_t min_size,
                                            Rng& rng) {
    if (k == 0) throw std::invalid_argument("draw_cluster_sizes: k must be >= 1");
    if (n < k * min_size) throw std::invalid_argument("draw_cluster_sizes: infeasible minimum size");

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> p(k);
    for (double& x : p) x = unit(rng);
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (!(total > 0.0)) {
        std::fill(p.begin(), p.end(), 1.0);
        total = static_cast<double>(k);
    }

    std::vector<std::size_t> sizes(k);
    std::size_t assigned = 0;
    for (std::size_t l = 0; l < k; ++l) {
        sizes[l] = static_cast<std::size_t>(std::floor(p[l] / total * static_cast<double>(n)));
        assigned += sizes[l];
    }
    for (std::size_t l = 0; assigned < n; l = (l + 1) % k, ++assigned) ++sizes[l];

    // Repair undersized clusters from the currently largest one.
    for (std::size_t l = 0; l < k; ++l) {
        while (sizes[l] < min_size) {
            auto largest = static_cast<std::size_t>(
                std::distance(sizes.begin(), std::max_element(sizes.begin(), sizes.end())));
            const std::size_t take = std::min(min_size - sizes[l], sizes[largest] - min_size);
            sizes[largest] -= take;
            sizes[l] += take;
        }
    }
    return sizes;
}

LabeledDataset generate_mixture(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> variance(0.5, 1.5);

    Centroids centres(cfg.k, cfg.m);
    std::vector<double> sd(cfg.k);
    for (std::size_t l = 0; l < cfg.k; ++l) {
        for (double& c : centres.row(l)) c = normal(rng);
        sd[l] = std::sqrt(variance(rng));
    }
    const auto sizes = draw_cluster_sizes(cfg.n, cfg.k, cfg.min_cluster_size, rng);

    DataMatrix points(cfg.n, cfg.m);
    std::vector<std::size_t> labels(cfg.n);
    std::size_t i = 0;
    for (std::size_t l = 0; l < cfg.k; ++l)
        for (std::size_t c = 0; c < sizes[l]; ++c, ++i) {
            labels[i] = l;
            auto row = points.row(i);
            for (std::size_t v = 0; v < cfg.m; ++v) row[v] = centres(l, v) + sd[l] * normal(rng);
        }

    std::vector<std::size_t> order(cfg.n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> shuffled(cfg.n);
    for (std::size_t r = 0; r < cfg.n; ++r) shuffled[r] = labels[order[r]];

    LabeledDataset ds;
    ds.X = points.select_rows(order);
    ds.truth = Labeling(std::move(shuffled), cfg.k);
    ds.informative_mask.assign(cfg.m, true);
    return ds;
}

LabeledDataset inject_noise(const LabeledDataset& ds, double noise_fraction, Rng& rng) {
    if (!(noise_fraction >= 0.0)) throw std::invalid_argument("inject_noise: fraction must be >= 0");
    const auto extra = static_cast<std::size_t>(
        std::llround(noise_fraction * static_cast<double>(ds.informative_count())));
    if (extra == 0) return ds;

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    DataMatrix noise(ds.X.rows(), extra);
    for (std::size_t i = 0; i < noise.rows(); ++i)
        for (double& x : noise.row(i)) x = unit(rng);

    LabeledDataset out;
    out.X = ds.X.hconcat(noise);
    out.truth = ds.truth;
    out.informative_mask = ds.informative_mask;
    out.informative_mask.resize(ds.informative_mask.size() + extra, false);
    return out;
}

LabeledDataset generate_dataset(const SynthConfig& cfg) {
    auto ds = generate_mixture(cfg);
    if (cfg.noise_features() == 0) return ds;
    Rng rng(cfg.seed ^ kNoiseStream);
    return inject_noise(ds, cfg.noise_fraction, rng);
}

std::vector<SynthConfig> benchmark_grid(double noise_fraction) {
    struct Shape {
        std::size_t n, m;
        std::size_t ks[3];
    };
    constexpr Shape shapes[] = {
        {1000, 10, {3, 5, 10}}, {2000, 20, {5, 10, 20}}, {2000, 30, {5, 10, 20}}, {5000, 50, {10, 20, 50}}};
    std::vector<SynthConfig> grid;
    for (const auto& s : shapes)
        for (std::size_t k : s.ks) {
            SynthConfig cfg;
            cfg.n = s.n;
            cfg.m = s.m;
            cfg.k = k;
            cfg.noise_fraction = noise_fraction;
            grid.push_back(cfg);
        }
    return grid;
}

}  // namespace shark
