#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "shark/core.hpp"
#include "shark/lloyd.hpp"

namespace shark {

struct SynthConfig {
    std::size_t n = 1000;
    std::size_t m = 10;  // informative features
    std::size_t k = 3;
    double noise_fraction = 0.0;
    std::size_t min_cluster_size = 20;
    std::uint64_t seed = 0;

    // Throws std::invalid_argument when the shape cannot be generated.
    void validate() const;
    std::size_t noise_features() const;
    // "1000x10-3k" or "1000x10-3k+5NF".
    std::string name() const;
};

struct LabeledDataset {
    DataMatrix X;
    Labeling truth;
    std::vector<bool> informative_mask;

    std::size_t informative_count() const;
};

// Cluster sizes summing to n, each at least min_size, from uniform random
// proportions.
std::vector<std::size_t> draw_cluster_sizes(std::size_t n, std::size_t k, std::size_t min_size,
                                            Rng& rng);

// Spherical Gaussian clusters: centres ~ N(0, I), one variance per cluster
// ~ U(0.5, 1.5). Rows are shuffled. Ignores cfg.noise_fraction.
LabeledDataset generate_mixture(const SynthConfig& cfg);

// Appends round(noise_fraction * informative) columns of U(0, 1) noise.
LabeledDataset inject_noise(const LabeledDataset& ds, double noise_fraction, Rng& rng);

// generate_mixture followed by inject_noise, both driven by cfg.seed.
LabeledDataset generate_dataset(const SynthConfig& cfg);

// The twelve benchmark shapes: 1000x10 (k 3,5,10), 2000x20 (k 5,10,20),
// 2000x30 (k 5,10,20), 5000x50 (k 10,20,50).
std::vector<SynthConfig> benchmark_grid(double noise_fraction);

}  // namespace shark
