#pragma once

#include <cstdint>
#include <string>

#include "mwk/core.hpp"

namespace mwk {

struct MixtureConfig {
    std::size_t n = 1000;
    std::size_t m = 6;   // informative features
    std::size_t k = 3;
    std::size_t min_cardinality = 20;
    double sigma2_lo = 0.5;  // per-cluster variance drawn uniformly from this range
    double sigma2_hi = 1.5;
    std::uint64_t seed = 0;

    void validate() const;
};

enum class NoiseModel { NF, NNF, WCN };

struct NoiseSpec {
    NoiseModel model = NoiseModel::NF;
    std::size_t count = 0;    // NF/NNF: number of appended features (0 = ceil(m/2))
    double fraction = 0.5;    // WCN: fraction of feature segments replaced
    std::uint64_t seed = 0;
};

// Spherical Gaussian mixture: centroid components i.i.d. standard normal,
// per-cluster variance uniform in [sigma2_lo, sigma2_hi], cardinalities a
// uniformly random composition of n with every part >= min_cardinality.
LabeledDataset generate_mixture(const MixtureConfig& cfg);

// Appends columns of uniform values over the pooled [min, max] of the
// existing features. Labels and existing columns are untouched.
LabeledDataset add_uniform_noise_features(const LabeledDataset& D, const NoiseSpec& spec);

// Appends i.i.d. standard normal columns.
LabeledDataset add_gaussian_noise_features(const LabeledDataset& D, const NoiseSpec& spec);

// Overwrites ceil(fraction * m * k) feature segments (feature v restricted
// to cluster l), chosen uniformly without replacement, with uniform values
// over that feature's observed [min, max].
LabeledDataset inject_within_cluster_noise(const LabeledDataset& D, const NoiseSpec& spec);

// Config strings like "1000x6-3", "1000x12-6+6NF", "1000x20-10WCN".
struct DatasetConfig {
    MixtureConfig mixture;
    bool has_noise = false;
    NoiseSpec noise;
    std::string name;
};

DatasetConfig parse_dataset_config(const std::string& text);
LabeledDataset build_dataset(const DatasetConfig& cfg, std::uint64_t seed);

}  // namespace mwk
