#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mwk/clustering.hpp"
#include "mwk/normalize.hpp"

namespace mwk {

enum class Downstream { ImwkMeans, KMeansPP };

// Four-step pipeline settings: normalise, cluster at p1 to fit weights,
// rescale, re-cluster (imwk-means at p2, or repeated k-means++ runs).
struct RescalePipelineConfig {
    NormalizationMethod normalization = NormalizationMethod::RangeNorm;
    double p1 = 2.0;
    std::optional<double> p2;  // required for ImwkMeans, must be absent for KMeansPP
    std::size_t k = 2;
    Downstream downstream = Downstream::ImwkMeans;
    int kmeanspp_runs = 100;
    std::uint64_t seed = 0;
    ImwkOptions imwk;

    void validate() const;
};

// Applies the fitted weights as multiplicative factors: entity i keeps its
// cluster's weight row, x'_iv = x_iv * w_{l(i),v}.
DataMatrix rescale_with_weights(const DataMatrix& X, const Membership& u,
                                const FeatureWeights& W);

// Stage-2 artifacts plus the final outcome; the weight matrix fitted at p1
// is the interpretable product of the method, so it is reported alongside.
struct RescaledImwkResult {
    ClusteringOutcome stage2;
    DataMatrix rescaled;
    ClusteringOutcome final;
};

RescaledImwkResult rescaled_imwk(const DataMatrix& X_raw, const RescalePipelineConfig& cfg);

struct RescaledKmeansppResult {
    ClusteringOutcome stage2;
    DataMatrix rescaled;
    std::vector<ClusteringOutcome> runs;
};

RescaledKmeansppResult rescaled_kmeanspp(const DataMatrix& X_raw,
                                         const RescalePipelineConfig& cfg);

}  // namespace mwk
