#include "mwk/rescale.hpp"

#include <stdexcept>

#include "mwk/rng.hpp"

namespace mwk {

void RescalePipelineConfig::validate() const {
    if (!(p1 > 1.0)) throw std::invalid_argument("rescale pipeline: p1 must be > 1");
    if (downstream == Downstream::ImwkMeans) {
        if (!p2) throw std::invalid_argument("rescale pipeline: p2 required for imwk-means");
        if (!(*p2 > 1.0)) throw std::invalid_argument("rescale pipeline: p2 must be > 1");
    } else {
        if (p2)
            throw std::invalid_argument(
                "rescale pipeline: p2 is not used by the k-means++ arm; leave it unset");
        if (kmeanspp_runs < 1)
            throw std::invalid_argument("rescale pipeline: kmeanspp_runs must be >= 1");
    }
    if (k == 0) throw std::invalid_argument("rescale pipeline: k must be >= 1");
}

DataMatrix rescale_with_weights(const DataMatrix& X, const Membership& u,
                                const FeatureWeights& W) {
    if (u.n() != X.n() || W.k() != u.k() || W.m() != X.m())
        throw std::invalid_argument("rescale_with_weights: shape mismatch");
    Matrix out(X.n(), X.m());
    for (std::size_t i = 0; i < X.n(); ++i) {
        const std::size_t l = u.cluster_of(i);
        auto x = X.row(i);
        for (std::size_t v = 0; v < X.m(); ++v) out(i, v) = x[v] * W(l, v);
    }
    return DataMatrix(std::move(out), X.feature_names());
}

namespace {

std::pair<ClusteringOutcome, DataMatrix> fit_and_rescale(const DataMatrix& X_raw,
                                                         const RescalePipelineConfig& cfg) {
    DataMatrix X = normalize(X_raw, cfg.normalization);
    ClusteringOutcome stage2 = imwk_means(X, cfg.k, MinkowskiExponent(cfg.p1), cfg.imwk);
    DataMatrix rescaled = rescale_with_weights(X, stage2.membership, stage2.weights);
    return {std::move(stage2), std::move(rescaled)};
}

}  // namespace

RescaledImwkResult rescaled_imwk(const DataMatrix& X_raw, const RescalePipelineConfig& cfg) {
    cfg.validate();
    if (cfg.downstream != Downstream::ImwkMeans)
        throw std::invalid_argument("rescaled_imwk: config downstream is not imwk-means");
    auto [stage2, rescaled] = fit_and_rescale(X_raw, cfg);
    ClusteringOutcome final_outcome =
        imwk_means(rescaled, cfg.k, MinkowskiExponent(*cfg.p2), cfg.imwk);
    return {std::move(stage2), std::move(rescaled), std::move(final_outcome)};
}

RescaledKmeansppResult rescaled_kmeanspp(const DataMatrix& X_raw,
                                         const RescalePipelineConfig& cfg) {
    cfg.validate();
    if (cfg.downstream != Downstream::KMeansPP)
        throw std::invalid_argument("rescaled_kmeanspp: config downstream is not k-means++");
    auto [stage2, rescaled] = fit_and_rescale(X_raw, cfg);
    std::vector<ClusteringOutcome> runs;
    runs.reserve(cfg.kmeanspp_runs);
    for (int r = 0; r < cfg.kmeanspp_runs; ++r) {
        std::uint64_t run_seed = mix64(cfg.seed ^ mix64(static_cast<std::uint64_t>(r)));
        Centroids Z0 = kmeanspp_init(rescaled, cfg.k, run_seed);
        runs.push_back(kmeans(rescaled, Z0, cfg.imwk.max_iterations));
    }
    return {std::move(stage2), std::move(rescaled), std::move(runs)};
}

}  // namespace mwk
