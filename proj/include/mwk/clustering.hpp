#pragma once

#include <cstdint>

#include "mwk/core.hpp"
#include "mwk/minkowski.hpp"

namespace mwk {

// Raised by the anomalous-pattern initialisations when the extraction loop
// yields fewer tentative clusters than requested.
class TooFewAnomalousClusters : public std::runtime_error {
public:
    TooFewAnomalousClusters(std::size_t found, std::size_t requested);
    std::size_t found;
    std::size_t requested;
};

struct MwkOptions {
    int max_iterations = 1000;
    CenterSearchParams center;
    // Constant added to every per-feature dispersion before the weight
    // update. Zero gives the exact closed-form minimiser; the anomalous
    // -pattern engines default to 0.01 so that features with a vanishing
    // within-cluster spread cannot absorb all the weight.
    double dispersion_add = 0.0;
    bool freeze_weights = false;  // test hook: skip the weight update step
};

struct ImwkOptions {
    int max_iterations = 1000;
    CenterSearchParams center;
    double dispersion_add = 0.01;
};

// Lloyd's algorithm under squared Euclidean distance. Outcome weights are
// uniform 1/m and the criterion is the within-cluster sum of squares.
ClusteringOutcome kmeans(const DataMatrix& X, const Centroids& Z0, int max_iterations = 1000);

// k-means++ seeding: first centroid uniform over entities, each next one
// sampled with probability D(x)^2 / sum D^2 where D is the Euclidean
// distance to the nearest centroid chosen so far.
Centroids kmeanspp_init(const DataMatrix& X, std::size_t k, std::uint64_t seed);

// Anomalous-pattern seeding: repeatedly extracts the cluster grown around
// the entity farthest from the (frozen) grand mean, then keeps the k
// extracted centroids with the largest cardinality.
Centroids ikmeans_init(const DataMatrix& X, std::size_t k);

// Minkowski weighted k-means: assignment under the weighted p-th power
// distance, Minkowski-center centroid update, closed-form weight update.
ClusteringOutcome mwk_means(const DataMatrix& X, const Centroids& Z0, const FeatureWeights& W0,
                            MinkowskiExponent p, const MwkOptions& opts = {});

// Weighted anomalous-pattern seeding; returns the centroid and the fitted
// weight row of each surviving cluster.
std::pair<Centroids, FeatureWeights> imwk_init(const DataMatrix& X, std::size_t k,
                                               MinkowskiExponent p, const ImwkOptions& opts = {});

// imwk_init followed by mwk_means; fully deterministic.
ClusteringOutcome imwk_means(const DataMatrix& X, std::size_t k, MinkowskiExponent p,
                             const ImwkOptions& opts = {});

// Exact minimiser of the weighted criterion for fixed (u, Z):
//   w_lv = 1 / sum_j (D_lv / D_lj)^(1/(p-1)),  D_lv = sum_i u_il |x_iv - z_lv|^p.
// If a cluster has zero-dispersion features, the row splits uniformly
// among them and the rest get 0 (the limit of the formula).
FeatureWeights update_weights(const DataMatrix& X, const Membership& u, const Centroids& Z,
                              MinkowskiExponent p);

// sum_l sum_i sum_v u_il * w_lv^p * |x_iv - z_lv|^p
double criterion_value(const DataMatrix& X, const Membership& u, const Centroids& Z,
                       const FeatureWeights& W, MinkowskiExponent p);

// Within-cluster sum of squares (the unweighted k-means criterion).
double kmeans_criterion(const DataMatrix& X, const Membership& u, const Centroids& Z);

}  // namespace mwk
