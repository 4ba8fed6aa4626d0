#include "mwk/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mwk/rng.hpp"

namespace mwk {
namespace {

inline double pow_abs(double d, double p) {
    if (p == 2.0) return d * d;
    return std::pow(std::abs(d), p);
}

double sq_euclid(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t v = 0; v < a.size(); ++v) {
        double d = a[v] - b[v];
        s += d * d;
    }
    return s;
}

Matrix pow_rows(const Matrix& w, double p) {
    Matrix wp(w.rows(), w.cols());
    for (std::size_t l = 0; l < w.rows(); ++l)
        for (std::size_t v = 0; v < w.cols(); ++v) wp(l, v) = std::pow(w(l, v), p);
    return wp;
}

// Weight row from a dispersion row. `disp` already includes any additive
// shift; exact zeros only occur with a zero shift.
void weight_row_from_dispersion(std::span<const double> disp, double p, std::span<double> out) {
    const std::size_t m = disp.size();
    std::size_t zeros = 0;
    for (double d : disp)
        if (d == 0.0) ++zeros;
    if (zeros > 0) {
        for (std::size_t v = 0; v < m; ++v) out[v] = disp[v] == 0.0 ? 1.0 / zeros : 0.0;
        return;
    }
    const double e = 1.0 / (p - 1.0);
    for (std::size_t v = 0; v < m; ++v) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) sum += std::pow(disp[v] / disp[j], e);
        out[v] = 1.0 / sum;  // sum >= 1, and 1/inf -> 0 for dominated features
    }
}

Matrix weights_for_partition(const DataMatrix& X, const std::vector<std::size_t>& assign,
                             std::size_t k, const Matrix& Z, double p, double add) {
    const std::size_t n = X.n(), m = X.m();
    Matrix D(k, m, add);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t l = assign[i];
        auto x = X.row(i);
        for (std::size_t v = 0; v < m; ++v) D(l, v) += pow_abs(x[v] - Z(l, v), p);
    }
    Matrix W(k, m);
    for (std::size_t l = 0; l < k; ++l) weight_row_from_dispersion(D.row(l), p, W.row(l));
    return W;
}

// Re-seeds every empty cluster with the entity farthest from its assigned
// centroid (chosen among clusters that can spare a member).
void reseed_empty_clusters(const DataMatrix& X, const Matrix& own_dist,
                           std::vector<std::size_t>& assign, std::vector<std::size_t>& sizes,
                           Matrix& Z) {
    const std::size_t n = X.n(), k = sizes.size();
    for (std::size_t l = 0; l < k; ++l) {
        if (sizes[l] != 0) continue;
        std::size_t far = n;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (sizes[assign[i]] < 2) continue;
            double d = own_dist(i, assign[i]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == n) throw std::runtime_error("empty cluster could not be re-seeded");
        --sizes[assign[far]];
        assign[far] = l;
        sizes[l] = 1;
        auto x = X.row(far);
        for (std::size_t v = 0; v < X.m(); ++v) Z(l, v) = x[v];
    }
}

double criterion_of(const DataMatrix& X, const std::vector<std::size_t>& assign, const Matrix& Z,
                    const Matrix& wp, double p) {
    double total = 0.0;
    for (std::size_t i = 0; i < X.n(); ++i) {
        const std::size_t l = assign[i];
        auto x = X.row(i);
        for (std::size_t v = 0; v < X.m(); ++v) {
            double c = wp(l, v);
            if (c != 0.0) total += c * pow_abs(x[v] - Z(l, v), p);
        }
    }
    return total;
}

ClusteringOutcome make_outcome(std::vector<std::size_t> assign, std::size_t k, Matrix Z, Matrix W,
                               std::vector<double> history, int iterations, bool converged) {
    double crit = history.empty() ? 0.0 : history.back();
    return ClusteringOutcome{Membership(std::move(assign), k), Centroids(std::move(Z)),
                             FeatureWeights(std::move(W)), crit,    iterations,
                             converged,                    std::move(history)};
}

}  // namespace

TooFewAnomalousClusters::TooFewAnomalousClusters(std::size_t found_, std::size_t requested_)
    : std::runtime_error("anomalous-pattern initialisation found " + std::to_string(found_) +
                         " clusters, " + std::to_string(requested_) + " requested"),
      found(found_),
      requested(requested_) {}

ClusteringOutcome kmeans(const DataMatrix& X, const Centroids& Z0, int max_iterations) {
    const std::size_t n = X.n(), m = X.m(), k = Z0.k();
    if (Z0.m() != m) throw std::invalid_argument("kmeans: centroid dimension mismatch");
    if (k > n) throw std::invalid_argument("kmeans: k > n");
    if (max_iterations < 1) throw std::invalid_argument("kmeans: max_iterations must be >= 1");

    Matrix Z = Z0.z;
    Matrix dist(n, k);
    std::vector<std::size_t> assign, next(n);
    std::vector<double> history;
    bool converged = false;
    int rounds = 0;

    for (int round = 1; round <= max_iterations; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            auto x = X.row(i);
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < k; ++l) {
                double d = sq_euclid(x, Z.row(l));
                dist(i, l) = d;
                if (d < best_d) {
                    best_d = d;
                    best = l;
                }
            }
            next[i] = best;
        }
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t a : next) ++sizes[a];
        reseed_empty_clusters(X, dist, next, sizes, Z);
        if (!assign.empty() && next == assign) {
            converged = true;
            break;
        }
        assign = next;
        Matrix sums(k, m, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            auto x = X.row(i);
            for (std::size_t v = 0; v < m; ++v) sums(assign[i], v) += x[v];
        }
        for (std::size_t l = 0; l < k; ++l)
            for (std::size_t v = 0; v < m; ++v) Z(l, v) = sums(l, v) / sizes[l];
        double crit = 0.0;
        for (std::size_t i = 0; i < n; ++i) crit += sq_euclid(X.row(i), Z.row(assign[i]));
        history.push_back(crit);
        rounds = round;
    }
    return make_outcome(std::move(assign), k, std::move(Z), Matrix(k, m, 1.0 / m),
                        std::move(history), rounds, converged);
}

Centroids kmeanspp_init(const DataMatrix& X, std::size_t k, std::uint64_t seed) {
    const std::size_t n = X.n(), m = X.m();
    if (k == 0) throw std::invalid_argument("kmeanspp_init: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeanspp_init: k > n");

    Rng rng(seed);
    Matrix Z(k, m);
    std::size_t first = rng.uniform_index(n);
    for (std::size_t v = 0; v < m; ++v) Z(0, v) = X.values()(first, v);

    std::vector<double> min_d2(n);
    for (std::size_t i = 0; i < n; ++i) min_d2[i] = sq_euclid(X.row(i), Z.row(0));

    for (std::size_t t = 1; t < k; ++t) {
        double total = std::accumulate(min_d2.begin(), min_d2.end(), 0.0);
        if (total == 0.0)
            throw std::invalid_argument(
                "kmeanspp_init: zero total sampling weight (fewer than k distinct entities)");
        double r = rng.uniform(0.0, total);
        std::size_t pick = n;
        double cum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cum += min_d2[i];
            if (r < cum) {
                pick = i;
                break;
            }
        }
        if (pick == n) {  // fp slack: fall back to the last positive-weight entity
            for (std::size_t i = n; i-- > 0;)
                if (min_d2[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        for (std::size_t v = 0; v < m; ++v) Z(t, v) = X.values()(pick, v);
        for (std::size_t i = 0; i < n; ++i)
            min_d2[i] = std::min(min_d2[i], sq_euclid(X.row(i), Z.row(t)));
    }
    return Centroids(std::move(Z));
}

namespace {

struct Extraction {
    std::vector<std::size_t> members;  // dataset indices
    std::vector<double> centroid;
    std::vector<double> weight_row;  // empty for the unweighted variant
};

// One anomalous-pattern extraction: 2-center run on `remaining` with the
// grand center frozen. Cluster 0 is the anomalous one, so distance ties
// keep entities with it.
Extraction extract_anomalous(const DataMatrix& X, const std::vector<std::size_t>& remaining,
                             std::span<const double> zc, const MinkowskiExponent* p,
                             const CenterSearchParams& center, double add, int max_iterations) {
    const std::size_t m = X.m(), r = remaining.size();
    const double pv = p ? p->value() : 2.0;

    std::size_t seed_pos = 0;
    double far_d = -1.0;
    for (std::size_t j = 0; j < r; ++j) {
        auto x = X.row(remaining[j]);
        double d = 0.0;
        for (std::size_t v = 0; v < m; ++v) d += pow_abs(x[v] - zc[v], pv);
        if (d > far_d) {
            far_d = d;
            seed_pos = j;
        }
    }

    std::vector<double> zt(X.row(remaining[seed_pos]).begin(), X.row(remaining[seed_pos]).end());
    Matrix W(2, m, 1.0 / m);
    Matrix wp = pow_rows(W, pv);
    std::vector<char> in_t(r, 0), prev;
    std::vector<double> col;

    for (int round = 1; round <= max_iterations; ++round) {
        std::size_t count_t = 0;
        for (std::size_t j = 0; j < r; ++j) {
            auto x = X.row(remaining[j]);
            double dt = 0.0, dc = 0.0;
            for (std::size_t v = 0; v < m; ++v) {
                double e = pow_abs(x[v] - zt[v], pv);
                double ec = pow_abs(x[v] - zc[v], pv);
                dt += wp(0, v) * e;
                dc += wp(1, v) * ec;
            }
            in_t[j] = dt <= dc ? 1 : 0;
            count_t += in_t[j];
        }
        if (count_t == 0) {
            in_t = prev;  // anomalous cluster emptied: keep the previous split
            break;
        }
        if (!prev.empty() && in_t == prev) break;
        prev = in_t;

        for (std::size_t v = 0; v < m; ++v) {
            col.clear();
            for (std::size_t j = 0; j < r; ++j)
                if (in_t[j]) col.push_back(X.values()(remaining[j], v));
            zt[v] = p ? minkowski_center(col, *p, center)
                      : std::accumulate(col.begin(), col.end(), 0.0) / col.size();
        }
        if (p) {
            Matrix D(2, m, add);
            for (std::size_t j = 0; j < r; ++j) {
                auto x = X.row(remaining[j]);
                std::size_t l = in_t[j] ? 0 : 1;
                const double* zrow = in_t[j] ? zt.data() : zc.data();
                for (std::size_t v = 0; v < m; ++v) D(l, v) += pow_abs(x[v] - zrow[v], pv);
            }
            for (std::size_t l = 0; l < 2; ++l)
                weight_row_from_dispersion(D.row(l), pv, W.row(l));
            wp = pow_rows(W, pv);
        }
    }

    Extraction out;
    for (std::size_t j = 0; j < r; ++j)
        if (in_t[j]) out.members.push_back(remaining[j]);
    out.centroid = zt;
    if (p) out.weight_row.assign(W.row(0).begin(), W.row(0).end());
    return out;
}

std::vector<Extraction> anomalous_pattern_loop(const DataMatrix& X, std::span<const double> zc,
                                               const MinkowskiExponent* p,
                                               const CenterSearchParams& center, double add,
                                               int max_iterations) {
    std::vector<std::size_t> remaining(X.n());
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<Extraction> found;
    while (!remaining.empty()) {
        Extraction e = extract_anomalous(X, remaining, zc, p, center, add, max_iterations);
        std::vector<std::size_t> rest;
        rest.reserve(remaining.size() - e.members.size());
        std::size_t mi = 0;
        for (std::size_t idx : remaining) {
            if (mi < e.members.size() && e.members[mi] == idx)
                ++mi;
            else
                rest.push_back(idx);
        }
        remaining = std::move(rest);
        found.push_back(std::move(e));
    }
    return found;
}

// Indices of the k largest-cardinality extractions, ties by extraction order.
std::vector<std::size_t> select_largest(const std::vector<Extraction>& found, std::size_t k) {
    if (found.size() < k) throw TooFewAnomalousClusters(found.size(), k);
    std::vector<std::size_t> order(found.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return found[a].members.size() > found[b].members.size();
    });
    order.resize(k);
    return order;
}

}  // namespace

Centroids ikmeans_init(const DataMatrix& X, std::size_t k) {
    const std::size_t n = X.n(), m = X.m();
    if (k == 0) throw std::invalid_argument("ikmeans_init: k must be >= 1");
    if (k > n) throw std::invalid_argument("ikmeans_init: k > n");

    std::vector<double> zc(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = X.row(i);
        for (std::size_t v = 0; v < m; ++v) zc[v] += x[v];
    }
    for (double& c : zc) c /= static_cast<double>(n);

    auto found = anomalous_pattern_loop(X, zc, nullptr, {}, 0.0, 1000);
    auto keep = select_largest(found, k);
    Matrix Z(k, m);
    for (std::size_t t = 0; t < k; ++t)
        for (std::size_t v = 0; v < m; ++v) Z(t, v) = found[keep[t]].centroid[v];
    return Centroids(std::move(Z));
}

std::pair<Centroids, FeatureWeights> imwk_init(const DataMatrix& X, std::size_t k,
                                               MinkowskiExponent p, const ImwkOptions& opts) {
    const std::size_t n = X.n(), m = X.m();
    if (k == 0) throw std::invalid_argument("imwk_init: k must be >= 1");
    if (k > n) throw std::invalid_argument("imwk_init: k > n");

    std::vector<double> zc(m), col(n);
    for (std::size_t v = 0; v < m; ++v) {
        for (std::size_t i = 0; i < n; ++i) col[i] = X.values()(i, v);
        zc[v] = minkowski_center(col, p, opts.center);
    }

    auto found = anomalous_pattern_loop(X, zc, &p, opts.center, opts.dispersion_add,
                                        opts.max_iterations);
    auto keep = select_largest(found, k);
    Matrix Z(k, m), W(k, m);
    for (std::size_t t = 0; t < k; ++t) {
        for (std::size_t v = 0; v < m; ++v) {
            Z(t, v) = found[keep[t]].centroid[v];
            W(t, v) = found[keep[t]].weight_row[v];
        }
    }
    return {Centroids(std::move(Z)), FeatureWeights(std::move(W))};
}

ClusteringOutcome mwk_means(const DataMatrix& X, const Centroids& Z0, const FeatureWeights& W0,
                            MinkowskiExponent p, const MwkOptions& opts) {
    const std::size_t n = X.n(), m = X.m(), k = Z0.k();
    if (Z0.m() != m) throw std::invalid_argument("mwk_means: centroid dimension mismatch");
    if (W0.k() != k || W0.m() != m)
        throw std::invalid_argument("mwk_means: weight shape mismatch");
    if (k > n) throw std::invalid_argument("mwk_means: k > n");
    if (opts.max_iterations < 1)
        throw std::invalid_argument("mwk_means: max_iterations must be >= 1");
    const double pv = p.value();

    Matrix Z = Z0.z;
    Matrix W = W0.w();
    Matrix wp = pow_rows(W, pv);
    Matrix dist(n, k);
    std::vector<std::size_t> assign, next(n);
    std::vector<double> history, col;
    bool converged = false;
    int rounds = 0;

    for (int round = 1; round <= opts.max_iterations; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            auto x = X.row(i);
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (std::size_t l = 0; l < k; ++l) {
                double d = 0.0;
                for (std::size_t v = 0; v < m; ++v) {
                    double c = wp(l, v);
                    if (c != 0.0) d += c * pow_abs(x[v] - Z(l, v), pv);
                }
                dist(i, l) = d;
                if (d < best_d) {
                    best_d = d;
                    best = l;
                }
            }
            next[i] = best;
        }
        std::vector<std::size_t> sizes(k, 0);
        for (std::size_t a : next) ++sizes[a];
        reseed_empty_clusters(X, dist, next, sizes, Z);
        if (!assign.empty() && next == assign) {
            converged = true;
            break;
        }
        assign = next;

        for (std::size_t l = 0; l < k; ++l) {
            for (std::size_t v = 0; v < m; ++v) {
                col.clear();
                for (std::size_t i = 0; i < n; ++i)
                    if (assign[i] == l) col.push_back(X.values()(i, v));
                Z(l, v) = minkowski_center(col, p, opts.center);
            }
        }
        if (!opts.freeze_weights) {
            W = weights_for_partition(X, assign, k, Z, pv, opts.dispersion_add);
            wp = pow_rows(W, pv);
        }
        history.push_back(criterion_of(X, assign, Z, wp, pv));
        rounds = round;
    }
    return make_outcome(std::move(assign), k, std::move(Z), std::move(W), std::move(history),
                        rounds, converged);
}

ClusteringOutcome imwk_means(const DataMatrix& X, std::size_t k, MinkowskiExponent p,
                             const ImwkOptions& opts) {
    auto [Z0, W0] = imwk_init(X, k, p, opts);
    MwkOptions mwk_opts{opts.max_iterations, opts.center, opts.dispersion_add, false};
    return mwk_means(X, Z0, W0, p, mwk_opts);
}

FeatureWeights update_weights(const DataMatrix& X, const Membership& u, const Centroids& Z,
                              MinkowskiExponent p) {
    if (u.n() != X.n() || Z.k() != u.k() || Z.m() != X.m())
        throw std::invalid_argument("update_weights: shape mismatch");
    return FeatureWeights(
        weights_for_partition(X, u.assignments(), u.k(), Z.z, p.value(), 0.0));
}

double criterion_value(const DataMatrix& X, const Membership& u, const Centroids& Z,
                       const FeatureWeights& W, MinkowskiExponent p) {
    if (u.n() != X.n() || Z.k() != u.k() || Z.m() != X.m() || W.k() != u.k() || W.m() != X.m())
        throw std::invalid_argument("criterion_value: shape mismatch");
    Matrix wp = pow_rows(W.w(), p.value());
    return criterion_of(X, u.assignments(), Z.z, wp, p.value());
}

double kmeans_criterion(const DataMatrix& X, const Membership& u, const Centroids& Z) {
    if (u.n() != X.n() || Z.k() != u.k() || Z.m() != X.m())
        throw std::invalid_argument("kmeans_criterion: shape mismatch");
    double total = 0.0;
    for (std::size_t i = 0; i < X.n(); ++i)
        total += sq_euclid(X.row(i), Z.z.row(u.cluster_of(i)));
    return total;
}

}  // namespace mwk
