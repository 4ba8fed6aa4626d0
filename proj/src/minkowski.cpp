#include "mwk/minkowski.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mwk {

MinkowskiExponent::MinkowskiExponent(double p) : p_(p) {
    if (!(p > 1.0) || !std::isfinite(p))
        throw std::invalid_argument("MinkowskiExponent: p must be a finite value > 1");
}

void CenterSearchParams::validate() const {
    if (!(step > 0.0)) throw std::invalid_argument("CenterSearchParams: step must be > 0");
    if (max_iterations < 1)
        throw std::invalid_argument("CenterSearchParams: max_iterations must be >= 1");
}

double weighted_minkowski(std::span<const double> x, std::span<const double> z,
                          std::span<const double> w, MinkowskiExponent p) {
    if (x.size() != z.size() || x.size() != w.size())
        throw std::invalid_argument("weighted_minkowski: length mismatch");
    const double pv = p.value();
    double sum = 0.0;
    for (std::size_t v = 0; v < x.size(); ++v) {
        if (w[v] < 0.0) throw std::invalid_argument("weighted_minkowski: negative weight");
        sum += std::pow(w[v], pv) * std::pow(std::abs(x[v] - z[v]), pv);
    }
    return sum;
}

namespace {

double gamma_at(std::span<const double> values, double mu, double p) {
    double g = 0.0;
    for (double x : values) g += std::pow(std::abs(x - mu), p);
    return g;
}

}  // namespace

double minkowski_center(std::span<const double> values, MinkowskiExponent p,
                        const CenterSearchParams& params) {
    if (values.empty()) throw std::invalid_argument("minkowski_center: empty input");
    params.validate();
    const double pv = p.value();

    double mean = 0.0;
    double lo = values[0], hi = values[0];
    for (double x : values) {
        mean += x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    mean /= static_cast<double>(values.size());
    if (lo == hi) return lo;

    double mu = mean;
    double cur = gamma_at(values, mu, pv);
    double dir = 0.0;
    {
        double up = gamma_at(values, mu + params.step, pv);
        double down = gamma_at(values, mu - params.step, pv);
        if (up < cur && up <= down) {
            dir = params.step;
            mu += params.step;
            cur = up;
        } else if (down < cur) {
            dir = -params.step;
            mu -= params.step;
            cur = down;
        }
    }
    if (dir != 0.0) {
        // gamma is convex for p > 1, so keep walking until the first
        // non-improving step.
        for (int it = 1; it < params.max_iterations; ++it) {
            double next = gamma_at(values, mu + dir, pv);
            if (next >= cur) break;
            mu += dir;
            cur = next;
        }
    }
    return std::clamp(mu, lo, hi);
}

Centroids minkowski_centroids(const DataMatrix& X, const Membership& u,
                              MinkowskiExponent p, const CenterSearchParams& params) {
    if (u.n() != X.n())
        throw std::invalid_argument("minkowski_centroids: membership size mismatch");
    const std::size_t k = u.k(), m = X.m();
    auto sizes = u.cluster_sizes();
    for (std::size_t l = 0; l < k; ++l)
        if (sizes[l] == 0) throw std::invalid_argument("minkowski_centroids: empty cluster");

    Matrix z(k, m);
    std::vector<double> buf;
    for (std::size_t l = 0; l < k; ++l) {
        for (std::size_t v = 0; v < m; ++v) {
            buf.clear();
            for (std::size_t i = 0; i < X.n(); ++i)
                if (u.cluster_of(i) == l) buf.push_back(X.values()(i, v));
            z(l, v) = minkowski_center(buf, p, params);
        }
    }
    return Centroids(std::move(z));
}

}  // namespace mwk
