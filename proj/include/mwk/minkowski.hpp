#pragma once

#include <span>

#include "mwk/core.hpp"

namespace mwk {

// Minkowski exponent p, restricted to p > 1: the weight update raises
// dispersion ratios to 1/(p-1), which is undefined at p = 1.
class MinkowskiExponent {
public:
    explicit MinkowskiExponent(double p);
    double value() const { return p_; }

private:
    double p_;
};

// Fixed-step search settings for the one-dimensional center minimisation.
struct CenterSearchParams {
    double step = 0.001;
    int max_iterations = 100000;

    void validate() const;
};

// p-th power of the weighted Minkowski distance:
//   sum_v w_v^p * |x_v - z_v|^p
double weighted_minkowski(std::span<const double> x, std::span<const double> z,
                          std::span<const double> w, MinkowskiExponent p);

// Scalar mu minimising gamma(mu) = sum_i |values_i - mu|^p. Starts at the
// arithmetic mean and moves by params.step toward decreasing gamma until
// neither direction improves; the result is clamped to [min, max].
double minkowski_center(std::span<const double> values, MinkowskiExponent p,
                        const CenterSearchParams& params = {});

// Entry (l, v) is the Minkowski center of feature v over cluster l.
Centroids minkowski_centroids(const DataMatrix& X, const Membership& u,
                              MinkowskiExponent p, const CenterSearchParams& params = {});

}  // namespace mwk
