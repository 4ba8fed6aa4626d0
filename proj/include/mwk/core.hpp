#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mwk/matrix.hpp"

namespace mwk {

// n x m table of feature values. Rejects empty or non-finite input.
class DataMatrix {
public:
    explicit DataMatrix(Matrix values, std::vector<std::string> feature_names = {});

    std::size_t n() const { return values_.rows(); }
    std::size_t m() const { return values_.cols(); }
    const Matrix& values() const { return values_; }
    std::span<const double> row(std::size_t i) const { return values_.row(i); }
    const std::vector<std::string>& feature_names() const { return feature_names_; }

private:
    Matrix values_;
    std::vector<std::string> feature_names_;  // empty = unnamed
};

// Crisp partition of n entities into k clusters. Stored as one cluster
// index per entity, so "exactly one 1 per row" holds by construction.
class Membership {
public:
    Membership(std::vector<std::size_t> assignments, std::size_t k);

    // Validates an explicit n x k binary matrix: rejects rows whose sum is not 1.
    static Membership from_matrix(const Matrix& u);

    std::size_t n() const { return assign_.size(); }
    std::size_t k() const { return k_; }
    std::size_t cluster_of(std::size_t i) const { return assign_[i]; }
    const std::vector<std::size_t>& assignments() const { return assign_; }

    std::vector<std::size_t> cluster_sizes() const;
    Matrix to_matrix() const;

    bool operator==(const Membership& other) const = default;

private:
    std::vector<std::size_t> assign_;
    std::size_t k_ = 0;
};

struct Centroids {
    Matrix z;  // k x m

    explicit Centroids(Matrix centers);
    std::size_t k() const { return z.rows(); }
    std::size_t m() const { return z.cols(); }
};

// Per-cluster feature weights; every row sums to 1 (within 1e-9) and all
// entries lie in [0, 1].
class FeatureWeights {
public:
    explicit FeatureWeights(Matrix w);
    static FeatureWeights uniform(std::size_t k, std::size_t m);

    const Matrix& w() const { return w_; }
    double operator()(std::size_t l, std::size_t v) const { return w_(l, v); }
    std::span<const double> row(std::size_t l) const { return w_.row(l); }
    std::size_t k() const { return w_.rows(); }
    std::size_t m() const { return w_.cols(); }

private:
    Matrix w_;
};

struct ClusteringOutcome {
    Membership membership;
    Centroids centroids;
    FeatureWeights weights;  // uniform 1/m rows for unweighted algorithms
    double criterion = 0.0;
    int iterations = 0;
    bool converged = true;
    std::vector<double> criterion_history;  // value after each full iteration
};

// Dataset with ground-truth labels (arbitrary integer identifiers).
class LabeledDataset {
public:
    LabeledDataset(DataMatrix data, std::vector<int> labels);

    const DataMatrix& data() const { return data_; }
    const std::vector<int>& labels() const { return labels_; }
    std::size_t n_classes() const { return n_classes_; }

private:
    DataMatrix data_;
    std::vector<int> labels_;
    std::size_t n_classes_ = 0;
};

// Columns ordered by first appearance of each distinct label.
Membership membership_from_labels(const std::vector<int>& labels);

// Inverse of membership_from_labels up to label renaming; emits 1-based ids.
std::vector<int> labels_from_membership(const Membership& u);

}  // namespace mwk
