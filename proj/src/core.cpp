#include "mwk/core.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace mwk {

DataMatrix::DataMatrix(Matrix values, std::vector<std::string> feature_names)
    : values_(std::move(values)), feature_names_(std::move(feature_names)) {
    if (values_.rows() == 0 || values_.cols() == 0)
        throw std::invalid_argument("DataMatrix: need at least one row and one column");
    if (!values_.all_finite())
        throw std::invalid_argument("DataMatrix: non-finite value");
    if (!feature_names_.empty() && feature_names_.size() != values_.cols())
        throw std::invalid_argument("DataMatrix: feature_names length != column count");
}

Membership::Membership(std::vector<std::size_t> assignments, std::size_t k)
    : assign_(std::move(assignments)), k_(k) {
    if (assign_.empty()) throw std::invalid_argument("Membership: empty assignment");
    if (k_ == 0) throw std::invalid_argument("Membership: k must be >= 1");
    std::vector<bool> seen(k_, false);
    for (std::size_t a : assign_) {
        if (a >= k_) throw std::invalid_argument("Membership: cluster index out of range");
        seen[a] = true;
    }
    for (std::size_t l = 0; l < k_; ++l)
        if (!seen[l]) throw std::invalid_argument("Membership: empty cluster");
}

Membership Membership::from_matrix(const Matrix& u) {
    if (u.rows() == 0 || u.cols() == 0)
        throw std::invalid_argument("Membership: empty matrix");
    std::vector<std::size_t> assign(u.rows());
    for (std::size_t i = 0; i < u.rows(); ++i) {
        int ones = 0;
        for (std::size_t l = 0; l < u.cols(); ++l) {
            double v = u(i, l);
            if (v != 0.0 && v != 1.0)
                throw std::invalid_argument("Membership: matrix entries must be 0 or 1");
            if (v == 1.0) {
                ++ones;
                assign[i] = l;
            }
        }
        if (ones != 1)
            throw std::invalid_argument("Membership: row must contain exactly one 1");
    }
    return Membership(std::move(assign), u.cols());
}

std::vector<std::size_t> Membership::cluster_sizes() const {
    std::vector<std::size_t> sizes(k_, 0);
    for (std::size_t a : assign_) ++sizes[a];
    return sizes;
}

Matrix Membership::to_matrix() const {
    Matrix u(n(), k_, 0.0);
    for (std::size_t i = 0; i < n(); ++i) u(i, assign_[i]) = 1.0;
    return u;
}

Centroids::Centroids(Matrix centers) : z(std::move(centers)) {
    if (z.rows() == 0 || z.cols() == 0)
        throw std::invalid_argument("Centroids: empty matrix");
    if (!z.all_finite()) throw std::invalid_argument("Centroids: non-finite entry");
}

FeatureWeights::FeatureWeights(Matrix w) : w_(std::move(w)) {
    if (w_.rows() == 0 || w_.cols() == 0)
        throw std::invalid_argument("FeatureWeights: empty matrix");
    for (std::size_t l = 0; l < w_.rows(); ++l) {
        double sum = 0.0;
        for (std::size_t v = 0; v < w_.cols(); ++v) {
            double x = w_(l, v);
            if (!(x >= 0.0 && x <= 1.0))
                throw std::invalid_argument("FeatureWeights: entry outside [0,1]");
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("FeatureWeights: row does not sum to 1");
    }
}

FeatureWeights FeatureWeights::uniform(std::size_t k, std::size_t m) {
    return FeatureWeights(Matrix(k, m, 1.0 / static_cast<double>(m)));
}

LabeledDataset::LabeledDataset(DataMatrix data, std::vector<int> labels)
    : data_(std::move(data)), labels_(std::move(labels)) {
    if (labels_.size() != data_.n())
        throw std::invalid_argument("LabeledDataset: labels length != entity count");
    std::set<int> distinct(labels_.begin(), labels_.end());
    n_classes_ = distinct.size();
}

Membership membership_from_labels(const std::vector<int>& labels) {
    if (labels.empty()) throw std::invalid_argument("membership_from_labels: empty input");
    std::unordered_map<int, std::size_t> col;
    std::vector<std::size_t> assign(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = col.try_emplace(labels[i], col.size());
        assign[i] = it->second;
    }
    return Membership(std::move(assign), col.size());
}

std::vector<int> labels_from_membership(const Membership& u) {
    std::vector<int> labels(u.n());
    for (std::size_t i = 0; i < u.n(); ++i)
        labels[i] = static_cast<int>(u.cluster_of(i)) + 1;  // 1-based in output
    return labels;
}

}  // namespace mwk
