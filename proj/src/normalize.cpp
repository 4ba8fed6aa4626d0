#include "mwk/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwk {
namespace {

std::string column_label(const DataMatrix& X, std::size_t v) {
    if (!X.feature_names().empty()) return X.feature_names()[v];
    return "#" + std::to_string(v);
}

[[noreturn]] void constant_feature_error(const char* op, const DataMatrix& X, std::size_t v) {
    throw std::invalid_argument(std::string(op) + ": constant feature " + column_label(X, v));
}

std::vector<double> column(const DataMatrix& X, std::size_t v) {
    std::vector<double> col(X.n());
    for (std::size_t i = 0; i < X.n(); ++i) col[i] = X.values()(i, v);
    return col;
}

double mean_of(const std::vector<double>& col) {
    double s = 0.0;
    for (double x : col) s += x;
    return s / static_cast<double>(col.size());
}

double median_of(std::vector<double> col) {
    std::sort(col.begin(), col.end());
    std::size_t n = col.size();
    return n % 2 == 1 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
}

template <typename PerColumn>
DataMatrix transform_columns(const DataMatrix& X, PerColumn f) {
    Matrix out(X.n(), X.m());
    for (std::size_t v = 0; v < X.m(); ++v) {
        auto col = column(X, v);
        f(v, col);
        for (std::size_t i = 0; i < X.n(); ++i) out(i, v) = col[i];
    }
    return DataMatrix(std::move(out), X.feature_names());
}

}  // namespace

DataMatrix zscore(const DataMatrix& X) {
    return transform_columns(X, [&](std::size_t v, std::vector<double>& col) {
        double mu = mean_of(col);
        double var = 0.0;
        for (double x : col) var += (x - mu) * (x - mu);
        var /= static_cast<double>(col.size());  // population convention
        if (var == 0.0) constant_feature_error("zscore", X, v);
        double sigma = std::sqrt(var);
        for (double& x : col) x = (x - mu) / sigma;
    });
}

DataMatrix robust_zscore(const DataMatrix& X) {
    return transform_columns(X, [&](std::size_t v, std::vector<double>& col) {
        double med = median_of(col);
        std::vector<double> dev(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) dev[i] = std::abs(col[i] - med);
        double mad = median_of(std::move(dev));
        if (mad == 0.0) constant_feature_error("robust_zscore", X, v);
        for (double& x : col) x = (x - med) / mad;
    });
}

DataMatrix range_normalize(const DataMatrix& X) {
    return transform_columns(X, [&](std::size_t v, std::vector<double>& col) {
        auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        double range = *hi - *lo;
        if (range == 0.0) constant_feature_error("range_normalize", X, v);
        double mu = mean_of(col);
        for (double& x : col) x = (x - mu) / range;
    });
}

DataMatrix min_max(const DataMatrix& X) {
    return transform_columns(X, [&](std::size_t v, std::vector<double>& col) {
        auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        double range = *hi - *lo;
        if (range == 0.0) constant_feature_error("min_max", X, v);
        double low = *lo;
        for (double& x : col) x = (x - low) / range;
    });
}

DataMatrix unit_length(const DataMatrix& X) {
    return transform_columns(X, [&](std::size_t v, std::vector<double>& col) {
        double sq = 0.0;
        for (double x : col) sq += x * x;
        if (sq == 0.0) constant_feature_error("unit_length", X, v);
        double norm = std::sqrt(sq);
        for (double& x : col) x /= norm;
    });
}

DataMatrix normalize(const DataMatrix& X, NormalizationMethod method) {
    switch (method) {
        case NormalizationMethod::ZScore: return zscore(X);
        case NormalizationMethod::RobustZScore: return robust_zscore(X);
        case NormalizationMethod::RangeNorm: return range_normalize(X);
        case NormalizationMethod::MinMax: return min_max(X);
        case NormalizationMethod::UnitLength: return unit_length(X);
        case NormalizationMethod::None: return X;
    }
    throw std::logic_error("normalize: unknown method");
}

NormalizationMethod parse_normalization(const std::string& name) {
    if (name == "zscore") return NormalizationMethod::ZScore;
    if (name == "robust") return NormalizationMethod::RobustZScore;
    if (name == "range") return NormalizationMethod::RangeNorm;
    if (name == "minmax") return NormalizationMethod::MinMax;
    if (name == "unit") return NormalizationMethod::UnitLength;
    if (name == "none") return NormalizationMethod::None;
    throw std::invalid_argument("unknown normalization: " + name);
}

std::string normalization_name(NormalizationMethod method) {
    switch (method) {
        case NormalizationMethod::ZScore: return "zscore";
        case NormalizationMethod::RobustZScore: return "robust";
        case NormalizationMethod::RangeNorm: return "range";
        case NormalizationMethod::MinMax: return "minmax";
        case NormalizationMethod::UnitLength: return "unit";
        case NormalizationMethod::None: return "none";
    }
    return "?";
}

}  // namespace mwk
