#include <doctest.h>

#include <cmath>

#include "mwk/normalize.hpp"
#include "mwk/rng.hpp"

using namespace mwk;

namespace {

DataMatrix column_matrix(const std::vector<double>& col) {
    Matrix m(col.size(), 1);
    for (std::size_t i = 0; i < col.size(); ++i) m(i, 0) = col[i];
    return DataMatrix(std::move(m));
}

std::vector<double> column_of(const DataMatrix& X, std::size_t v) {
    std::vector<double> out(X.n());
    for (std::size_t i = 0; i < X.n(); ++i) out[i] = X.values()(i, v);
    return out;
}

}  // namespace

TEST_CASE("zscore hand-computed column") {
    auto out = column_of(zscore(column_matrix({1, 2, 3})), 0);
    CHECK(out[0] == doctest::Approx(-1.224744871391589).epsilon(1e-9));
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(1.224744871391589).epsilon(1e-9));
}

TEST_CASE("zscore is idempotent on standardized input and rejects constants") {
    double s = std::sqrt(1.5);
    auto X = column_matrix({-s, 0, s});
    auto out = column_of(zscore(X), 0);
    CHECK(out[0] == doctest::Approx(-s).epsilon(1e-9));
    CHECK(out[2] == doctest::Approx(s).epsilon(1e-9));
    CHECK_THROWS_WITH_AS(static_cast<void>(zscore(column_matrix({5, 5, 5}))),
                         doctest::Contains("constant feature"), std::invalid_argument);
}

TEST_CASE("robust zscore uses median and MAD") {
    auto out = column_of(robust_zscore(column_matrix({1, 2, 3, 4, 100})), 0);
    CHECK(out == std::vector<double>{-2, -1, 0, 1, 97});

    auto sym = column_of(robust_zscore(column_matrix({-7.5, 0, 7.5})), 0);
    CHECK(sym[0] == doctest::Approx(-1));
    CHECK(sym[1] == doctest::Approx(0));
    CHECK(sym[2] == doctest::Approx(1));

    CHECK_THROWS_AS(static_cast<void>(robust_zscore(column_matrix({7, 7, 7, 9}))),
                    std::invalid_argument);
}

TEST_CASE("range normalization centers by mean and divides by range") {
    auto out = column_of(range_normalize(column_matrix({0, 2, 4})), 0);
    CHECK(out[0] == doctest::Approx(-0.5));
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(0.5));

    // shift invariance
    auto shifted = column_of(range_normalize(column_matrix({10, 12, 14})), 0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(shifted[i] == doctest::Approx(out[i]));

    CHECK_THROWS_AS(static_cast<void>(range_normalize(column_matrix({3, 3}))),
                    std::invalid_argument);
}

TEST_CASE("min max maps endpoints and is idempotent") {
    auto out = column_of(min_max(column_matrix({0, 5, 10})), 0);
    CHECK(out == std::vector<double>{0, 0.5, 1});
    CHECK(column_of(min_max(column_matrix({-1, 1})), 0) == std::vector<double>{0, 1});

    auto once = min_max(column_matrix({3, 7, 9, 4}));
    auto twice = min_max(once);
    for (std::size_t i = 0; i < once.n(); ++i)
        CHECK(twice.values()(i, 0) == doctest::Approx(once.values()(i, 0)).epsilon(1e-12));
}

TEST_CASE("unit length scales columns to norm one") {
    CHECK(column_of(unit_length(column_matrix({3, 4})), 0) == std::vector<double>{0.6, 0.8});
    CHECK(column_of(unit_length(column_matrix({1})), 0) == std::vector<double>{1});
    CHECK(column_of(unit_length(column_matrix({2, 0, 0})), 0) == std::vector<double>{1, 0, 0});
    CHECK_THROWS_AS(static_cast<void>(unit_length(column_matrix({0, 0}))),
                    std::invalid_argument);
}

TEST_CASE("column statistics invariants on random data") {
    Rng rng(42);
    Matrix m(37, 4);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t v = 0; v < m.cols(); ++v) m(i, v) = rng.uniform(-3.0, 9.0);
    DataMatrix X(std::move(m));

    auto zs = zscore(X);
    auto rn = range_normalize(X);
    auto mm = min_max(X);
    auto ul = unit_length(X);
    for (std::size_t v = 0; v < X.m(); ++v) {
        double mean_z = 0, var_z = 0, mean_r = 0, norm_u = 0;
        double lo_m = 1e300, hi_m = -1e300, lo_r = 1e300, hi_r = -1e300;
        for (std::size_t i = 0; i < X.n(); ++i) {
            mean_z += zs.values()(i, v);
            mean_r += rn.values()(i, v);
            norm_u += ul.values()(i, v) * ul.values()(i, v);
            lo_m = std::min(lo_m, mm.values()(i, v));
            hi_m = std::max(hi_m, mm.values()(i, v));
            lo_r = std::min(lo_r, rn.values()(i, v));
            hi_r = std::max(hi_r, rn.values()(i, v));
        }
        mean_z /= X.n();
        mean_r /= X.n();
        for (std::size_t i = 0; i < X.n(); ++i) {
            double d = zs.values()(i, v) - mean_z;
            var_z += d * d;
        }
        var_z /= X.n();
        CHECK(std::abs(mean_z) < 1e-9);
        CHECK(std::abs(std::sqrt(var_z) - 1.0) < 1e-9);
        CHECK(std::abs(mean_r) < 1e-9);
        CHECK(std::abs((hi_r - lo_r) - 1.0) < 1e-9);
        CHECK(lo_m == doctest::Approx(0.0));
        CHECK(hi_m == doctest::Approx(1.0));
        CHECK(std::abs(std::sqrt(norm_u) - 1.0) < 1e-9);
    }
}

TEST_CASE("normalization commutes with column permutation") {
    Rng rng(7);
    Matrix m(21, 3);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t v = 0; v < m.cols(); ++v) m(i, v) = rng.uniform(0.0, 5.0);
    DataMatrix X(m);
    Matrix perm(m.rows(), m.cols());
    const std::size_t order[3] = {2, 0, 1};
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t v = 0; v < 3; ++v) perm(i, v) = m(i, order[v]);
    DataMatrix Xp(std::move(perm));

    for (auto method : {NormalizationMethod::ZScore, NormalizationMethod::RobustZScore,
                        NormalizationMethod::RangeNorm, NormalizationMethod::MinMax,
                        NormalizationMethod::UnitLength}) {
        auto a = normalize(X, method);
        auto b = normalize(Xp, method);
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t v = 0; v < 3; ++v)
                CHECK(b.values()(i, v) == doctest::Approx(a.values()(i, order[v])));
    }
}
