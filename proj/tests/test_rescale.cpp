#include <doctest.h>

#include <cmath>

#include "mwk/datagen.hpp"
#include "mwk/eval.hpp"
#include "mwk/normalize.hpp"
#include "mwk/rescale.hpp"
#include "mwk/rng.hpp"
#include "oracles.hpp"

using namespace mwk;

TEST_CASE("rescale_with_weights basic contracts") {
    SUBCASE("uniform weights divide everything by m") {
        auto X = DataMatrix(Matrix::from_rows({{2, 4}, {-6, 8}}));
        Membership u({0, 1}, 2);
        auto out = rescale_with_weights(X, u, FeatureWeights::uniform(2, 2));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t v = 0; v < 2; ++v)
                CHECK(out.values()(i, v) == doctest::Approx(X.values()(i, v) / 2));
    }
    SUBCASE("a one-hot weight row zeroes the other features") {
        auto X = DataMatrix(Matrix::from_rows({{3, 7}, {1, 1}}));
        Membership u({0, 1}, 2);
        auto W = FeatureWeights(Matrix::from_rows({{1.0, 0.0}, {0.5, 0.5}}));
        auto out = rescale_with_weights(X, u, W);
        CHECK(out.values()(0, 0) == 3.0);
        CHECK(out.values()(0, 1) == 0.0);
    }
    SUBCASE("equal entities in different clusters map to different rows") {
        auto X = DataMatrix(Matrix::from_rows({{4, 4}, {4, 4}}));
        Membership u({0, 1}, 2);
        auto W = FeatureWeights(Matrix::from_rows({{0.25, 0.75}, {0.75, 0.25}}));
        auto out = rescale_with_weights(X, u, W);
        CHECK(out.values()(0, 0) == 1.0);
        CHECK(out.values()(0, 1) == 3.0);
        CHECK(out.values()(1, 0) == 3.0);
        CHECK(out.values()(1, 1) == 1.0);
    }
    SUBCASE("shape mismatch is rejected") {
        auto X = DataMatrix(Matrix(3, 2, 1.0));
        Membership u({0, 1, 0}, 2);
        CHECK_THROWS_AS(rescale_with_weights(X, u, FeatureWeights::uniform(2, 3)),
                        std::invalid_argument);
    }
}

TEST_CASE("crisp collapse equals the naive full sum") {
    Rng rng(321);
    for (int t = 0; t < 10; ++t) {
        auto inst = oracle::random_instance(25, 3, 4, rng);
        DataMatrix X(inst.X);
        Membership u(inst.assign, inst.k);
        auto W = FeatureWeights(oracle::random_feasible_weights(4, 3, rng));
        auto fast = rescale_with_weights(X, u, W);
        auto naive = oracle::rescale_naive(inst.X, u.to_matrix(), W.w());
        for (std::size_t i = 0; i < X.n(); ++i)
            for (std::size_t v = 0; v < X.m(); ++v)
                CHECK(fast.values()(i, v) == naive(i, v));  // exact, not approximate
    }
}

TEST_CASE("pipeline config validation") {
    RescalePipelineConfig cfg;
    cfg.k = 3;
    cfg.downstream = Downstream::ImwkMeans;
    cfg.p1 = 2.0;
    SUBCASE("imwk downstream requires p2") {
        cfg.p2.reset();
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.p2 = 2.0;
        CHECK_NOTHROW(cfg.validate());
    }
    SUBCASE("kmeans++ downstream must leave p2 unset") {
        cfg.downstream = Downstream::KMeansPP;
        cfg.p2 = 2.0;
        CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
        cfg.p2.reset();
        CHECK_NOTHROW(cfg.validate());
    }
}

TEST_CASE("single-feature rescale is a no-op, so stage 4 equals plain imwk") {
    Matrix m(40, 1);
    Rng rng(5150);
    for (std::size_t i = 0; i < 20; ++i) m(i, 0) = rng.normal() * 0.2;
    for (std::size_t i = 20; i < 40; ++i) m(i, 0) = 8.0 + rng.normal() * 0.2;
    DataMatrix X(std::move(m));

    RescalePipelineConfig cfg;
    cfg.normalization = NormalizationMethod::RangeNorm;
    cfg.k = 2;
    cfg.p1 = 2.0;
    cfg.p2 = 2.5;
    auto piped = rescaled_imwk(X, cfg);
    auto plain = imwk_means(range_normalize(X), 2, MinkowskiExponent(2.5));
    CHECK(oracle::same_partition(labels_from_membership(piped.final.membership),
                                 labels_from_membership(plain.membership)));
}

TEST_CASE("rescaled pipelines are reproducible") {
    auto cfg_m = parse_dataset_config("200x4-2+2NF");
    auto data = build_dataset(cfg_m, 99);

    RescalePipelineConfig cfg;
    cfg.normalization = NormalizationMethod::RangeNorm;
    cfg.k = 2;
    cfg.p1 = 2.0;
    cfg.p2 = 2.0;
    auto a = rescaled_imwk(data.data(), cfg);
    auto b = rescaled_imwk(data.data(), cfg);
    CHECK(a.final.membership.assignments() == b.final.membership.assignments());
    CHECK(a.final.criterion == b.final.criterion);

    RescalePipelineConfig kcfg;
    kcfg.normalization = NormalizationMethod::RangeNorm;
    kcfg.k = 2;
    kcfg.p1 = 2.0;
    kcfg.downstream = Downstream::KMeansPP;
    kcfg.kmeanspp_runs = 5;
    kcfg.seed = 1234;
    auto r1 = rescaled_kmeanspp(data.data(), kcfg);
    auto r2 = rescaled_kmeanspp(data.data(), kcfg);
    REQUIRE(r1.runs.size() == 5);
    for (std::size_t i = 0; i < 5; ++i)
        CHECK(r1.runs[i].membership.assignments() == r2.runs[i].membership.assignments());
}

TEST_CASE("k=1 pipeline degenerates gracefully") {
    auto data = build_dataset(parse_dataset_config("60x3-2"), 5);
    RescalePipelineConfig cfg;
    cfg.normalization = NormalizationMethod::MinMax;
    cfg.k = 1;
    cfg.p1 = 2.0;
    cfg.downstream = Downstream::KMeansPP;
    cfg.kmeanspp_runs = 2;
    auto res = rescaled_kmeanspp(data.data(), cfg);
    for (const auto& run : res.runs) {
        CHECK(run.membership.k() == 1);
        CHECK(run.membership.n() == 60);
    }
}

TEST_CASE("rescaling shrinks noise features relative to informative ones") {
    // directional test over 20 seeded NF mixtures
    int improved = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto data = build_dataset(parse_dataset_config("240x4-3+2NF"), 7000 + trial);
        auto X = range_normalize(data.data());
        auto out = imwk_means(X, 3, MinkowskiExponent(2));
        auto rescaled = rescale_with_weights(X, out.membership, out.weights);

        auto within_var = [&](const DataMatrix& D, std::size_t v0, std::size_t v1) {
            // mean within-cluster variance (true labels) over columns [v0, v1)
            Membership truth = membership_from_labels(data.labels());
            double total = 0.0;
            std::size_t cells = 0;
            for (std::size_t l = 0; l < truth.k(); ++l) {
                for (std::size_t v = v0; v < v1; ++v) {
                    double mean = 0, var = 0;
                    std::size_t count = 0;
                    for (std::size_t i = 0; i < D.n(); ++i)
                        if (truth.cluster_of(i) == l) {
                            mean += D.values()(i, v);
                            ++count;
                        }
                    mean /= count;
                    for (std::size_t i = 0; i < D.n(); ++i)
                        if (truth.cluster_of(i) == l) {
                            double d = D.values()(i, v) - mean;
                            var += d * d;
                        }
                    total += var / count;
                    ++cells;
                }
            }
            return total / cells;
        };
        double before = within_var(X, 4, 6) / within_var(X, 0, 4);
        double after = within_var(rescaled, 4, 6) / within_var(rescaled, 0, 4);
        if (after < before) ++improved;
    }
    CHECK(improved >= 19);  // 95% of trials
}
