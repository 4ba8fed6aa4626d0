#include <doctest.h>

#include <algorithm>

#include "mwk/eval.hpp"
#include "mwk/rng.hpp"
#include "oracles.hpp"

using namespace mwk;

namespace {

std::vector<int> random_labels(std::size_t n, std::size_t classes, Rng& rng) {
    std::vector<int> out(n);
    for (auto& l : out) l = static_cast<int>(rng.uniform_index(classes)) + 1;
    return out;
}

}  // namespace

TEST_CASE("contingency examples") {
    auto t = contingency({1, 1, 2}, {1, 1, 2});
    CHECK(t.counts(0, 0) == 2.0);
    CHECK(t.counts(1, 1) == 1.0);
    CHECK(t.counts(0, 1) == 0.0);
    CHECK(t.n == 3);

    auto x = contingency({1, 1, 2, 2}, {1, 2, 1, 2});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) CHECK(x.counts(i, j) == 1.0);

    CHECK_THROWS_AS(contingency({1}, {1, 2}), std::invalid_argument);
}

TEST_CASE("contingency matches the naive pair-count oracle on random input") {
    Rng rng(60601);
    for (int trial = 0; trial < 10; ++trial) {
        auto S = random_labels(20, 3, rng);
        auto U = random_labels(20, 4, rng);
        auto t = contingency(S, U);
        auto naive = oracle::contingency_naive(S, U);
        double total = 0;
        long naive_total = 0;
        for (std::size_t i = 0; i < t.counts.rows(); ++i)
            for (std::size_t j = 0; j < t.counts.cols(); ++j) total += t.counts(i, j);
        for (auto& [key, count] : naive) naive_total += count;
        CHECK(total == doctest::Approx(static_cast<double>(naive_total)));
        // marginals agree with direct counts
        for (std::size_t i = 0; i < t.a.size(); ++i) {
            double row = 0;
            for (std::size_t j = 0; j < t.counts.cols(); ++j) row += t.counts(i, j);
            CHECK(row == doctest::Approx(static_cast<double>(t.a[i])));
        }
    }
}

TEST_CASE("adjusted rand index reference values") {
    CHECK(adjusted_rand_index({1, 1, 2, 2}, {1, 1, 2, 2}) == 1.0);
    CHECK(adjusted_rand_index({1, 1, 2, 2}, {2, 2, 9, 9}) == 1.0);
    // the 4-point crossing: value frozen from the pair-counting oracle
    CHECK(adjusted_rand_index({1, 1, 2, 2}, {1, 2, 1, 2}) == doctest::Approx(-0.5));
    CHECK(oracle::ari_pair_counting({1, 1, 2, 2}, {1, 2, 1, 2}) == doctest::Approx(-0.5));
    // all singletons against one lump
    CHECK(adjusted_rand_index({1, 2, 3, 4}, {7, 7, 7, 7}) == doctest::Approx(0.0));
    // degenerate: both single-class
    CHECK(adjusted_rand_index({3, 3, 3}, {5, 5, 5}) == 1.0);
    CHECK_THROWS_AS(adjusted_rand_index({1}, {1}), std::invalid_argument);
}

TEST_CASE("ARI equals the pair-counting formulation on random partitions") {
    Rng rng(11211);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + rng.uniform_index(49);
        auto S = random_labels(n, 1 + rng.uniform_index(5), rng);
        auto U = random_labels(n, 1 + rng.uniform_index(5), rng);
        double fast = adjusted_rand_index(S, U);
        double slow = oracle::ari_pair_counting(S, U);
        CHECK(std::abs(fast - slow) < 1e-12);
        CHECK(adjusted_rand_index(S, S) == 1.0);
        CHECK(std::abs(adjusted_rand_index(S, U) - adjusted_rand_index(U, S)) < 1e-12);
    }
}

TEST_CASE("ARI is invariant to relabeling either argument") {
    Rng rng(90210);
    auto S = random_labels(40, 4, rng);
    auto U = random_labels(40, 3, rng);
    double base = adjusted_rand_index(S, U);

    // apply a permutation to the label alphabet of each side
    auto S2 = S;
    for (auto& l : S2) l = 5 - l;  // 1..4 -> 4..1
    auto U2 = U;
    for (auto& l : U2) l = (l % 3) + 11;
    CHECK(adjusted_rand_index(S2, U) == doctest::Approx(base).epsilon(1e-12));
    CHECK(adjusted_rand_index(S, U2) == doctest::Approx(base).epsilon(1e-12));
    CHECK(adjusted_rand_index(S2, U2) == doctest::Approx(base).epsilon(1e-12));
}
