#include "mwk/eval.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace mwk {
namespace {

std::vector<std::size_t> compress(const std::vector<int>& labels, std::size_t& classes) {
    std::unordered_map<int, std::size_t> ids;
    std::vector<std::size_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], ids.size());
        out[i] = it->second;
    }
    classes = ids.size();
    return out;
}

double comb2(double x) { return x * (x - 1.0) / 2.0; }

}  // namespace

ContingencyTable contingency(const std::vector<int>& S, const std::vector<int>& U) {
    if (S.size() != U.size()) throw std::invalid_argument("contingency: length mismatch");
    if (S.empty()) throw std::invalid_argument("contingency: empty input");
    std::size_t k = 0, r = 0;
    auto s = compress(S, k);
    auto u = compress(U, r);

    ContingencyTable t;
    t.counts = Matrix(k, r, 0.0);
    t.a.assign(k, 0);
    t.b.assign(r, 0);
    t.n = static_cast<long>(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        t.counts(s[i], u[i]) += 1.0;
        ++t.a[s[i]];
        ++t.b[u[i]];
    }
    return t;
}

double adjusted_rand_index(const std::vector<int>& S, const std::vector<int>& U) {
    if (S.size() != U.size()) throw std::invalid_argument("adjusted_rand_index: length mismatch");
    if (S.size() < 2) throw std::invalid_argument("adjusted_rand_index: need n >= 2");
    ContingencyTable t = contingency(S, U);

    double index = 0.0;
    for (std::size_t i = 0; i < t.counts.rows(); ++i)
        for (std::size_t j = 0; j < t.counts.cols(); ++j) index += comb2(t.counts(i, j));
    double sum_a = 0.0, sum_b = 0.0;
    for (long x : t.a) sum_a += comb2(static_cast<double>(x));
    for (long x : t.b) sum_b += comb2(static_cast<double>(x));

    double expected = sum_a * sum_b / comb2(static_cast<double>(t.n));
    double max_index = 0.5 * (sum_a + sum_b);
    double denom = max_index - expected;
    if (denom == 0.0) {
        // both partitions fully determined by the marginals: identical iff
        // the index reaches its maximum
        return index == max_index ? 1.0 : 0.0;
    }
    return (index - expected) / denom;
}

}  // namespace mwk
