#include "mwk/datagen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "mwk/rng.hpp"

namespace mwk {

void MixtureConfig::validate() const {
    if (n == 0 || m == 0 || k == 0)
        throw std::invalid_argument("MixtureConfig: n, m, k must be >= 1");
    if (n < k * min_cardinality)
        throw std::invalid_argument("MixtureConfig: n < k * min_cardinality");
    if (!(sigma2_lo > 0.0) || sigma2_hi < sigma2_lo)
        throw std::invalid_argument("MixtureConfig: bad variance range");
}

namespace {

// Uniformly random weak composition of `total` into `k` parts
// (stars and bars: choose k-1 bar positions among total + k - 1 slots).
std::vector<std::size_t> uniform_composition(std::size_t total, std::size_t k, Rng& rng) {
    if (k == 1) return {total};
    const std::size_t slots = total + k - 1;
    std::vector<std::size_t> bars;
    bars.reserve(k - 1);
    // Floyd's sampling of k-1 distinct values from [0, slots)
    for (std::size_t j = slots - (k - 1); j < slots; ++j) {
        std::size_t t = rng.uniform_index(j + 1);
        if (std::find(bars.begin(), bars.end(), t) != bars.end())
            bars.push_back(j);
        else
            bars.push_back(t);
    }
    std::sort(bars.begin(), bars.end());
    std::vector<std::size_t> parts(k);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < k - 1; ++i) {
        parts[i] = bars[i] - prev;
        prev = bars[i] + 1;
    }
    parts[k - 1] = slots - prev;
    return parts;
}

}  // namespace

LabeledDataset generate_mixture(const MixtureConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    Matrix centers(cfg.k, cfg.m);
    std::vector<double> sigma(cfg.k);
    for (std::size_t l = 0; l < cfg.k; ++l) {
        for (std::size_t v = 0; v < cfg.m; ++v) centers(l, v) = rng.normal();
        sigma[l] = std::sqrt(rng.uniform(cfg.sigma2_lo, cfg.sigma2_hi));
    }

    auto extra = uniform_composition(cfg.n - cfg.k * cfg.min_cardinality, cfg.k, rng);
    std::vector<std::size_t> sizes(cfg.k);
    for (std::size_t l = 0; l < cfg.k; ++l) sizes[l] = cfg.min_cardinality + extra[l];

    Matrix values(cfg.n, cfg.m);
    std::vector<int> labels(cfg.n);
    std::size_t row = 0;
    for (std::size_t l = 0; l < cfg.k; ++l) {
        for (std::size_t c = 0; c < sizes[l]; ++c, ++row) {
            labels[row] = static_cast<int>(l) + 1;
            for (std::size_t v = 0; v < cfg.m; ++v)
                values(row, v) = centers(l, v) + sigma[l] * rng.normal();
        }
    }
    return LabeledDataset(DataMatrix(std::move(values)), std::move(labels));
}

namespace {

LabeledDataset append_columns(const LabeledDataset& D, std::size_t count,
                              const std::function<double(Rng&)>& draw, Rng& rng) {
    const auto& X = D.data();
    Matrix out(X.n(), X.m() + count);
    for (std::size_t i = 0; i < X.n(); ++i)
        for (std::size_t v = 0; v < X.m(); ++v) out(i, v) = X.values()(i, v);
    for (std::size_t c = 0; c < count; ++c)
        for (std::size_t i = 0; i < X.n(); ++i) out(i, X.m() + c) = draw(rng);

    std::vector<std::string> names = X.feature_names();
    if (!names.empty())
        for (std::size_t c = 0; c < count; ++c) names.push_back("noise" + std::to_string(c + 1));
    return LabeledDataset(DataMatrix(std::move(out), std::move(names)), D.labels());
}

std::size_t effective_count(const LabeledDataset& D, const NoiseSpec& spec) {
    if (spec.count > 0) return spec.count;
    return (D.data().m() + 1) / 2;  // default: ceil(m/2)
}

}  // namespace

LabeledDataset add_uniform_noise_features(const LabeledDataset& D, const NoiseSpec& spec) {
    std::size_t count = effective_count(D, spec);
    if (count == 0) throw std::invalid_argument("add_uniform_noise_features: count must be >= 1");
    const auto& vals = D.data().values().data();
    auto [lo_it, hi_it] = std::minmax_element(vals.begin(), vals.end());
    double lo = *lo_it, hi = *hi_it;
    Rng rng(spec.seed);
    return append_columns(D, count, [lo, hi](Rng& r) { return r.uniform(lo, hi); }, rng);
}

LabeledDataset add_gaussian_noise_features(const LabeledDataset& D, const NoiseSpec& spec) {
    std::size_t count = effective_count(D, spec);
    if (count == 0)
        throw std::invalid_argument("add_gaussian_noise_features: count must be >= 1");
    Rng rng(spec.seed);
    return append_columns(D, count, [](Rng& r) { return r.normal(); }, rng);
}

LabeledDataset inject_within_cluster_noise(const LabeledDataset& D, const NoiseSpec& spec) {
    if (!(spec.fraction > 0.0 && spec.fraction <= 1.0))
        throw std::invalid_argument("inject_within_cluster_noise: fraction must be in (0,1]");
    const auto& X = D.data();
    const std::size_t m = X.m();

    // map labels to 0-based cluster ids by first appearance
    Membership u = membership_from_labels(D.labels());
    const std::size_t k = u.k();

    const std::size_t total = m * k;
    const auto chosen_count =
        static_cast<std::size_t>(std::ceil(spec.fraction * static_cast<double>(total)));

    Rng rng(spec.seed);
    std::vector<std::size_t> segments(total);
    std::iota(segments.begin(), segments.end(), 0);
    for (std::size_t i = 0; i < chosen_count; ++i) {  // Fisher-Yates prefix
        std::size_t j = i + rng.uniform_index(total - i);
        std::swap(segments[i], segments[j]);
    }

    std::vector<double> col_lo(m), col_hi(m);
    for (std::size_t v = 0; v < m; ++v) {
        double lo = X.values()(0, v), hi = lo;
        for (std::size_t i = 1; i < X.n(); ++i) {
            lo = std::min(lo, X.values()(i, v));
            hi = std::max(hi, X.values()(i, v));
        }
        col_lo[v] = lo;
        col_hi[v] = hi;
    }

    Matrix out = X.values();
    for (std::size_t s = 0; s < chosen_count; ++s) {
        const std::size_t v = segments[s] % m;
        const std::size_t l = segments[s] / m;
        for (std::size_t i = 0; i < X.n(); ++i)
            if (u.cluster_of(i) == l) out(i, v) = rng.uniform(col_lo[v], col_hi[v]);
    }
    return LabeledDataset(DataMatrix(std::move(out), X.feature_names()), D.labels());
}

DatasetConfig parse_dataset_config(const std::string& text) {
    DatasetConfig cfg;
    cfg.name = text;
    std::string body = text;

    auto fail = [&]() -> void {
        throw std::invalid_argument("bad dataset config '" + text +
                                    "' (expected e.g. 1000x6-3, 1000x6-3+3NF, 1000x6-3WCN)");
    };

    if (body.size() > 3 && body.substr(body.size() - 3) == "WCN") {
        cfg.has_noise = true;
        cfg.noise.model = NoiseModel::WCN;
        cfg.noise.fraction = 0.5;
        body = body.substr(0, body.size() - 3);
    } else if (auto plus = body.find('+'); plus != std::string::npos) {
        std::string noise = body.substr(plus + 1);
        body = body.substr(0, plus);
        std::size_t pos = 0;
        while (pos < noise.size() && std::isdigit(static_cast<unsigned char>(noise[pos]))) ++pos;
        if (pos == 0) fail();
        std::string kind = noise.substr(pos);
        cfg.has_noise = true;
        cfg.noise.count = std::stoul(noise.substr(0, pos));
        if (kind == "NF")
            cfg.noise.model = NoiseModel::NF;
        else if (kind == "NNF")
            cfg.noise.model = NoiseModel::NNF;
        else
            fail();
    }

    auto x = body.find('x');
    auto dash = body.find('-', x == std::string::npos ? 0 : x);
    if (x == std::string::npos || dash == std::string::npos) fail();
    try {
        cfg.mixture.n = std::stoul(body.substr(0, x));
        cfg.mixture.m = std::stoul(body.substr(x + 1, dash - x - 1));
        cfg.mixture.k = std::stoul(body.substr(dash + 1));
    } catch (const std::exception&) {
        fail();
    }
    cfg.mixture.validate();
    return cfg;
}

LabeledDataset build_dataset(const DatasetConfig& cfg, std::uint64_t seed) {
    MixtureConfig mix = cfg.mixture;
    mix.seed = seed;
    LabeledDataset base = generate_mixture(mix);
    if (!cfg.has_noise) return base;
    NoiseSpec noise = cfg.noise;
    noise.seed = mix64(seed ^ 0x6e6f697365ULL);  // independent stream for the noise stage
    switch (noise.model) {
        case NoiseModel::NF: return add_uniform_noise_features(base, noise);
        case NoiseModel::NNF: return add_gaussian_noise_features(base, noise);
        case NoiseModel::WCN: return inject_within_cluster_noise(base, noise);
    }
    throw std::logic_error("build_dataset: unknown noise model");
}

}  // namespace mwk
