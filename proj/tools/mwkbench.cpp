// Benchmark CLI for the Minkowski-weighted k-means library.
//
// Subcommands:
//   generate  write synthetic dataset CSVs
//   cluster   one algorithm on one dataset, prints ARI and criterion
//   bench     full experiment over datasets x normalizations x arms
//   sweep     (p1, p2) grid of the rescaled imwk arm for one dataset batch
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 partial failures.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "mwk/bench.hpp"
#include "mwk/csv.hpp"
#include "mwk/eval.hpp"
#include "mwk/rescale.hpp"
#include "mwk/rng.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct CliError : std::runtime_error {
    CliError(int code_, const std::string& what) : std::runtime_error(what), code(code_) {}
    int code;
};

mwk::DatasetSource dataset_source(const std::string& spec, const std::string& label_column,
                                  const std::vector<std::string>& categoricals) {
    mwk::DatasetSource src;
    if (spec.size() > 4 && spec.substr(spec.size() - 4) == ".csv") {
        src.kind = mwk::DatasetSource::Kind::Csv;
        src.spec = spec;
        src.label_column = label_column;
        src.categorical_columns = categoricals;
    } else {
        src.kind = mwk::DatasetSource::Kind::Synthetic;
        src.spec = spec;
        mwk::parse_dataset_config(spec);  // fail fast on typos
    }
    return src;
}

int grid_milli(double p) { return static_cast<int>(std::lround(p * 1000.0)); }

// Flat JSON config; CLI flags override file values.
void apply_config_file(const std::string& path, mwk::ExperimentSpec& spec,
                       std::vector<std::string>& dataset_specs, std::string& out_dir) {
    std::ifstream in(path);
    if (!in) throw CliError(2, "cannot open config file " + path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw CliError(2, std::string("bad config file: ") + e.what());
    }
    if (cfg.contains("datasets")) dataset_specs = cfg["datasets"].get<std::vector<std::string>>();
    if (cfg.contains("normalizations")) {
        spec.normalizations.clear();
        for (const auto& n : cfg["normalizations"])
            spec.normalizations.push_back(mwk::parse_normalization(n.get<std::string>()));
    }
    if (cfg.contains("arms")) {
        spec.arms.clear();
        for (const auto& a : cfg["arms"]) spec.arms.push_back(mwk::parse_arm(a.get<std::string>()));
    }
    if (cfg.contains("grid_start")) spec.grid.start_milli = grid_milli(cfg["grid_start"]);
    if (cfg.contains("grid_stop")) spec.grid.stop_milli = grid_milli(cfg["grid_stop"]);
    if (cfg.contains("grid_step")) spec.grid.step_milli = grid_milli(cfg["grid_step"]);
    if (cfg.contains("kmeanspp_runs")) spec.kmeanspp_runs = cfg["kmeanspp_runs"];
    if (cfg.contains("datasets_per_config")) spec.datasets_per_config = cfg["datasets_per_config"];
    if (cfg.contains("seed")) spec.master_seed = cfg["seed"];
    if (cfg.contains("workers")) spec.workers = cfg["workers"];
    if (cfg.contains("out")) out_dir = cfg["out"];
}

void require_writable(const std::string& out_dir) {
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw CliError(2, "cannot create output directory " + out_dir);
    auto probe = fs::path(out_dir) / ".write_probe";
    std::ofstream test(probe);
    if (!test) throw CliError(2, "output directory not writable: " + out_dir);
    test.close();
    fs::remove(probe, ec);
}

int run_generate(const std::string& config, int count, std::uint64_t seed,
                 const std::string& out_dir) {
    auto cfg = mwk::parse_dataset_config(config);
    require_writable(out_dir);
    for (int i = 0; i < count; ++i) {
        std::uint64_t ds_seed = mwk::derive_seed(seed, config, "dataset", 0, 0, i);
        auto data = mwk::build_dataset(cfg, ds_seed);
        char name[64];
        std::snprintf(name, sizeof name, "%s_%02d.csv", config.c_str(), i);
        mwk::save_csv((fs::path(out_dir) / name).string(), data);
        std::cout << name << ": " << data.data().n() << "x" << data.data().m() << ", "
                  << data.n_classes() << " classes\n";
    }
    return 0;
}

int run_cluster(const mwk::DatasetSource& src, const std::string& arm_name, std::size_t k_flag,
                double p, double p1, double p2, const std::string& norm, int runs,
                std::uint64_t seed) {
    mwk::LabeledDataset data = [&] {
        if (src.kind == mwk::DatasetSource::Kind::Csv) {
            mwk::CsvLoadOptions opts;
            if (!src.label_column.empty()) opts.label_column = src.label_column;
            opts.categorical_columns = src.categorical_columns;
            return mwk::load_csv(src.spec, opts);
        }
        auto cfg = mwk::parse_dataset_config(src.spec);
        return mwk::build_dataset(cfg, seed);
    }();
    std::size_t k = k_flag > 0 ? k_flag : data.n_classes();
    auto X = mwk::normalize(data.data(), mwk::parse_normalization(norm));
    const auto& truth = data.labels();

    auto print_one = [&](const mwk::ClusteringOutcome& out) {
        double ari = mwk::adjusted_rand_index(truth, mwk::labels_from_membership(out.membership));
        std::cout << "ari " << ari << "  criterion " << out.criterion << "  iterations "
                  << out.iterations << (out.converged ? "" : "  (iteration cap hit)") << "\n";
    };

    mwk::Arm arm = mwk::parse_arm(arm_name);
    switch (arm) {
        case mwk::Arm::KMeansPP: {
            double sum = 0.0, sumsq = 0.0;
            for (int r = 0; r < runs; ++r) {
                auto Z0 = mwk::kmeanspp_init(X, k, mwk::mix64(seed ^ mwk::mix64(r)));
                auto out = mwk::kmeans(X, Z0);
                double ari =
                    mwk::adjusted_rand_index(truth, mwk::labels_from_membership(out.membership));
                sum += ari;
                sumsq += ari * ari;
                if (runs == 1) print_one(out);
            }
            if (runs > 1) {
                double mean = sum / runs;
                std::cout << "mean ari " << mean << "  std "
                          << std::sqrt(std::max(0.0, sumsq / runs - mean * mean)) << "  over "
                          << runs << " runs\n";
            }
            return 0;
        }
        case mwk::Arm::Imwk: {
            auto out = mwk::imwk_means(X, k, mwk::MinkowskiExponent(p));
            print_one(out);
            return 0;
        }
        case mwk::Arm::RescaledImwk: {
            mwk::RescalePipelineConfig cfg;
            cfg.normalization = mwk::parse_normalization(norm);
            cfg.p1 = p1;
            cfg.p2 = p2;
            cfg.k = k;
            cfg.downstream = mwk::Downstream::ImwkMeans;
            auto res = mwk::rescaled_imwk(data.data(), cfg);
            print_one(res.final);
            return 0;
        }
        case mwk::Arm::RescaledKMeansPP: {
            mwk::RescalePipelineConfig cfg;
            cfg.normalization = mwk::parse_normalization(norm);
            cfg.p1 = p1;
            cfg.k = k;
            cfg.downstream = mwk::Downstream::KMeansPP;
            cfg.kmeanspp_runs = runs;
            cfg.seed = seed;
            auto res = mwk::rescaled_kmeanspp(data.data(), cfg);
            double sum = 0.0, sumsq = 0.0;
            for (const auto& out : res.runs) {
                double ari =
                    mwk::adjusted_rand_index(truth, mwk::labels_from_membership(out.membership));
                sum += ari;
                sumsq += ari * ari;
            }
            double mean = sum / res.runs.size();
            std::cout << "mean ari " << mean << "  std "
                      << std::sqrt(std::max(0.0, sumsq / res.runs.size() - mean * mean))
                      << "  over " << res.runs.size() << " runs\n";
            return 0;
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Minkowski-weighted k-means benchmark harness"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write synthetic dataset CSVs");
    std::string gen_config = "1000x6-3";
    int gen_count = 10;
    std::uint64_t gen_seed = 0;
    std::string gen_out = "datasets";
    gen->add_option("--dataset", gen_config, "config string, e.g. 1000x6-3+3NF");
    gen->add_option("--runs", gen_count, "number of datasets");
    gen->add_option("--seed", gen_seed, "master seed");
    gen->add_option("--out", gen_out, "output directory");

    // cluster
    auto* clu = app.add_subcommand("cluster", "run one algorithm on one dataset");
    std::string clu_data, clu_arm = "imwk", clu_norm = "range", clu_label = "label";
    std::vector<std::string> clu_cat;
    std::size_t clu_k = 0;
    double clu_p = 2.0, clu_p1 = 2.0, clu_p2 = 2.0;
    int clu_runs = 25;
    std::uint64_t clu_seed = 0;
    clu->add_option("--data", clu_data, "csv path or synthetic config")->required();
    clu->add_option("--arm", clu_arm, "kmeans++|imwk|rescaled-kmeans++|rescaled-imwk");
    clu->add_option("--k", clu_k, "cluster count (default: true class count)");
    clu->add_option("--p", clu_p, "Minkowski exponent (imwk)");
    clu->add_option("--p1", clu_p1, "stage-2 exponent (rescaled arms)");
    clu->add_option("--p2", clu_p2, "stage-4 exponent (rescaled imwk)");
    clu->add_option("--norm", clu_norm, "zscore|robust|range|minmax|unit|none");
    clu->add_option("--runs", clu_runs, "k-means++ restarts");
    clu->add_option("--seed", clu_seed, "seed");
    clu->add_option("--label-column", clu_label, "label column name for csv input");
    clu->add_option("--categorical", clu_cat, "categorical columns to one-hot expand");

    // bench
    auto* ben = app.add_subcommand("bench", "full experiment");
    std::vector<std::string> ben_datasets;
    std::vector<std::string> ben_norms, ben_arms;
    std::string ben_out = "bench_out", ben_config_file, ben_label = "label";
    std::vector<std::string> ben_cat;
    double ben_gstart = 1.1, ben_gstop = 5.0, ben_gstep = 0.1;
    int ben_runs = -1, ben_per_config = -1, ben_workers = 0;
    std::uint64_t ben_seed = 0;
    bool ben_seed_set = false;
    ben->add_option("--data", ben_datasets, "dataset configs and/or csv paths");
    ben->add_option("--norm", ben_norms, "normalizations");
    ben->add_option("--arm", ben_arms, "arms");
    ben->add_option("--grid-start", ben_gstart, "p grid start");
    ben->add_option("--grid-stop", ben_gstop, "p grid stop");
    ben->add_option("--grid-step", ben_gstep, "p grid step");
    ben->add_option("--runs", ben_runs, "k-means++ runs per dataset");
    ben->add_option("--datasets-per-config", ben_per_config, "synthetic replicas per config");
    ben->add_option("--seed", ben_seed, "master seed")->each([&](const std::string&) {
        ben_seed_set = true;
    });
    ben->add_option("--workers", ben_workers, "worker threads (0 = all cores)");
    ben->add_option("--out", ben_out, "output directory");
    ben->add_option("--config", ben_config_file, "JSON config file (flags override)");
    ben->add_option("--label-column", ben_label, "label column for csv datasets");
    ben->add_option("--categorical", ben_cat, "categorical columns for csv datasets");

    // sweep
    auto* swp = app.add_subcommand("sweep", "rescaled-imwk (p1,p2) grid for one dataset batch");
    std::string swp_data, swp_norm = "range", swp_out = "sweep_out", swp_label = "label";
    std::vector<std::string> swp_cat;
    double swp_gstart = 1.1, swp_gstop = 5.0, swp_gstep = 0.1;
    int swp_runs = 25, swp_per_config = 10, swp_workers = 0;
    std::uint64_t swp_seed = 0;
    swp->add_option("--data", swp_data, "dataset config or csv path")->required();
    swp->add_option("--norm", swp_norm, "normalization");
    swp->add_option("--grid-start", swp_gstart, "p grid start");
    swp->add_option("--grid-stop", swp_gstop, "p grid stop");
    swp->add_option("--grid-step", swp_gstep, "p grid step");
    swp->add_option("--runs", swp_runs, "k-means++ baseline runs");
    swp->add_option("--datasets-per-config", swp_per_config, "synthetic replicas");
    swp->add_option("--seed", swp_seed, "master seed");
    swp->add_option("--workers", swp_workers, "worker threads");
    swp->add_option("--out", swp_out, "output directory");
    swp->add_option("--label-column", swp_label, "label column for csv input");
    swp->add_option("--categorical", swp_cat, "categorical columns");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_generate(gen_config, gen_count, gen_seed, gen_out);

        if (clu->parsed()) {
            try {
                auto src = dataset_source(clu_data, clu_label, clu_cat);
                return run_cluster(src, clu_arm, clu_k, clu_p, clu_p1, clu_p2, clu_norm,
                                   clu_runs, clu_seed);
            } catch (const mwk::CsvParseError& e) {
                throw CliError(3, e.what());
            }
        }

        if (ben->parsed()) {
            mwk::ExperimentSpec spec;
            std::vector<std::string> dataset_specs;
            std::string out_dir = ben_out;
            if (!ben_config_file.empty())
                apply_config_file(ben_config_file, spec, dataset_specs, out_dir);
            if (!ben_datasets.empty()) dataset_specs = ben_datasets;
            if (!ben_norms.empty()) {
                spec.normalizations.clear();
                for (const auto& n : ben_norms)
                    spec.normalizations.push_back(mwk::parse_normalization(n));
            }
            if (!ben_arms.empty()) {
                spec.arms.clear();
                for (const auto& a : ben_arms) spec.arms.push_back(mwk::parse_arm(a));
            }
            if (ben->count("--grid-start")) spec.grid.start_milli = grid_milli(ben_gstart);
            if (ben->count("--grid-stop")) spec.grid.stop_milli = grid_milli(ben_gstop);
            if (ben->count("--grid-step")) spec.grid.step_milli = grid_milli(ben_gstep);
            if (ben_runs >= 0) spec.kmeanspp_runs = ben_runs;
            if (ben_per_config >= 0) spec.datasets_per_config = ben_per_config;
            if (ben_seed_set) spec.master_seed = ben_seed;
            if (ben_workers > 0) spec.workers = ben_workers;
            if (ben->count("--out")) out_dir = ben_out;
            if (dataset_specs.empty()) throw CliError(2, "bench: no datasets given");
            for (const auto& d : dataset_specs)
                spec.datasets.push_back(dataset_source(d, ben_label, ben_cat));

            try {
                spec.validate();
            } catch (const std::exception& e) {
                throw CliError(2, e.what());
            }
            require_writable(out_dir);
            auto records = mwk::run_experiment(spec);
            mwk::report(records, out_dir);
            std::size_t failures = 0;
            for (const auto& rec : records) failures += rec.ok ? 0 : 1;
            std::cout << records.size() << " records (" << failures << " failed) -> " << out_dir
                      << "\n";
            return failures > 0 ? 4 : 0;
        }

        if (swp->parsed()) {
            mwk::ExperimentSpec spec;
            spec.grid.start_milli = grid_milli(swp_gstart);
            spec.grid.stop_milli = grid_milli(swp_gstop);
            spec.grid.step_milli = grid_milli(swp_gstep);
            spec.kmeanspp_runs = swp_runs;
            spec.datasets_per_config = swp_per_config;
            spec.master_seed = swp_seed;
            spec.workers = swp_workers;
            auto src = dataset_source(swp_data, swp_label, swp_cat);
            spec.datasets = {src};
            require_writable(swp_out);
            auto grid =
                mwk::sweep_grid(src, mwk::parse_normalization(swp_norm), spec);
            auto prefix = fs::path(swp_out) /
                          ("grid_" + src.id_prefix() + "_" + swp_norm);
            mwk::write_grid_csv(grid, prefix.string());
            std::cout << "baseline mean ari " << grid.baseline_mean << " -> " << prefix.string()
                      << ".csv\n";
            return 0;
        }
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code;
    } catch (const mwk::CsvParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
