#include "mwk/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>
#include <tuple>

#include "mwk/csv.hpp"
#include "mwk/eval.hpp"
#include "mwk/rescale.hpp"
#include "mwk/rng.hpp"

namespace mwk {

Arm parse_arm(const std::string& name) {
    if (name == "kmeans++") return Arm::KMeansPP;
    if (name == "imwk") return Arm::Imwk;
    if (name == "rescaled-kmeans++") return Arm::RescaledKMeansPP;
    if (name == "rescaled-imwk") return Arm::RescaledImwk;
    throw std::invalid_argument("unknown arm: " + name);
}

std::string arm_name(Arm arm) {
    switch (arm) {
        case Arm::KMeansPP: return "kmeans++";
        case Arm::Imwk: return "imwk";
        case Arm::RescaledKMeansPP: return "rescaled-kmeans++";
        case Arm::RescaledImwk: return "rescaled-imwk";
    }
    return "?";
}

void PGrid::validate() const {
    if (start_milli <= 1000) throw std::invalid_argument("p grid must start above 1");
    if (step_milli <= 0) throw std::invalid_argument("p grid step must be positive");
    if (stop_milli < start_milli) throw std::invalid_argument("p grid stop below start");
}

std::vector<int> PGrid::points() const {
    validate();
    std::vector<int> pts;
    for (int p = start_milli; p <= stop_milli; p += step_milli) pts.push_back(p);
    return pts;
}

std::string p_to_string(int milli) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", static_cast<double>(milli) / 1000.0);
    return buf;
}

std::string DatasetSource::id_prefix() const {
    if (kind == Kind::Synthetic) return spec;
    return std::filesystem::path(spec).stem().string();
}

void ExperimentSpec::validate() const {
    if (datasets.empty()) throw std::invalid_argument("experiment: no datasets");
    if (normalizations.empty()) throw std::invalid_argument("experiment: no normalizations");
    if (arms.empty()) throw std::invalid_argument("experiment: no arms");
    if (kmeanspp_runs < 1) throw std::invalid_argument("experiment: kmeanspp_runs must be >= 1");
    if (datasets_per_config < 1)
        throw std::invalid_argument("experiment: datasets_per_config must be >= 1");
    grid.validate();
    for (const auto& d : datasets)
        if (d.kind == DatasetSource::Kind::Synthetic) parse_dataset_config(d.spec);
}

namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
    for (unsigned char c : s) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, const std::string& dataset_id,
                          const std::string& arm, int p1_milli, int p2_milli, int run_index) {
    std::uint64_t h = mix64(master ^ kFnvOffset);
    h = fnv1a(dataset_id, h);
    h = fnv1a(arm, h);
    h = mix64(h ^ static_cast<std::uint64_t>(p1_milli));
    h = mix64(h ^ (static_cast<std::uint64_t>(p2_milli) << 20));
    h = mix64(h ^ (static_cast<std::uint64_t>(run_index) << 40));
    return h;
}

namespace {

struct JobInput {
    DatasetSource source;
    int instance = 0;  // for synthetic replicas
    std::string dataset_id;
    NormalizationMethod normalization = NormalizationMethod::RangeNorm;
};

long long ms_between(std::chrono::steady_clock::time_point a,
                     std::chrono::steady_clock::time_point b) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(b - a).count();
}

// All arm runs for one (dataset instance, normalization). Runs serially
// inside one worker; the imwk outcomes at each p are shared between the
// plain arm and the rescaled stage-2 fits.
class DatasetJob {
public:
    DatasetJob(const ExperimentSpec& spec, JobInput input)
        : spec_(spec), in_(std::move(input)) {}

    std::vector<ResultRecord> run() {
        try {
            load();
        } catch (const std::exception& e) {
            ResultRecord rec = base_record();
            rec.arm = "(load)";
            rec.ok = false;
            rec.error = e.what();
            return {rec};
        }
        for (Arm arm : spec_.arms) {
            switch (arm) {
                case Arm::KMeansPP: run_kmeanspp(); break;
                case Arm::Imwk: run_imwk(); break;
                case Arm::RescaledKMeansPP: run_rescaled_kmeanspp(); break;
                case Arm::RescaledImwk: run_rescaled_imwk(); break;
            }
        }
        return std::move(records_);
    }

private:
    ResultRecord base_record() const {
        ResultRecord rec;
        rec.dataset_id = in_.dataset_id;
        rec.normalization = normalization_name(in_.normalization);
        return rec;
    }

    void load() {
        if (in_.source.kind == DatasetSource::Kind::Synthetic) {
            auto cfg = parse_dataset_config(in_.source.spec);
            std::uint64_t seed = derive_seed(spec_.master_seed, in_.source.spec, "dataset", 0, 0,
                                             in_.instance);
            data_.emplace(build_dataset(cfg, seed));
        } else {
            CsvLoadOptions opts;
            if (!in_.source.label_column.empty()) opts.label_column = in_.source.label_column;
            opts.categorical_columns = in_.source.categorical_columns;
            data_.emplace(load_csv(in_.source.spec, opts));
        }
        normalized_.emplace(normalize(data_->data(), in_.normalization));
        k_ = data_->n_classes();
        if (k_ < 1) throw std::runtime_error("dataset has no labels");
    }

    double ari_of(const Membership& u) const {
        return adjusted_rand_index(data_->labels(), labels_from_membership(u));
    }

    void push_ok(ResultRecord rec, const ClusteringOutcome& out,
                 std::chrono::steady_clock::time_point started) {
        rec.ok = true;
        rec.ari = ari_of(out.membership);
        rec.criterion = out.criterion;
        rec.iterations = out.iterations;
        rec.wall_time_ms = ms_between(started, std::chrono::steady_clock::now());
        records_.push_back(std::move(rec));
    }

    void push_failed(ResultRecord rec, const std::string& why,
                     std::chrono::steady_clock::time_point started) {
        rec.ok = false;
        rec.error = why;
        rec.wall_time_ms = ms_between(started, std::chrono::steady_clock::now());
        records_.push_back(std::move(rec));
    }

    void run_kmeanspp() {
        for (int r = 0; r < spec_.kmeanspp_runs; ++r) {
            ResultRecord rec = base_record();
            rec.arm = arm_name(Arm::KMeansPP);
            rec.run_index = r;
            auto t0 = std::chrono::steady_clock::now();
            try {
                std::uint64_t seed =
                    derive_seed(spec_.master_seed, in_.dataset_id, rec.arm, 0, 0, r);
                Centroids Z0 = kmeanspp_init(*normalized_, k_, seed);
                push_ok(std::move(rec), kmeans(*normalized_, Z0, spec_.imwk.max_iterations), t0);
            } catch (const std::exception& e) {
                push_failed(std::move(rec), e.what(), t0);
            }
        }
    }

    // Deterministic, so compute once per p and reuse across arms.
    const ClusteringOutcome* imwk_at(int p_milli) {
        auto it = imwk_cache_.find(p_milli);
        if (it != imwk_cache_.end()) return it->second ? &*it->second : nullptr;
        std::optional<ClusteringOutcome> out;
        try {
            out = imwk_means(*normalized_, k_, MinkowskiExponent(p_of_milli(p_milli)),
                             spec_.imwk);
        } catch (const TooFewAnomalousClusters&) {
            out.reset();
        }
        auto [pos, inserted] = imwk_cache_.emplace(p_milli, std::move(out));
        return pos->second ? &*pos->second : nullptr;
    }

    void run_imwk() {
        for (int p : spec_.grid.points()) {
            ResultRecord rec = base_record();
            rec.arm = arm_name(Arm::Imwk);
            rec.p1_milli = p;
            auto t0 = std::chrono::steady_clock::now();
            try {
                const ClusteringOutcome* out = imwk_at(p);
                if (!out) {
                    push_failed(std::move(rec), "too few anomalous clusters", t0);
                    continue;
                }
                push_ok(std::move(rec), *out, t0);
            } catch (const std::exception& e) {
                push_failed(std::move(rec), e.what(), t0);
            }
        }
    }

    const DataMatrix* rescaled_at(int p1_milli) {
        auto it = rescaled_cache_.find(p1_milli);
        if (it != rescaled_cache_.end()) return it->second ? &*it->second : nullptr;
        std::optional<DataMatrix> rescaled;
        if (const ClusteringOutcome* stage2 = imwk_at(p1_milli))
            rescaled = rescale_with_weights(*normalized_, stage2->membership, stage2->weights);
        auto [pos, inserted] = rescaled_cache_.emplace(p1_milli, std::move(rescaled));
        return pos->second ? &*pos->second : nullptr;
    }

    void run_rescaled_imwk() {
        auto points = spec_.grid.points();
        for (int p1 : points) {
            const DataMatrix* rescaled = rescaled_at(p1);
            for (int p2 : points) {
                ResultRecord rec = base_record();
                rec.arm = arm_name(Arm::RescaledImwk);
                rec.p1_milli = p1;
                rec.p2_milli = p2;
                auto t0 = std::chrono::steady_clock::now();
                if (!rescaled) {
                    push_failed(std::move(rec), "stage 2: too few anomalous clusters", t0);
                    continue;
                }
                try {
                    ClusteringOutcome out = imwk_means(
                        *rescaled, k_, MinkowskiExponent(p_of_milli(p2)), spec_.imwk);
                    push_ok(std::move(rec), out, t0);
                } catch (const TooFewAnomalousClusters& e) {
                    push_failed(std::move(rec), std::string("stage 4: ") + e.what(), t0);
                } catch (const std::exception& e) {
                    push_failed(std::move(rec), e.what(), t0);
                }
            }
        }
    }

    void run_rescaled_kmeanspp() {
        for (int p1 : spec_.grid.points()) {
            const DataMatrix* rescaled = rescaled_at(p1);
            for (int r = 0; r < spec_.kmeanspp_runs; ++r) {
                ResultRecord rec = base_record();
                rec.arm = arm_name(Arm::RescaledKMeansPP);
                rec.p1_milli = p1;
                rec.run_index = r;
                auto t0 = std::chrono::steady_clock::now();
                if (!rescaled) {
                    push_failed(std::move(rec), "stage 2: too few anomalous clusters", t0);
                    continue;
                }
                try {
                    std::uint64_t seed =
                        derive_seed(spec_.master_seed, in_.dataset_id, rec.arm, p1, 0, r);
                    Centroids Z0 = kmeanspp_init(*rescaled, k_, seed);
                    push_ok(std::move(rec), kmeans(*rescaled, Z0, spec_.imwk.max_iterations),
                            t0);
                } catch (const std::exception& e) {
                    push_failed(std::move(rec), e.what(), t0);
                }
            }
        }
    }

    const ExperimentSpec& spec_;
    JobInput in_;
    std::optional<LabeledDataset> data_;
    std::optional<DataMatrix> normalized_;
    std::size_t k_ = 0;
    std::map<int, std::optional<ClusteringOutcome>> imwk_cache_;
    std::map<int, std::optional<DataMatrix>> rescaled_cache_;
    std::vector<ResultRecord> records_;
};

std::string instance_id(const DatasetSource& source, int instance) {
    if (source.kind == DatasetSource::Kind::Csv) return source.id_prefix();
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02d", instance);
    return source.id_prefix() + buf;
}

bool record_less(const ResultRecord& a, const ResultRecord& b) {
    return std::tie(a.dataset_id, a.normalization, a.arm, a.p1_milli, a.p2_milli, a.run_index) <
           std::tie(b.dataset_id, b.normalization, b.arm, b.p1_milli, b.p2_milli, b.run_index);
}

}  // namespace

std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec) {
    spec.validate();

    std::vector<JobInput> jobs;
    for (const auto& source : spec.datasets) {
        int replicas =
            source.kind == DatasetSource::Kind::Synthetic ? spec.datasets_per_config : 1;
        for (int inst = 0; inst < replicas; ++inst) {
            for (NormalizationMethod norm : spec.normalizations) {
                JobInput in;
                in.source = source;
                in.instance = inst;
                in.dataset_id = instance_id(source, inst);
                in.normalization = norm;
                jobs.push_back(std::move(in));
            }
        }
    }

    std::vector<std::vector<ResultRecord>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    unsigned workers = spec.workers > 0 ? static_cast<unsigned>(spec.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, jobs.size());

    auto worker = [&]() {
        for (;;) {
            std::size_t idx = next.fetch_add(1);
            if (idx >= jobs.size()) return;
            DatasetJob job(spec, jobs[idx]);
            results[idx] = job.run();
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    std::vector<ResultRecord> all;
    for (auto& part : results)
        for (auto& rec : part) all.push_back(std::move(rec));
    std::sort(all.begin(), all.end(), record_less);
    return all;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records) {
    struct Acc {
        double sum = 0.0, sumsq = 0.0;
        int n = 0;
    };
    std::map<std::tuple<std::string, std::string, std::string, int, int>, Acc> cells;
    for (const auto& rec : records) {
        std::string dataset = rec.dataset_id.substr(0, rec.dataset_id.find('#'));
        auto key = std::make_tuple(dataset, rec.normalization, rec.arm, rec.p1_milli,
                                   rec.p2_milli);
        Acc& acc = cells[key];
        if (rec.ok) {
            acc.sum += rec.ari;
            acc.sumsq += rec.ari * rec.ari;
            ++acc.n;
        }
    }
    std::vector<SummaryRow> rows;
    rows.reserve(cells.size());
    for (const auto& [key, acc] : cells) {
        SummaryRow row;
        std::tie(row.dataset, row.normalization, row.arm, row.p1_milli, row.p2_milli) = key;
        row.runs = acc.n;
        if (acc.n > 0) {
            row.mean_ari = acc.sum / acc.n;
            double var = acc.sumsq / acc.n - row.mean_ari * row.mean_ari;
            row.std_ari = std::sqrt(std::max(0.0, var));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SummaryRow> best_cells(const std::vector<SummaryRow>& rows) {
    std::map<std::tuple<std::string, std::string, std::string>, SummaryRow> best;
    for (const auto& row : rows) {
        if (row.runs == 0) continue;
        auto key = std::make_tuple(row.dataset, row.normalization, row.arm);
        auto it = best.find(key);
        if (it == best.end() || row.mean_ari > it->second.mean_ari ||
            (row.mean_ari == it->second.mean_ari &&
             std::make_pair(row.p1_milli, row.p2_milli) <
                 std::make_pair(it->second.p1_milli, it->second.p2_milli)))
            best[key] = row;
    }
    std::vector<SummaryRow> out;
    out.reserve(best.size());
    for (const auto& [key, row] : best) out.push_back(row);
    return out;
}

GridResult sweep_grid(const DatasetSource& dataset, NormalizationMethod normalization,
                      const ExperimentSpec& spec) {
    ExperimentSpec sub = spec;
    sub.datasets = {dataset};
    sub.normalizations = {normalization};
    sub.arms = {Arm::KMeansPP, Arm::RescaledImwk};
    auto records = run_experiment(sub);

    auto points = spec.grid.points();
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < points.size(); ++i) index[points[i]] = i;

    GridResult grid;
    grid.p1_milli = points;
    grid.p2_milli = points;
    grid.mean_ari = Matrix(points.size(), points.size(), 0.0);
    grid.runs = Matrix(points.size(), points.size(), 0.0);

    double base_sum = 0.0;
    int base_n = 0;
    for (const auto& rec : records) {
        if (!rec.ok) continue;
        if (rec.arm == arm_name(Arm::KMeansPP)) {
            base_sum += rec.ari;
            ++base_n;
        } else if (rec.arm == arm_name(Arm::RescaledImwk)) {
            auto r = index.at(rec.p1_milli), c = index.at(rec.p2_milli);
            grid.mean_ari(r, c) += rec.ari;
            grid.runs(r, c) += 1.0;
        }
    }
    grid.baseline_mean = base_n > 0 ? base_sum / base_n : 0.0;
    grid.mask.assign(points.size(), std::vector<bool>(points.size(), true));
    for (std::size_t r = 0; r < points.size(); ++r) {
        for (std::size_t c = 0; c < points.size(); ++c) {
            if (grid.runs(r, c) > 0.0) {
                grid.mean_ari(r, c) /= grid.runs(r, c);
                grid.mask[r][c] = grid.mean_ari(r, c) <= grid.baseline_mean;
            }
        }
    }
    return grid;
}

namespace {

std::string format_sig(double v, int digits) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string p_cell(int milli) { return milli == 0 ? "" : p_to_string(milli); }

}  // namespace

void report(const std::vector<ResultRecord>& records, const std::string& out_dir) {
    if (records.empty()) throw std::invalid_argument("report: no records");
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {
        std::ofstream raw(fs::path(out_dir) / "raw_records.csv", std::ios::binary);
        if (!raw) throw std::runtime_error("report: cannot write to " + out_dir);
        raw << "dataset,normalization,arm,p1,p2,run,ari,criterion,iterations,status,error\n";
        for (const auto& rec : records) {
            raw << rec.dataset_id << ',' << rec.normalization << ',' << rec.arm << ','
                << p_cell(rec.p1_milli) << ',' << p_cell(rec.p2_milli) << ',' << rec.run_index
                << ',';
            if (rec.ok)
                raw << format_sig(rec.ari, 17) << ',' << format_sig(rec.criterion, 17) << ','
                    << rec.iterations << ",ok,";
            else
                raw << ",,,failed," << rec.error;
            raw << '\n';
        }
    }

    auto rows = summarize(records);
    {
        std::ofstream sum(fs::path(out_dir) / "summary.csv", std::ios::binary);
        sum << "dataset,normalization,arm,p1,p2,mean_ari,std_ari,runs\n";
        for (const auto& row : rows) {
            sum << row.dataset << ',' << row.normalization << ',' << row.arm << ','
                << p_cell(row.p1_milli) << ',' << p_cell(row.p2_milli) << ',';
            if (row.runs > 0)
                sum << format_sig(row.mean_ari, 6) << ',' << format_sig(row.std_ari, 6);
            else
                sum << ',';
            sum << ',' << row.runs << '\n';
        }
    }
    {
        auto best = best_cells(rows);
        std::ofstream out(fs::path(out_dir) / "best.csv", std::ios::binary);
        out << "dataset,normalization,arm,p1,p2,mean_ari,std_ari,runs\n";
        for (const auto& row : best) {
            out << row.dataset << ',' << row.normalization << ',' << row.arm << ','
                << p_cell(row.p1_milli) << ',' << p_cell(row.p2_milli) << ','
                << format_sig(row.mean_ari, 6) << ',' << format_sig(row.std_ari, 6) << ','
                << row.runs << '\n';
        }
    }
    {
        // wall-clock totals; non-deterministic, so kept apart from the raw records
        std::map<std::string, long long> by_arm;
        for (const auto& rec : records) by_arm[rec.arm] += rec.wall_time_ms;
        std::ofstream out(fs::path(out_dir) / "timings.csv", std::ios::binary);
        out << "arm,total_wall_ms\n";
        for (const auto& [arm, ms] : by_arm) out << arm << ',' << ms << '\n';
    }
    {
        std::ofstream txt(fs::path(out_dir) / "summary.txt", std::ios::binary);
        std::size_t failures = 0;
        for (const auto& rec : records) failures += rec.ok ? 0 : 1;
        txt << records.size() << " records, " << failures << " failed\n\n";
        txt << "best cells (dataset / normalization / arm -> p1 p2 mean std):\n";
        for (const auto& row : best_cells(rows)) {
            txt << "  " << row.dataset << " / " << row.normalization << " / " << row.arm
                << " -> " << (row.p1_milli ? p_to_string(row.p1_milli) : "-") << ' '
                << (row.p2_milli ? p_to_string(row.p2_milli) : "-") << ' '
                << format_sig(row.mean_ari, 6) << ' ' << format_sig(row.std_ari, 6) << '\n';
        }
    }
}

void write_grid_csv(const GridResult& grid, const std::string& path_prefix) {
    {
        std::ofstream out(path_prefix + ".csv", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path_prefix + ".csv");
        out << "p1\\p2";
        for (int p2 : grid.p2_milli) out << ',' << p_to_string(p2);
        out << '\n';
        for (std::size_t r = 0; r < grid.p1_milli.size(); ++r) {
            out << p_to_string(grid.p1_milli[r]);
            for (std::size_t c = 0; c < grid.p2_milli.size(); ++c) {
                out << ',';
                if (grid.runs(r, c) > 0.0) out << format_sig(grid.mean_ari(r, c), 6);
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(path_prefix + "_mask.csv", std::ios::binary);
        out << "p1\\p2";
        for (int p2 : grid.p2_milli) out << ',' << p_to_string(p2);
        out << '\n';
        for (std::size_t r = 0; r < grid.p1_milli.size(); ++r) {
            out << p_to_string(grid.p1_milli[r]);
            for (std::size_t c = 0; c < grid.p2_milli.size(); ++c)
                out << ',' << (grid.mask[r][c] ? 1 : 0);
            out << '\n';
        }
    }
}

}  // namespace mwk
