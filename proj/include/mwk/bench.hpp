#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mwk/clustering.hpp"
#include "mwk/datagen.hpp"
#include "mwk/normalize.hpp"

namespace mwk {

enum class Arm { KMeansPP, Imwk, RescaledKMeansPP, RescaledImwk };

Arm parse_arm(const std::string& name);
std::string arm_name(Arm arm);

// Exponent grid held in thousandths so grid points have exact identities.
struct PGrid {
    int start_milli = 1100;
    int stop_milli = 5000;
    int step_milli = 100;

    std::vector<int> points() const;
    void validate() const;
};

inline double p_of_milli(int milli) { return static_cast<double>(milli) / 1000.0; }
std::string p_to_string(int milli);

struct DatasetSource {
    enum class Kind { Synthetic, Csv } kind = Kind::Synthetic;
    std::string spec;  // config string, or csv path
    std::string label_column = "label";
    std::vector<std::string> categorical_columns;

    std::string id_prefix() const;  // config name or csv stem
};

struct ExperimentSpec {
    std::vector<DatasetSource> datasets;
    std::vector<NormalizationMethod> normalizations = {NormalizationMethod::RangeNorm};
    std::vector<Arm> arms = {Arm::KMeansPP, Arm::Imwk, Arm::RescaledKMeansPP, Arm::RescaledImwk};
    PGrid grid;
    int kmeanspp_runs = 25;        // paper protocol: 100
    int datasets_per_config = 10;  // paper protocol: 50
    std::uint64_t master_seed = 0;
    int workers = 0;  // 0 = hardware concurrency
    ImwkOptions imwk;

    void validate() const;
};

struct ResultRecord {
    std::string dataset_id;  // e.g. "1000x6-3+3NF#03" or a csv stem
    std::string normalization;
    std::string arm;
    int p1_milli = 0;  // 0 = not applicable
    int p2_milli = 0;
    int run_index = 0;
    bool ok = true;
    std::string error;
    double ari = 0.0;
    double criterion = 0.0;
    int iterations = 0;
    long long wall_time_ms = 0;  // kept out of the reproducible raw CSV
};

// Pure function of its inputs; no global RNG state anywhere in the bench.
std::uint64_t derive_seed(std::uint64_t master, const std::string& dataset_id,
                          const std::string& arm, int p1_milli, int p2_milli, int run_index);

// Runs every (dataset, normalization, arm, grid point, run) combination.
// Arm failures become failed records; the batch always completes. Records
// come back sorted by (dataset, normalization, arm, p1, p2, run).
std::vector<ResultRecord> run_experiment(const ExperimentSpec& spec);

struct GridResult {
    std::vector<int> p1_milli;
    std::vector<int> p2_milli;
    Matrix mean_ari;              // p1 rows, p2 columns
    Matrix runs;                  // successful runs per cell
    std::vector<std::vector<bool>> mask;  // true = not above the k-means++ baseline
    double baseline_mean = 0.0;
};

// Mean-ARI grid of the rescaled imwk arm for one dataset source, with the
// cells not exceeding the k-means++ baseline masked.
GridResult sweep_grid(const DatasetSource& dataset, NormalizationMethod normalization,
                      const ExperimentSpec& spec);

struct SummaryRow {
    std::string dataset;  // config name / csv stem (instances pooled)
    std::string normalization;
    std::string arm;
    int p1_milli = 0;
    int p2_milli = 0;
    double mean_ari = 0.0;
    double std_ari = 0.0;
    int runs = 0;
};

std::vector<SummaryRow> summarize(const std::vector<ResultRecord>& records);

// Best grid cell per (dataset, normalization, arm): argmax of mean ARI,
// ties to the smaller (p1, p2).
std::vector<SummaryRow> best_cells(const std::vector<SummaryRow>& rows);

// Writes raw_records.csv, summary.csv, best.csv, timings.csv and a text
// overview. Validates that the directory is writable before computing
// anything is the caller's job; this only writes.
void report(const std::vector<ResultRecord>& records, const std::string& out_dir);

void write_grid_csv(const GridResult& grid, const std::string& path_prefix);

}  // namespace mwk
