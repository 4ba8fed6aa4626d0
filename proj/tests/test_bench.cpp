#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "mwk/bench.hpp"

using namespace mwk;
namespace fs = std::filesystem;

namespace {

ExperimentSpec tiny_spec() {
    ExperimentSpec spec;
    DatasetSource src;
    src.kind = DatasetSource::Kind::Synthetic;
    src.spec = "120x3-2+1NF";
    spec.datasets = {src};
    spec.normalizations = {NormalizationMethod::RangeNorm};
    spec.arms = {Arm::KMeansPP, Arm::Imwk, Arm::RescaledKMeansPP, Arm::RescaledImwk};
    spec.grid = {2000, 3000, 500};  // p in {2, 2.5, 3}
    spec.kmeanspp_runs = 3;
    spec.datasets_per_config = 2;
    spec.master_seed = 42;
    spec.workers = 2;
    return spec;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else
            cur.push_back(c);
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_CASE("seed derivation is a pure function of its inputs") {
    auto a = derive_seed(1, "cfg#00", "imwk", 1100, 0, 0);
    CHECK(a == derive_seed(1, "cfg#00", "imwk", 1100, 0, 0));
    CHECK(a != derive_seed(2, "cfg#00", "imwk", 1100, 0, 0));
    CHECK(a != derive_seed(1, "cfg#01", "imwk", 1100, 0, 0));
    CHECK(a != derive_seed(1, "cfg#00", "kmeans++", 1100, 0, 0));
    CHECK(a != derive_seed(1, "cfg#00", "imwk", 1200, 0, 0));
    CHECK(a != derive_seed(1, "cfg#00", "imwk", 1100, 1200, 0));
    CHECK(a != derive_seed(1, "cfg#00", "imwk", 1100, 0, 1));
}

TEST_CASE("the paper grid has 40 points") {
    PGrid grid;  // defaults: 1.1 to 5.0 step 0.1
    auto pts = grid.points();
    CHECK(pts.size() == 40);
    CHECK(pts.front() == 1100);
    CHECK(pts.back() == 5000);
    CHECK(p_to_string(1100) == "1.1");
    CHECK(p_to_string(5000) == "5");
}

TEST_CASE("experiment records are complete, sorted and reproducible") {
    auto spec = tiny_spec();
    auto records = run_experiment(spec);

    // every (arm, grid point, run) combination is present
    std::size_t expect =
        2 * (spec.kmeanspp_runs         // kmeans++
             + 3                        // imwk
             + 3 * spec.kmeanspp_runs   // rescaled kmeans++
             + 9);                      // rescaled imwk
    CHECK(records.size() == expect);
    for (std::size_t i = 1; i < records.size(); ++i) {
        auto key = [](const ResultRecord& r) {
            return std::make_tuple(r.dataset_id, r.normalization, r.arm, r.p1_milli, r.p2_milli,
                                   r.run_index);
        };
        CHECK(key(records[i - 1]) < key(records[i]));
    }

    auto again = run_experiment(spec);
    REQUIRE(again.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].dataset_id == again[i].dataset_id);
        CHECK(records[i].ok == again[i].ok);
        CHECK(records[i].ari == again[i].ari);          // bitwise
        CHECK(records[i].criterion == again[i].criterion);
    }

    // single-threaded execution gives the same records
    spec.workers = 1;
    auto serial = run_experiment(spec);
    REQUIRE(serial.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) CHECK(serial[i].ari == records[i].ari);
}

TEST_CASE("report output re-aggregates to the summary within 1e-12") {
    auto spec = tiny_spec();
    auto records = run_experiment(spec);
    auto dir = fs::temp_directory_path() / "mwk_report_test";
    fs::remove_all(dir);
    report(records, dir.string());

    // parse the raw records and re-aggregate
    std::ifstream raw(dir / "raw_records.csv");
    std::string line;
    std::getline(raw, line);  // header
    struct Acc {
        double sum = 0, sumsq = 0;
        int n = 0;
    };
    std::map<std::string, Acc> cells;
    while (std::getline(raw, line)) {
        auto f = split(line, ',');
        REQUIRE(f.size() == 11);
        if (f[9] != "ok") continue;
        std::string dataset = f[0].substr(0, f[0].find('#'));
        std::string key = dataset + "|" + f[1] + "|" + f[2] + "|" + f[3] + "|" + f[4];
        double ari = std::stod(f[6]);
        auto& acc = cells[key];
        acc.sum += ari;
        acc.sumsq += ari * ari;
        ++acc.n;
    }
    auto rows = summarize(records);
    for (const auto& row : rows) {
        std::string key = row.dataset + "|" + row.normalization + "|" + row.arm + "|" +
                          (row.p1_milli ? p_to_string(row.p1_milli) : "") + "|" +
                          (row.p2_milli ? p_to_string(row.p2_milli) : "");
        REQUIRE(cells.count(key) == 1);
        const auto& acc = cells.at(key);
        CHECK(acc.n == row.runs);
        if (acc.n > 0) {
            double mean = acc.sum / acc.n;
            double stdev = std::sqrt(std::max(0.0, acc.sumsq / acc.n - mean * mean));
            CHECK(std::abs(mean - row.mean_ari) < 1e-12);
            CHECK(std::abs(stdev - row.std_ari) < 1e-12);
        }
    }

    // two reports of the same records are byte-identical
    auto dir2 = fs::temp_directory_path() / "mwk_report_test2";
    fs::remove_all(dir2);
    report(records, dir2.string());
    CHECK(slurp(dir / "raw_records.csv") == slurp(dir2 / "raw_records.csv"));
    CHECK(slurp(dir / "summary.csv") == slurp(dir2 / "summary.csv"));
}

TEST_CASE("summaries mark empty cells rather than emitting NaN") {
    ResultRecord fail;
    fail.dataset_id = "x#00";
    fail.normalization = "range";
    fail.arm = "imwk";
    fail.p1_milli = 1100;
    fail.ok = false;
    fail.error = "too few anomalous clusters";
    auto rows = summarize({fail});
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].runs == 0);

    auto dir = fs::temp_directory_path() / "mwk_empty_cell";
    fs::remove_all(dir);
    report({fail}, dir.string());
    auto text = slurp(dir / "summary.csv");
    CHECK(text.find(",,,0") != std::string::npos);  // empty mean/std, zero runs
    CHECK(text.find("nan") == std::string::npos);
}

TEST_CASE("best cell selection breaks ties toward smaller exponents") {
    SummaryRow a{"d", "range", "rescaled-imwk", 2000, 3000, 0.9, 0.0, 5};
    SummaryRow b{"d", "range", "rescaled-imwk", 1500, 3500, 0.9, 0.0, 5};
    SummaryRow c{"d", "range", "rescaled-imwk", 1500, 3400, 0.9, 0.0, 5};
    SummaryRow lower{"d", "range", "rescaled-imwk", 1100, 1100, 0.5, 0.0, 5};
    auto best = best_cells({a, b, c, lower});
    REQUIRE(best.size() == 1);
    CHECK(best[0].p1_milli == 1500);
    CHECK(best[0].p2_milli == 3400);
}

TEST_CASE("sweep grid masks cells that do not beat the baseline") {
    ExperimentSpec spec;
    DatasetSource src;
    src.kind = DatasetSource::Kind::Synthetic;
    src.spec = "120x3-2";
    spec.datasets = {src};
    spec.grid = {2000, 2500, 500};
    spec.kmeanspp_runs = 4;
    spec.datasets_per_config = 2;
    spec.master_seed = 3;
    spec.workers = 2;
    auto grid = sweep_grid(src, NormalizationMethod::RangeNorm, spec);
    REQUIRE(grid.p1_milli.size() == 2);
    REQUIRE(grid.p2_milli.size() == 2);
    for (std::size_t r = 0; r < 2; ++r)
        for (std::size_t c = 0; c < 2; ++c) {
            if (grid.runs(r, c) == 0.0) {
                CHECK(grid.mask[r][c]);
            } else {
                CHECK(grid.mask[r][c] == (grid.mean_ari(r, c) <= grid.baseline_mean));
            }
        }

    auto dir = fs::temp_directory_path() / "mwk_grid_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    write_grid_csv(grid, (dir / "grid").string());
    CHECK(fs::exists(dir / "grid.csv"));
    CHECK(fs::exists(dir / "grid_mask.csv"));
    auto text = slurp(dir / "grid.csv");
    CHECK(text.find("p1\\p2,2,2.5") == 0);
}
