#include "mwk/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mwk {

CsvParseError::CsvParseError(std::size_t row_, std::size_t col_, const std::string& what)
    : std::runtime_error("csv row " + std::to_string(row_) + " col " + std::to_string(col_) +
                         ": " + what),
      row(row_),
      col(col_) {}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    cells.push_back(cur);
    return cells;
}

bool is_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

double parse_number(const std::string& cell, std::size_t row, std::size_t col) {
    try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (used != cell.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw CsvParseError(row, col, "non-numeric value '" + cell + "' in numeric column");
    }
}

}  // namespace

LabeledDataset load_csv(const std::string& path, const CsvLoadOptions& options,
                        CsvLoadReport* report) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw CsvParseError(1, 1, "missing header row");
    const std::vector<std::string> header = split_line(line);
    const std::size_t width = header.size();

    std::optional<std::size_t> label_idx;
    if (options.label_column) {
        auto it = std::find(header.begin(), header.end(), *options.label_column);
        if (it == header.end())
            throw std::runtime_error("label column '" + *options.label_column + "' not in " +
                                     path);
        label_idx = static_cast<std::size_t>(it - header.begin());
    }
    std::vector<bool> is_categorical(width, false);
    for (const auto& name : options.categorical_columns) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw std::runtime_error("categorical column '" + name + "' not in " + path);
        is_categorical[static_cast<std::size_t>(it - header.begin())] = true;
    }

    std::vector<std::vector<std::string>> rows;
    CsvLoadReport local;
    CsvLoadReport& rep = report ? *report : local;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (cells.size() != width)
            throw CsvParseError(lineno, cells.size(),
                                "expected " + std::to_string(width) + " cells, got " +
                                    std::to_string(cells.size()));
        bool missing = false;
        for (std::size_t c = 0; c < width && !missing; ++c) {
            if (is_missing(cells[c])) {
                if (options.missing == CsvLoadOptions::MissingPolicy::Error)
                    throw CsvParseError(lineno, c + 1, "missing value");
                missing = true;
            }
        }
        if (missing) {
            ++rep.dropped_missing_rows;
            continue;
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw std::runtime_error(path + ": no data rows");

    // labels: distinct values in first-appearance order -> 1..r
    std::vector<int> labels(rows.size(), 1);
    if (label_idx) {
        std::unordered_map<std::string, int> ids;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto [it, inserted] = ids.try_emplace(rows[i][*label_idx], static_cast<int>(ids.size()) + 1);
            labels[i] = it->second;
        }
    }

    std::vector<std::vector<double>> columns;
    std::vector<std::string> names;
    for (std::size_t c = 0; c < width; ++c) {
        if (label_idx && c == *label_idx) continue;
        if (is_categorical[c]) {
            std::vector<std::string> order;
            std::unordered_map<std::string, std::size_t> ids;
            for (const auto& row : rows) {
                if (ids.try_emplace(row[c], ids.size()).second) order.push_back(row[c]);
            }
            if (order.size() < 2)
                throw std::runtime_error("categorical column '" + header[c] +
                                         "' has fewer than 2 categories");
            std::size_t base = columns.size();
            for (const auto& cat : order) {
                columns.emplace_back(rows.size(), 0.0);
                names.push_back(header[c] + "=" + cat);
            }
            for (std::size_t i = 0; i < rows.size(); ++i)
                columns[base + ids[rows[i][c]]][i] = 1.0;
        } else {
            std::vector<double> col(rows.size());
            for (std::size_t i = 0; i < rows.size(); ++i)
                col[i] = parse_number(rows[i][c], i + 2, c + 1);
            bool constant = std::all_of(col.begin(), col.end(),
                                        [&](double v) { return v == col[0]; });
            if (constant) {
                rep.dropped_constant_columns.push_back(header[c]);
                continue;
            }
            columns.push_back(std::move(col));
            names.push_back(header[c]);
        }
    }
    if (columns.empty()) throw std::runtime_error(path + ": no usable feature columns");

    Matrix values(rows.size(), columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c)
        for (std::size_t i = 0; i < rows.size(); ++i) values(i, c) = columns[c][i];
    return LabeledDataset(DataMatrix(std::move(values), std::move(names)), std::move(labels));
}

void save_csv(const std::string& path, const LabeledDataset& dataset) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out) throw std::runtime_error("cannot write " + path);
    const auto& X = dataset.data();
    for (std::size_t v = 0; v < X.m(); ++v) {
        if (!X.feature_names().empty())
            out << X.feature_names()[v];
        else
            out << "f" << (v + 1);
        out << ',';
    }
    out << "label\n";
    char buf[40];
    for (std::size_t i = 0; i < X.n(); ++i) {
        for (std::size_t v = 0; v < X.m(); ++v) {
            std::snprintf(buf, sizeof buf, "%.17g", X.values()(i, v));
            out << buf << ',';
        }
        out << dataset.labels()[i] << '\n';
    }
}

}  // namespace mwk
