#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mwk/core.hpp"

namespace mwk {

class CsvParseError : public std::runtime_error {
public:
    CsvParseError(std::size_t row, std::size_t col, const std::string& what);
    std::size_t row;  // 1-based, header is row 1
    std::size_t col;  // 1-based
};

struct CsvLoadOptions {
    std::optional<std::string> label_column;
    std::vector<std::string> categorical_columns;
    enum class MissingPolicy { DropRow, Error } missing = MissingPolicy::DropRow;
};

struct CsvLoadReport {
    std::vector<std::string> dropped_constant_columns;
    std::size_t dropped_missing_rows = 0;
};

// Comma-separated, header row required, UTF-8. Each categorical column
// with t categories becomes t one-hot indicator columns; constant numeric
// columns are dropped (recorded in the report); empty cells and "?" count
// as missing. Without a label column every entity gets label 1.
LabeledDataset load_csv(const std::string& path, const CsvLoadOptions& options = {},
                        CsvLoadReport* report = nullptr);

// Writes features plus a trailing `label` column; LF line endings, full
// double precision.
void save_csv(const std::string& path, const LabeledDataset& dataset);

}  // namespace mwk
