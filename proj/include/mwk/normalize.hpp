#pragma once

#include <string>

#include "mwk/core.hpp"

namespace mwk {

enum class NormalizationMethod { ZScore, RobustZScore, RangeNorm, MinMax, UnitLength, None };

// Parses the CLI spelling: zscore | robust | range | minmax | unit | none.
NormalizationMethod parse_normalization(const std::string& name);
std::string normalization_name(NormalizationMethod method);

// All five methods operate column-wise. A feature whose dispersion measure
// (sigma, MAD, range or norm) is zero is an error naming the column; the
// data loader drops constant columns up front.
DataMatrix zscore(const DataMatrix& X);
DataMatrix robust_zscore(const DataMatrix& X);
DataMatrix range_normalize(const DataMatrix& X);
DataMatrix min_max(const DataMatrix& X);
DataMatrix unit_length(const DataMatrix& X);

DataMatrix normalize(const DataMatrix& X, NormalizationMethod method);

}  // namespace mwk
