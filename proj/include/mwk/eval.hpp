#pragma once

#include <vector>

#include "mwk/core.hpp"

namespace mwk {

struct ContingencyTable {
    Matrix counts;          // k x r co-assignment counts
    std::vector<long> a;    // row sums
    std::vector<long> b;    // column sums
    long n = 0;
};

// Cross-tabulates two label vectors; classes ordered by first appearance.
ContingencyTable contingency(const std::vector<int>& S, const std::vector<int>& U);

// Adjusted Rand Index. 1 for identical partitions (up to renaming),
// around 0 for independent ones. When the chance-correction denominator is
// zero (e.g. both partitions single-class), returns 1 if the partitions
// are identical and 0 otherwise.
double adjusted_rand_index(const std::vector<int>& S, const std::vector<int>& U);

}  // namespace mwk
