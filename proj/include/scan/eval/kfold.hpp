#pragma once

#include <cstdint>
#include <vector>

namespace scan {

/// Stratified k-fold split: returns k disjoint, exhaustive index sets whose
/// per-class counts differ by at most one. Deterministic per seed. Throws
/// DataError when any class has fewer samples than k.
std::vector<std::vector<int>> kfold_split(const std::vector<int>& labels, int k,
                                          std::uint64_t seed);

} // namespace scan
