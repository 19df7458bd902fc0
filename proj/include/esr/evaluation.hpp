#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "esr/return_distribution.hpp"

namespace esr {

/// Coverage ratio of a found solution set against the true ESR set.
struct CoverageResult {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  /// Every (found index, truth index) pair within epsilon in KS distance.
  std::vector<std::pair<std::size_t, std::size_t>> matched_pairs;
};

/// Found indices whose distribution lies within `epsilon` (KS) of some truth
/// distribution, ascending.
std::vector<std::size_t> coverage_intersection(std::span<const DiscreteDistribution> found,
                                               std::span<const DiscreteDistribution> truth,
                                               double epsilon);

/// precision = |matched found| / |found|, recall = |distinct truth matched| / |truth|,
/// f1 = harmonic mean (0 when both are 0).
CoverageResult coverage_ratio(std::span<const DiscreteDistribution> found,
                              std::span<const DiscreteDistribution> truth, double epsilon);

}  // namespace esr
