#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "esr/lattice.hpp"

namespace esr {

class DiscreteDistribution;

/// Axis-aligned evaluation grid: one sorted coordinate list per objective.
using EvaluationAxes = std::vector<std::vector<double>>;

/// Per-objective union of the breakpoints of every distribution given.
/// Discrete CDFs are constant between consecutive breakpoints, so this grid
/// is where any two of them can differ.
EvaluationAxes cdf_evaluation_axes(std::span<const DiscreteDistribution* const> distributions);

/// cdf_evaluation_axes plus midpoints between neighbours and one point beyond
/// either end, which is what strict Pareto comparisons need.
EvaluationAxes survival_evaluation_axes(std::span<const DiscreteDistribution* const> distributions);

/// Calls `visit(point)` for every point of the product grid, objective 0
/// slowest. Stops early when `visit` returns false; returns false in that case.
template <typename Visitor>
bool for_each_grid_point(const EvaluationAxes& axes, Visitor&& visit) {
  const std::size_t dims = axes.size();
  for (const auto& axis : axes) {
    if (axis.empty()) return true;
  }
  std::vector<std::size_t> index(dims, 0);
  RewardVector point(dims);
  for (std::size_t d = 0; d < dims; ++d) point[d] = axes[d][0];
  while (true) {
    if (!visit(std::span<const double>(point))) return false;
    std::size_t d = dims;
    while (d > 0) {
      --d;
      if (++index[d] < axes[d].size()) {
        point[d] = axes[d][index[d]];
        break;
      }
      index[d] = 0;
      point[d] = axes[d][0];
      if (d == 0) return true;
    }
    if (dims == 0) return true;
  }
}

}  // namespace esr
