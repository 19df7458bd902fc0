#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace esr {

/// One return vector, one component per objective.
using RewardVector = std::vector<double>;

/// Regular grid of attainable returns: every objective ranges over
/// r_min, r_min + resolution, ..., r_max.
class ReturnLattice {
 public:
  ReturnLattice(double r_min, double r_max, double resolution, std::size_t objectives);

  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  double resolution() const noexcept { return resolution_; }
  std::size_t objectives() const noexcept { return objectives_; }
  std::size_t points_per_axis() const noexcept { return points_per_axis_; }
  /// points_per_axis ^ objectives
  std::size_t cell_count() const noexcept { return cell_count_; }

  /// Value of grid index `index` on any axis.
  double axis_value(std::size_t index) const;

  /// Grid index of `value` on `objective`'s axis. Throws OutOfRangeError when
  /// the value lies outside [r_min, r_max] and QuantizationError when it is
  /// not within 1e-9 steps of a grid point.
  std::size_t axis_index(double value, std::size_t objective) const;

  /// Row-major cell index; objective 0 varies slowest.
  std::size_t flat_index(std::span<const double> point) const;
  RewardVector point_at(std::size_t flat_index) const;

  /// True when `point` has the right dimension and snaps onto the grid.
  bool contains(std::span<const double> point) const noexcept;

  void require_dimension(std::size_t dimension) const;

  bool operator==(const ReturnLattice&) const = default;

 private:
  double r_min_;
  double r_max_;
  double resolution_;
  std::size_t objectives_;
  std::size_t points_per_axis_;
  std::size_t cell_count_;
};

}  // namespace esr
