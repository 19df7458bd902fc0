#include "esr/lattice.hpp"

#include <cmath>
#include <sstream>

#include "esr/error.hpp"

namespace esr {

namespace {

constexpr double kSnapTolerance = 1e-9;

std::size_t integer_power(std::size_t base, std::size_t exponent) {
  std::size_t result = 1;
  for (std::size_t i = 0; i < exponent; ++i) result *= base;
  return result;
}

}  // namespace

ReturnLattice::ReturnLattice(double r_min, double r_max, double resolution, std::size_t objectives)
    : r_min_(r_min), r_max_(r_max), resolution_(resolution), objectives_(objectives) {
  if (!std::isfinite(r_min) || !std::isfinite(r_max) || !(r_min < r_max)) {
    throw std::invalid_argument("return lattice requires finite r_min < r_max");
  }
  if (!std::isfinite(resolution) || !(resolution > 0.0)) {
    throw std::invalid_argument("return lattice resolution must be positive");
  }
  if (objectives == 0) {
    throw std::invalid_argument("return lattice needs at least one objective");
  }
  points_per_axis_ =
      static_cast<std::size_t>(std::floor((r_max - r_min) / resolution + kSnapTolerance)) + 1;
  if (points_per_axis_ < 2) {
    throw std::invalid_argument("return lattice needs at least two points per axis");
  }
  cell_count_ = integer_power(points_per_axis_, objectives_);
}

double ReturnLattice::axis_value(std::size_t index) const {
  if (index >= points_per_axis_) throw OutOfRangeError("lattice axis index out of range");
  return r_min_ + static_cast<double>(index) * resolution_;
}

std::size_t ReturnLattice::axis_index(double value, std::size_t objective) const {
  const double scaled = (value - r_min_) / resolution_;
  const double nearest = std::round(scaled);
  const double upper = (r_max_ - r_min_) / resolution_;
  if (!std::isfinite(value) || scaled < -kSnapTolerance || scaled > upper + kSnapTolerance) {
    std::ostringstream msg;
    msg << "objective " << objective << ": value " << value << " outside [" << r_min_ << ", "
        << r_max_ << "]";
    throw OutOfRangeError(msg.str());
  }
  if (std::abs(scaled - nearest) > kSnapTolerance ||
      nearest > static_cast<double>(points_per_axis_ - 1)) {
    std::ostringstream msg;
    msg << "objective " << objective << ": value " << value
        << " is not on the lattice (step " << resolution_ << ")";
    throw QuantizationError(msg.str());
  }
  return static_cast<std::size_t>(nearest);
}

std::size_t ReturnLattice::flat_index(std::span<const double> point) const {
  require_dimension(point.size());
  std::size_t flat = 0;
  for (std::size_t d = 0; d < objectives_; ++d) {
    flat = flat * points_per_axis_ + axis_index(point[d], d);
  }
  return flat;
}

RewardVector ReturnLattice::point_at(std::size_t flat) const {
  if (flat >= cell_count_) throw OutOfRangeError("lattice cell index out of range");
  RewardVector point(objectives_);
  for (std::size_t d = objectives_; d > 0; --d) {
    point[d - 1] = axis_value(flat % points_per_axis_);
    flat /= points_per_axis_;
  }
  return point;
}

bool ReturnLattice::contains(std::span<const double> point) const noexcept {
  if (point.size() != objectives_) return false;
  try {
    for (std::size_t d = 0; d < objectives_; ++d) (void)axis_index(point[d], d);
  } catch (const Error&) {
    return false;
  }
  return true;
}

void ReturnLattice::require_dimension(std::size_t dimension) const {
  if (dimension != objectives_) {
    std::ostringstream msg;
    msg << "expected " << objectives_ << " objectives, got " << dimension;
    throw DimensionMismatchError(msg.str());
  }
}

}  // namespace esr
