#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esr/lattice.hpp"

namespace esr {

/// Strictly increasing utility u: R^D -> R.
///
///   separable: u(x) = sum_d w_d * (x_d - o_d)^p_d     (zero cross partials)
///   product:   u(x) = prod_d (x_d - o_d + 1)^p_d      (positive cross partials)
///
/// `o` is an origin at or below every point the utility is evaluated on.
/// Non-integer powers are only defined on x_d >= o_d; evaluating below the
/// origin throws OutOfRangeError.
class MonotoneUtility {
 public:
  enum class Family { separable, product };

  static MonotoneUtility separable(std::vector<double> weights, std::vector<double> powers,
                                   RewardVector origin = {});
  static MonotoneUtility linear(std::vector<double> weights);
  static MonotoneUtility product(std::vector<double> powers, RewardVector origin = {});

  double operator()(std::span<const double> x) const;

  Family family() const noexcept { return family_; }
  std::size_t dimension() const noexcept { return powers_.size(); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const std::vector<double>& powers() const noexcept { return powers_; }
  const RewardVector& origin() const noexcept { return origin_; }

  /// True for the separable family.
  bool cross_partial_nonpositive() const noexcept { return family_ == Family::separable; }
  /// Separable with every power equal to 1 (affine in x).
  bool is_linear() const noexcept;

  std::string describe() const;

  bool operator==(const MonotoneUtility&) const = default;

 private:
  MonotoneUtility(Family family, std::vector<double> weights, std::vector<double> powers,
                  RewardVector origin);

  Family family_;
  std::vector<double> weights_;
  std::vector<double> powers_;
  RewardVector origin_;
};

/// Draws `pairs` random lattice pairs a >= b (strict somewhere) and checks
/// u(a) > u(b) for each.
bool spot_check_monotone(const MonotoneUtility& utility, const ReturnLattice& domain,
                         std::size_t pairs, std::uint64_t seed);

/// Deterministic family of utilities over `domain` (origin = r_min on every
/// axis). The first member is always the unit-weight linear utility. With
/// `require_cross_partial_nonpositive` every member is separable with powers in
/// (0, 1]; otherwise separable and product members alternate and separable
/// powers range over (0, 2]. Each member passes spot_check_monotone with 1000
/// pairs.
std::vector<MonotoneUtility> sample_monotone_utilities(std::size_t count, std::uint64_t seed,
                                                       bool require_cross_partial_nonpositive,
                                                       const ReturnLattice& domain);

}  // namespace esr
