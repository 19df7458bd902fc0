#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "esr/lattice.hpp"

namespace esr {

/// Probability mass placed at one lattice point.
struct Atom {
  RewardVector point;
  double mass = 0.0;
};

/// Finite distribution over lattice points, optionally translated by a
/// real-valued shift. The shift is kept as metadata and applied whenever the
/// distribution is evaluated, so non-lattice UCB bonuses never have to be
/// re-binned onto the grid.
///
/// Atoms are stored sparsely in ascending lattice order; points with zero
/// mass are dropped.
class DiscreteDistribution {
 public:
  /// Validates that every point is on `lattice`, that masses lie in [0, 1] and
  /// that they sum to 1 within 1e-9. Repeated points are merged.
  DiscreteDistribution(ReturnLattice lattice, std::vector<Atom> atoms, RewardVector shift = {});

  /// Degenerate distribution at `point`.
  static DiscreteDistribution point_mass(ReturnLattice lattice, RewardVector point);

  const ReturnLattice& lattice() const noexcept { return lattice_; }
  std::size_t dimension() const noexcept { return lattice_.objectives(); }
  std::size_t size() const noexcept { return masses_.size(); }

  /// Unshifted lattice point of atom `i`.
  std::span<const double> lattice_point(std::size_t i) const;
  /// Atom `i` with the shift applied.
  RewardVector support_point(std::size_t i) const;
  double mass(std::size_t i) const { return masses_.at(i); }
  std::span<const double> masses() const noexcept { return masses_; }
  const RewardVector& shift() const noexcept { return shift_; }
  bool is_shifted() const noexcept;

  /// Probability of exactly `point` (after shifting).
  double pmf(std::span<const double> point) const;
  /// Joint lower-orthant probability P(X <= point componentwise).
  double cdf(std::span<const double> point) const;
  /// P(X Pareto-dominates point).
  double pareto_survival(std::span<const double> point) const;
  /// Componentwise mean of the (shifted) support.
  RewardVector mean() const;

  /// Same masses, support translated by +bonus on every objective.
  DiscreteDistribution shifted(double bonus) const;

  /// Sorted distinct support coordinates (shift applied) on `objective`.
  std::vector<double> axis_breakpoints(std::size_t objective) const;

 private:
  DiscreteDistribution(ReturnLattice lattice, std::vector<double> coords,
                       std::vector<double> masses, RewardVector shift);

  friend class ZTable;

  ReturnLattice lattice_;
  std::vector<double> coords_;  // size() * dimension(), unshifted
  std::vector<double> masses_;
  RewardVector shift_;          // dimension() entries
};

/// Per-arm count grid over the return lattice together with the pull counter.
/// The empirical PDF is counts / pulls.
class ZTable {
 public:
  explicit ZTable(ReturnLattice lattice);

  /// Records one observed return. Throws OutOfRangeError (naming the objective)
  /// or QuantizationError; the table is unchanged on error.
  void update(std::span<const double> reward);
  /// Records the same return `times` times.
  void add(std::span<const double> reward, std::uint64_t times);

  const ReturnLattice& lattice() const noexcept { return lattice_; }
  std::uint64_t pulls() const noexcept { return pulls_; }
  std::uint64_t count(std::span<const double> point) const;
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  /// Flat indices of nonzero cells, ascending.
  const std::vector<std::size_t>& occupied_cells() const noexcept { return occupied_; }

  double pdf(std::span<const double> point) const;
  double cdf(std::span<const double> point) const;
  RewardVector expectation() const;

  /// Empirical distribution (pulls > 0).
  DiscreteDistribution distribution() const;
  /// Empirical distribution translated by +bonus in every objective.
  DiscreteDistribution shifted_view(double bonus) const;

  bool operator==(const ZTable&) const = default;

 private:
  void require_nonempty() const;

  ReturnLattice lattice_;
  std::vector<std::uint64_t> counts_;
  std::vector<std::size_t> occupied_;
  std::uint64_t pulls_ = 0;
};

/// Functional form of ZTable::update.
ZTable update_ztable(ZTable table, std::span<const double> reward);

/// Largest absolute CDF difference over the joint grid of both supports'
/// breakpoints. Exact for discrete distributions.
double ks_distance(const DiscreteDistribution& a, const DiscreteDistribution& b);

RewardVector expectation(const DiscreteDistribution& distribution);

nlohmann::json lattice_to_json(const ReturnLattice& lattice);
ReturnLattice lattice_from_json(const nlohmann::json& document);

/// {"lattice": {...}, "pulls": n, "cells": [{"point": [...], "count": k}, ...]}
nlohmann::json ztable_to_json(const ZTable& table);
ZTable ztable_from_json(const nlohmann::json& document);

nlohmann::json distribution_to_json(const DiscreteDistribution& distribution);

}  // namespace esr
