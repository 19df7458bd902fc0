#include "esr/return_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "esr/error.hpp"
#include "esr/grid.hpp"

namespace esr {

namespace {

// Coordinates are compared with slack so that a shifted support point and the
// same point reached through v - bonus agree.
constexpr double kCoordTolerance = 1e-9;
constexpr double kMassSumTolerance = 1e-9;

bool all_at_most(std::span<const double> x, std::span<const double> shift,
                 std::span<const double> v) {
  for (std::size_t d = 0; d < x.size(); ++d) {
    if (x[d] + shift[d] > v[d] + kCoordTolerance) return false;
  }
  return true;
}

std::vector<double> sorted_unique(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteDistribution

DiscreteDistribution::DiscreteDistribution(ReturnLattice lattice, std::vector<Atom> atoms,
                                           RewardVector shift)
    : lattice_(std::move(lattice)) {
  const std::size_t dims = lattice_.objectives();
  if (shift.empty()) shift.assign(dims, 0.0);
  lattice_.require_dimension(shift.size());
  for (double s : shift) {
    if (!std::isfinite(s)) throw std::invalid_argument("distribution shift must be finite");
  }
  shift_ = std::move(shift);

  std::map<std::size_t, double> merged;
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.mass >= 0.0 && atom.mass <= 1.0)) {
      throw std::invalid_argument("probability mass outside [0, 1]");
    }
    merged[lattice_.flat_index(atom.point)] += atom.mass;
    total += atom.mass;
  }
  if (merged.empty()) throw EmptyDistributionError("distribution has no atoms");
  if (std::abs(total - 1.0) > kMassSumTolerance) {
    std::ostringstream msg;
    msg << "probability masses sum to " << total << ", expected 1";
    throw std::invalid_argument(msg.str());
  }
  for (const auto& [flat, mass] : merged) {
    if (mass <= 0.0) continue;
    const RewardVector point = lattice_.point_at(flat);
    coords_.insert(coords_.end(), point.begin(), point.end());
    masses_.push_back(mass);
  }
  if (masses_.empty()) throw EmptyDistributionError("distribution has no positive mass");
}

DiscreteDistribution::DiscreteDistribution(ReturnLattice lattice, std::vector<double> coords,
                                           std::vector<double> masses, RewardVector shift)
    : lattice_(std::move(lattice)),
      coords_(std::move(coords)),
      masses_(std::move(masses)),
      shift_(std::move(shift)) {}

DiscreteDistribution DiscreteDistribution::point_mass(ReturnLattice lattice, RewardVector point) {
  return DiscreteDistribution(std::move(lattice), {Atom{std::move(point), 1.0}});
}

std::span<const double> DiscreteDistribution::lattice_point(std::size_t i) const {
  if (i >= size()) throw OutOfRangeError("atom index out of range");
  return std::span<const double>(coords_).subspan(i * dimension(), dimension());
}

RewardVector DiscreteDistribution::support_point(std::size_t i) const {
  const auto raw = lattice_point(i);
  RewardVector point(raw.begin(), raw.end());
  for (std::size_t d = 0; d < point.size(); ++d) point[d] += shift_[d];
  return point;
}

bool DiscreteDistribution::is_shifted() const noexcept {
  return std::any_of(shift_.begin(), shift_.end(), [](double s) { return s != 0.0; });
}

double DiscreteDistribution::pmf(std::span<const double> point) const {
  lattice_.require_dimension(point.size());
  const std::size_t dims = dimension();
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    bool match = true;
    for (std::size_t d = 0; d < dims && match; ++d) {
      match = std::abs(coords_[i * dims + d] + shift_[d] - point[d]) <= kCoordTolerance;
    }
    if (match) total += masses_[i];
  }
  return total;
}

double DiscreteDistribution::cdf(std::span<const double> point) const {
  lattice_.require_dimension(point.size());
  const std::size_t dims = dimension();
  const std::span<const double> coords(coords_);
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (all_at_most(coords.subspan(i * dims, dims), shift_, point)) total += masses_[i];
  }
  return std::min(total, 1.0);
}

double DiscreteDistribution::pareto_survival(std::span<const double> point) const {
  lattice_.require_dimension(point.size());
  const std::size_t dims = dimension();
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    bool weakly_above = true;
    bool strictly_somewhere = false;
    for (std::size_t d = 0; d < dims && weakly_above; ++d) {
      const double x = coords_[i * dims + d] + shift_[d];
      weakly_above = x >= point[d] - kCoordTolerance;
      strictly_somewhere = strictly_somewhere || x > point[d] + kCoordTolerance;
    }
    if (weakly_above && strictly_somewhere) total += masses_[i];
  }
  return std::min(total, 1.0);
}

RewardVector DiscreteDistribution::mean() const {
  const std::size_t dims = dimension();
  RewardVector result(dims, 0.0);
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t d = 0; d < dims; ++d) result[d] += masses_[i] * coords_[i * dims + d];
  }
  for (std::size_t d = 0; d < dims; ++d) result[d] += shift_[d];
  return result;
}

DiscreteDistribution DiscreteDistribution::shifted(double bonus) const {
  if (!std::isfinite(bonus)) throw std::invalid_argument("shift must be finite");
  RewardVector shift = shift_;
  for (double& s : shift) s += bonus;
  return DiscreteDistribution(lattice_, coords_, masses_, std::move(shift));
}

std::vector<double> DiscreteDistribution::axis_breakpoints(std::size_t objective) const {
  if (objective >= dimension()) throw OutOfRangeError("objective index out of range");
  std::vector<double> values;
  values.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    values.push_back(coords_[i * dimension() + objective] + shift_[objective]);
  }
  return sorted_unique(std::move(values));
}

// ---------------------------------------------------------------------------
// Evaluation grids

EvaluationAxes cdf_evaluation_axes(std::span<const DiscreteDistribution* const> distributions) {
  if (distributions.empty()) return {};
  const std::size_t dims = distributions.front()->dimension();
  EvaluationAxes axes(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    std::vector<double> values;
    for (const auto* dist : distributions) {
      dist->lattice().require_dimension(dims);
      auto points = dist->axis_breakpoints(d);
      values.insert(values.end(), points.begin(), points.end());
    }
    axes[d] = sorted_unique(std::move(values));
  }
  return axes;
}

EvaluationAxes survival_evaluation_axes(
    std::span<const DiscreteDistribution* const> distributions) {
  EvaluationAxes axes = cdf_evaluation_axes(distributions);
  for (auto& axis : axes) {
    if (axis.empty()) continue;
    std::vector<double> extended;
    extended.reserve(axis.size() * 2 + 1);
    extended.push_back(axis.front() - 1.0);
    for (std::size_t k = 0; k < axis.size(); ++k) {
      extended.push_back(axis[k]);
      extended.push_back(k + 1 < axis.size() ? 0.5 * (axis[k] + axis[k + 1]) : axis[k] + 1.0);
    }
    axis = std::move(extended);
  }
  return axes;
}

// ---------------------------------------------------------------------------
// ZTable

ZTable::ZTable(ReturnLattice lattice)
    : lattice_(std::move(lattice)), counts_(lattice_.cell_count(), 0) {}

void ZTable::update(std::span<const double> reward) { add(reward, 1); }

void ZTable::add(std::span<const double> reward, std::uint64_t times) {
  const std::size_t flat = lattice_.flat_index(reward);
  if (times == 0) return;
  if (counts_[flat] == 0) {
    occupied_.insert(std::lower_bound(occupied_.begin(), occupied_.end(), flat), flat);
  }
  counts_[flat] += times;
  pulls_ += times;
}

std::uint64_t ZTable::count(std::span<const double> point) const {
  return counts_[lattice_.flat_index(point)];
}

void ZTable::require_nonempty() const {
  if (pulls_ == 0) throw EmptyDistributionError("Z-table has no observations");
}

double ZTable::pdf(std::span<const double> point) const {
  require_nonempty();
  return static_cast<double>(count(point)) / static_cast<double>(pulls_);
}

double ZTable::cdf(std::span<const double> point) const {
  require_nonempty();
  lattice_.require_dimension(point.size());
  const RewardVector zero(lattice_.objectives(), 0.0);
  std::uint64_t below = 0;
  for (std::size_t flat : occupied_) {
    if (all_at_most(lattice_.point_at(flat), zero, point)) below += counts_[flat];
  }
  return static_cast<double>(below) / static_cast<double>(pulls_);
}

RewardVector ZTable::expectation() const {
  require_nonempty();
  RewardVector sum(lattice_.objectives(), 0.0);
  for (std::size_t flat : occupied_) {
    const RewardVector point = lattice_.point_at(flat);
    for (std::size_t d = 0; d < sum.size(); ++d) {
      sum[d] += static_cast<double>(counts_[flat]) * point[d];
    }
  }
  for (double& s : sum) s /= static_cast<double>(pulls_);
  return sum;
}

DiscreteDistribution ZTable::distribution() const {
  require_nonempty();
  std::vector<double> coords;
  std::vector<double> masses;
  coords.reserve(occupied_.size() * lattice_.objectives());
  masses.reserve(occupied_.size());
  const double n = static_cast<double>(pulls_);
  for (std::size_t flat : occupied_) {
    const RewardVector point = lattice_.point_at(flat);
    coords.insert(coords.end(), point.begin(), point.end());
    masses.push_back(static_cast<double>(counts_[flat]) / n);
  }
  return DiscreteDistribution(lattice_, std::move(coords), std::move(masses),
                              RewardVector(lattice_.objectives(), 0.0));
}

DiscreteDistribution ZTable::shifted_view(double bonus) const {
  if (!(bonus >= 0.0)) throw std::invalid_argument("UCB bonus must be non-negative");
  return distribution().shifted(bonus);
}

ZTable update_ztable(ZTable table, std::span<const double> reward) {
  table.update(reward);
  return table;
}

// ---------------------------------------------------------------------------
// Free functions

double ks_distance(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionMismatchError("KS distance between distributions of different dimension");
  }
  const DiscreteDistribution* pair[] = {&a, &b};
  double largest = 0.0;
  for_each_grid_point(cdf_evaluation_axes(pair), [&](std::span<const double> v) {
    largest = std::max(largest, std::abs(a.cdf(v) - b.cdf(v)));
    return true;
  });
  return largest;
}

RewardVector expectation(const DiscreteDistribution& distribution) { return distribution.mean(); }

nlohmann::json lattice_to_json(const ReturnLattice& lattice) {
  return {{"r_min", lattice.r_min()},
          {"r_max", lattice.r_max()},
          {"resolution", lattice.resolution()},
          {"objectives", lattice.objectives()}};
}

ReturnLattice lattice_from_json(const nlohmann::json& document) {
  return ReturnLattice(document.at("r_min").get<double>(), document.at("r_max").get<double>(),
                       document.value("resolution", 1.0),
                       document.at("objectives").get<std::size_t>());
}

nlohmann::json ztable_to_json(const ZTable& table) {
  nlohmann::json cells = nlohmann::json::array();
  for (std::size_t flat : table.occupied_cells()) {
    cells.push_back({{"point", table.lattice().point_at(flat)}, {"count", table.counts()[flat]}});
  }
  return {{"lattice", lattice_to_json(table.lattice())},
          {"pulls", table.pulls()},
          {"cells", std::move(cells)}};
}

ZTable ztable_from_json(const nlohmann::json& document) {
  ZTable table(lattice_from_json(document.at("lattice")));
  std::uint64_t total = 0;
  for (const auto& cell : document.at("cells")) {
    const auto count = cell.at("count").get<std::uint64_t>();
    table.add(cell.at("point").get<RewardVector>(), count);
    total += count;
  }
  if (total != document.at("pulls").get<std::uint64_t>()) {
    throw Error("Z-table document: cell counts do not sum to pulls");
  }
  return table;
}

nlohmann::json distribution_to_json(const DiscreteDistribution& distribution) {
  nlohmann::json atoms = nlohmann::json::array();
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    atoms.push_back({{"point", distribution.support_point(i)}, {"mass", distribution.mass(i)}});
  }
  return {{"shift", distribution.shift()}, {"atoms", std::move(atoms)}};
}

}  // namespace esr
