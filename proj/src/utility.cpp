#include "esr/utility.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "esr/error.hpp"

namespace esr {

namespace {

constexpr double kDomainSlack = 1e-12;

void require_positive(const std::vector<double>& values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v) || !(v > 0.0)) {
      throw std::invalid_argument(std::string("utility ") + what + " must be positive");
    }
  }
}

}  // namespace

MonotoneUtility::MonotoneUtility(Family family, std::vector<double> weights,
                                 std::vector<double> powers, RewardVector origin)
    : family_(family),
      weights_(std::move(weights)),
      powers_(std::move(powers)),
      origin_(std::move(origin)) {
  if (powers_.empty()) throw std::invalid_argument("utility needs at least one objective");
  if (origin_.empty()) origin_.assign(powers_.size(), 0.0);
  if (weights_.size() != powers_.size() || origin_.size() != powers_.size()) {
    throw DimensionMismatchError("utility weights, powers and origin must have equal length");
  }
  require_positive(weights_, "weights");
  require_positive(powers_, "powers");
}

MonotoneUtility MonotoneUtility::separable(std::vector<double> weights, std::vector<double> powers,
                                           RewardVector origin) {
  return MonotoneUtility(Family::separable, std::move(weights), std::move(powers),
                         std::move(origin));
}

MonotoneUtility MonotoneUtility::linear(std::vector<double> weights) {
  std::vector<double> powers(weights.size(), 1.0);
  return separable(std::move(weights), std::move(powers));
}

MonotoneUtility MonotoneUtility::product(std::vector<double> powers, RewardVector origin) {
  std::vector<double> weights(powers.size(), 1.0);
  return MonotoneUtility(Family::product, std::move(weights), std::move(powers),
                         std::move(origin));
}

bool MonotoneUtility::is_linear() const noexcept {
  if (family_ != Family::separable) return false;
  for (double p : powers_) {
    if (p != 1.0) return false;
  }
  return true;
}

double MonotoneUtility::operator()(std::span<const double> x) const {
  if (x.size() != dimension()) {
    throw DimensionMismatchError("utility evaluated on a vector of the wrong dimension");
  }
  double value = family_ == Family::separable ? 0.0 : 1.0;
  for (std::size_t d = 0; d < x.size(); ++d) {
    double offset = x[d] - origin_[d];
    if (offset < 0.0) {
      // Linear terms stay monotone below the origin; powers do not.
      if (!(family_ == Family::separable && powers_[d] == 1.0) && offset < -kDomainSlack) {
        std::ostringstream msg;
        msg << "utility evaluated below its origin on objective " << d;
        throw OutOfRangeError(msg.str());
      }
      if (powers_[d] != 1.0) offset = 0.0;
    }
    if (family_ == Family::separable) {
      value += weights_[d] * (powers_[d] == 1.0 ? offset : std::pow(offset, powers_[d]));
    } else {
      value *= std::pow(offset + 1.0, powers_[d]);
    }
  }
  return value;
}

std::string MonotoneUtility::describe() const {
  std::ostringstream out;
  if (family_ == Family::separable) {
    out << "sum";
    for (std::size_t d = 0; d < dimension(); ++d) {
      out << (d ? " + " : " ") << weights_[d] << "*(x" << d << "-" << origin_[d] << ")^"
          << powers_[d];
    }
  } else {
    out << "prod";
    for (std::size_t d = 0; d < dimension(); ++d) {
      out << (d ? " * " : " ") << "(x" << d << "-" << origin_[d] << "+1)^" << powers_[d];
    }
  }
  return out.str();
}

bool spot_check_monotone(const MonotoneUtility& utility, const ReturnLattice& domain,
                         std::size_t pairs, std::uint64_t seed) {
  domain.require_dimension(utility.dimension());
  std::mt19937_64 engine(seed);
  std::uniform_int_distribution<std::size_t> axis(0, domain.points_per_axis() - 1);
  const std::size_t dims = domain.objectives();
  RewardVector low(dims);
  RewardVector high(dims);
  for (std::size_t k = 0; k < pairs; ++k) {
    bool strict = false;
    for (std::size_t d = 0; d < dims; ++d) {
      std::size_t i = axis(engine);
      std::size_t j = axis(engine);
      if (i > j) std::swap(i, j);
      low[d] = domain.axis_value(i);
      high[d] = domain.axis_value(j);
      strict = strict || j > i;
    }
    if (!strict) {
      // Force a strict improvement on a random objective.
      const std::size_t d = std::uniform_int_distribution<std::size_t>(0, dims - 1)(engine);
      const std::size_t i = domain.axis_index(low[d], d);
      if (i + 1 < domain.points_per_axis()) {
        high[d] = domain.axis_value(i + 1);
      } else {
        low[d] = domain.axis_value(i - 1);
      }
    }
    if (!(utility(high) > utility(low))) return false;
  }
  return true;
}

std::vector<MonotoneUtility> sample_monotone_utilities(std::size_t count, std::uint64_t seed,
                                                       bool require_cross_partial_nonpositive,
                                                       const ReturnLattice& domain) {
  if (count == 0) throw std::invalid_argument("utility count must be positive");
  const std::size_t dims = domain.objectives();
  const RewardVector origin(dims, domain.r_min());
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> weight(0.1, 2.0);
  // Powers drawn from (0.05, 1] or (0.05, 2] keep the check numerically clear.
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw_power = [&](double upper) { return 0.05 + (upper - 0.05) * (1.0 - unit(engine)); };

  std::vector<MonotoneUtility> utilities;
  utilities.reserve(count);
  utilities.push_back(MonotoneUtility::separable(std::vector<double>(dims, 1.0),
                                                 std::vector<double>(dims, 1.0), origin));
  while (utilities.size() < count) {
    const bool product = !require_cross_partial_nonpositive && utilities.size() % 2 == 0;
    std::vector<double> powers(dims);
    std::vector<double> weights(dims);
    for (std::size_t d = 0; d < dims; ++d) {
      weights[d] = weight(engine);
      powers[d] = draw_power(require_cross_partial_nonpositive ? 1.0 : 2.0);
    }
    auto candidate = product ? MonotoneUtility::product(std::move(powers), origin)
                             : MonotoneUtility::separable(std::move(weights), std::move(powers),
                                                          origin);
    if (spot_check_monotone(candidate, domain, 1000, seed + utilities.size())) {
      utilities.push_back(std::move(candidate));
    }
  }
  return utilities;
}

}  // namespace esr
