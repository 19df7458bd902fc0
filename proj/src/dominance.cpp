#include "esr/dominance.hpp"

#include <algorithm>
#include <sstream>

#include "esr/error.hpp"
#include "esr/grid.hpp"

namespace esr {

namespace {

// Tolerance used when Pareto-comparing mean vectors that went through
// floating-point accumulation.
constexpr double kMeanTolerance = 1e-9;

struct Sweep {
  bool first_never_worse = true;
  bool second_never_worse = true;
  bool first_strictly_better_somewhere = false;
  bool second_strictly_better_somewhere = false;

  DominanceVerdict verdict() const {
    if (first_never_worse && second_never_worse) return DominanceVerdict::identical;
    if (first_never_worse && first_strictly_better_somewhere) {
      return DominanceVerdict::first_dominates;
    }
    if (second_never_worse && second_strictly_better_somewhere) {
      return DominanceVerdict::second_dominates;
    }
    return DominanceVerdict::incomparable;
  }
};

void require_same_dimension(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  if (a.dimension() != b.dimension()) {
    std::ostringstream msg;
    msg << "cannot compare distributions over " << a.dimension() << " and " << b.dimension()
        << " objectives";
    throw DimensionMismatchError(msg.str());
  }
}

// `advantage` is positive where the first distribution is preferable at v.
template <typename Advantage>
Sweep sweep(const EvaluationAxes& axes, Advantage&& advantage) {
  Sweep result;
  for_each_grid_point(axes, [&](std::span<const double> v) {
    const double gap = advantage(v);
    if (gap > kProbabilityTolerance) {
      result.first_strictly_better_somewhere = true;
      result.second_never_worse = false;
    } else if (gap < -kProbabilityTolerance) {
      result.second_strictly_better_somewhere = true;
      result.first_never_worse = false;
    }
    return result.first_never_worse || result.second_never_worse;
  });
  return result;
}

Sweep cdf_sweep(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  require_same_dimension(a, b);
  const DiscreteDistribution* pair[] = {&a, &b};
  // Lower cumulative probability is better.
  return sweep(cdf_evaluation_axes(pair),
               [&](std::span<const double> v) { return b.cdf(v) - a.cdf(v); });
}

Sweep survival_sweep(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  require_same_dimension(a, b);
  const DiscreteDistribution* pair[] = {&a, &b};
  return sweep(survival_evaluation_axes(pair), [&](std::span<const double> v) {
    return a.pareto_survival(v) - b.pareto_survival(v);
  });
}

void require_uniform(std::span<const DiscreteDistribution> candidates) {
  if (candidates.empty()) throw std::invalid_argument("candidate list is empty");
  for (const auto& c : candidates) require_same_dimension(candidates.front(), c);
}

std::vector<std::size_t> survivors(const std::vector<bool>& dominated) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < dominated.size(); ++i) {
    if (!dominated[i]) kept.push_back(i);
  }
  return kept;
}

bool mean_dominates(std::span<const double> a, std::span<const double> b) {
  bool strict = false;
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (a[d] < b[d] - kMeanTolerance) return false;
    if (a[d] > b[d] + kMeanTolerance) strict = true;
  }
  return strict;
}

}  // namespace

std::string_view to_string(Criterion criterion) {
  return criterion == Criterion::cdf ? "cdf" : "pdf";
}

Criterion criterion_from_string(std::string_view name) {
  if (name == "cdf") return Criterion::cdf;
  if (name == "pdf") return Criterion::pdf;
  throw std::invalid_argument("unknown dominance criterion '" + std::string(name) +
                              "' (expected cdf or pdf)");
}

std::string_view to_string(DominanceVerdict verdict) {
  switch (verdict) {
    case DominanceVerdict::first_dominates: return "first_dominates";
    case DominanceVerdict::second_dominates: return "second_dominates";
    case DominanceVerdict::incomparable: return "incomparable";
    case DominanceVerdict::identical: return "identical";
  }
  return "unknown";
}

DominanceVerdict mirror(DominanceVerdict verdict) {
  switch (verdict) {
    case DominanceVerdict::first_dominates: return DominanceVerdict::second_dominates;
    case DominanceVerdict::second_dominates: return DominanceVerdict::first_dominates;
    default: return verdict;
  }
}

bool pareto_dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionMismatchError("Pareto comparison of unequal lengths");
  bool strict = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
    if (a[i] > b[i]) strict = true;
  }
  return strict;
}

bool fsd_dominates_scalar(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  if (a.dimension() != 1 || b.dimension() != 1) {
    throw DimensionMismatchError("scalar FSD needs one-dimensional distributions");
  }
  return fsd_dominates(a, b);
}

bool fsd_dominates(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return cdf_sweep(a, b).first_never_worse;
}

bool esr_dominates_cdf(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return cdf_sweep(a, b).verdict() == DominanceVerdict::first_dominates;
}

bool esr_dominates_pdf(const DiscreteDistribution& a, const DiscreteDistribution& b) {
  return survival_sweep(a, b).verdict() == DominanceVerdict::first_dominates;
}

bool esr_dominates(const DiscreteDistribution& a, const DiscreteDistribution& b,
                   Criterion criterion) {
  return compare(a, b, criterion) == DominanceVerdict::first_dominates;
}

DominanceVerdict compare(const DiscreteDistribution& a, const DiscreteDistribution& b,
                         Criterion criterion) {
  return (criterion == Criterion::cdf ? cdf_sweep(a, b) : survival_sweep(a, b)).verdict();
}

std::vector<std::size_t> esr_set(std::span<const DiscreteDistribution> candidates,
                                 Criterion criterion) {
  require_uniform(candidates);
  const std::size_t n = candidates.size();
  std::vector<bool> dominated(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dominated[i] && dominated[j]) continue;
      switch (compare(candidates[i], candidates[j], criterion)) {
        case DominanceVerdict::first_dominates: dominated[j] = true; break;
        case DominanceVerdict::second_dominates: dominated[i] = true; break;
        default: break;
      }
    }
  }
  return survivors(dominated);
}

std::vector<std::size_t> fsd_undominated_set(std::span<const DiscreteDistribution> candidates) {
  require_uniform(candidates);
  const std::size_t n = candidates.size();
  std::vector<bool> dominated(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n && !dominated[i]; ++j) {
      if (i == j) continue;
      // j sits strictly above i: j weakly dominates i and not the reverse.
      dominated[i] = fsd_dominates(candidates[j], candidates[i]) &&
                     !fsd_dominates(candidates[i], candidates[j]);
    }
  }
  return survivors(dominated);
}

std::vector<std::size_t> pareto_front_of_means(std::span<const RewardVector> means) {
  if (means.empty()) throw std::invalid_argument("candidate list is empty");
  std::vector<bool> dominated(means.size(), false);
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (means[i].size() != means.front().size()) {
      throw DimensionMismatchError("mean vectors of unequal length");
    }
    for (std::size_t j = 0; j < means.size() && !dominated[i]; ++j) {
      dominated[i] = j != i && mean_dominates(means[j], means[i]);
    }
  }
  return survivors(dominated);
}

std::vector<std::size_t> pareto_front_of_expectations(std::span<const ZTable> candidates) {
  std::vector<RewardVector> means;
  means.reserve(candidates.size());
  for (const auto& table : candidates) means.push_back(table.expectation());
  return pareto_front_of_means(means);
}

std::vector<std::size_t> pareto_front_of_expectations(
    std::span<const DiscreteDistribution> candidates) {
  std::vector<RewardVector> means;
  means.reserve(candidates.size());
  for (const auto& dist : candidates) means.push_back(dist.mean());
  return pareto_front_of_means(means);
}

double expected_utility(const DiscreteDistribution& distribution, const MonotoneUtility& utility) {
  double total = 0.0;
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    total += distribution.mass(i) * utility(distribution.support_point(i));
  }
  return total;
}

double utility_of_expectation(const DiscreteDistribution& distribution,
                              const MonotoneUtility& utility) {
  return utility(distribution.mean());
}

}  // namespace esr
