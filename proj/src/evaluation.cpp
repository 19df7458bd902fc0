#include "esr/evaluation.hpp"

#include <set>

#include "esr/error.hpp"

namespace esr {

namespace {

void require_inputs(std::span<const DiscreteDistribution> found,
                    std::span<const DiscreteDistribution> truth, double epsilon) {
  if (truth.empty()) throw std::invalid_argument("coverage needs a non-empty true ESR set");
  if (!(epsilon > 0.0)) throw std::invalid_argument("coverage epsilon must be positive");
  for (const auto& d : truth) {
    if (d.dimension() != truth.front().dimension()) {
      throw DimensionMismatchError("true ESR set mixes dimensions");
    }
  }
  for (const auto& d : found) {
    if (d.dimension() != truth.front().dimension()) {
      throw DimensionMismatchError("found and true distributions differ in dimension");
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> matches(
    std::span<const DiscreteDistribution> found, std::span<const DiscreteDistribution> truth,
    double epsilon) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t f = 0; f < found.size(); ++f) {
    for (std::size_t t = 0; t < truth.size(); ++t) {
      if (ks_distance(found[f], truth[t]) <= epsilon) pairs.emplace_back(f, t);
    }
  }
  return pairs;
}

}  // namespace

std::vector<std::size_t> coverage_intersection(std::span<const DiscreteDistribution> found,
                                               std::span<const DiscreteDistribution> truth,
                                               double epsilon) {
  require_inputs(found, truth, epsilon);
  std::set<std::size_t> matched;
  for (const auto& [f, t] : matches(found, truth, epsilon)) matched.insert(f);
  return {matched.begin(), matched.end()};
}

CoverageResult coverage_ratio(std::span<const DiscreteDistribution> found,
                              std::span<const DiscreteDistribution> truth, double epsilon) {
  require_inputs(found, truth, epsilon);
  CoverageResult result;
  result.matched_pairs = matches(found, truth, epsilon);
  std::set<std::size_t> matched_found;
  std::set<std::size_t> matched_truth;
  for (const auto& [f, t] : result.matched_pairs) {
    matched_found.insert(f);
    matched_truth.insert(t);
  }
  if (!found.empty()) {
    result.precision =
        static_cast<double>(matched_found.size()) / static_cast<double>(found.size());
  }
  result.recall = static_cast<double>(matched_truth.size()) / static_cast<double>(truth.size());
  const double denominator = result.precision + result.recall;
  result.f1 = denominator > 0.0 ? 2.0 * result.precision * result.recall / denominator : 0.0;
  return result;
}

}  // namespace esr
