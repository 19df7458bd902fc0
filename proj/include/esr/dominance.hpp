#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "esr/return_distribution.hpp"
#include "esr/utility.hpp"

namespace esr {

/// Probabilities closer than this are treated as equal before strictness is
/// judged.
inline constexpr double kProbabilityTolerance = 1e-12;

enum class Criterion {
  cdf,  ///< F_a <= F_b everywhere, strict somewhere
  pdf,  ///< P(a Pareto-dominates v) >= P(b Pareto-dominates v), strict somewhere
};

std::string_view to_string(Criterion criterion);
Criterion criterion_from_string(std::string_view name);

enum class DominanceVerdict { first_dominates, second_dominates, incomparable, identical };

std::string_view to_string(DominanceVerdict verdict);
/// Swaps first/second.
DominanceVerdict mirror(DominanceVerdict verdict);

/// a_i >= b_i for all i and a_i > b_i for some i.
bool pareto_dominates(std::span<const double> a, std::span<const double> b);

/// Weak first-order dominance of two univariate distributions.
bool fsd_dominates_scalar(const DiscreteDistribution& a, const DiscreteDistribution& b);

/// Weak first-order dominance through the joint CDF: F_a <= F_b everywhere.
bool fsd_dominates(const DiscreteDistribution& a, const DiscreteDistribution& b);

bool esr_dominates_cdf(const DiscreteDistribution& a, const DiscreteDistribution& b);
bool esr_dominates_pdf(const DiscreteDistribution& a, const DiscreteDistribution& b);
bool esr_dominates(const DiscreteDistribution& a, const DiscreteDistribution& b,
                   Criterion criterion);

/// Both directions of ESR dominance from a single sweep of the grid.
DominanceVerdict compare(const DiscreteDistribution& a, const DiscreteDistribution& b,
                         Criterion criterion = Criterion::cdf);

/// Indices of candidates no other candidate ESR-dominates, ascending.
std::vector<std::size_t> esr_set(std::span<const DiscreteDistribution> candidates,
                                 Criterion criterion = Criterion::cdf);

/// Indices not strictly below another candidate in the weak FSD order.
/// Equal dominant distributions are all kept.
std::vector<std::size_t> fsd_undominated_set(std::span<const DiscreteDistribution> candidates);

/// Indices whose mean vector no other candidate's mean Pareto-dominates.
std::vector<std::size_t> pareto_front_of_means(std::span<const RewardVector> means);
std::vector<std::size_t> pareto_front_of_expectations(std::span<const ZTable> candidates);
std::vector<std::size_t> pareto_front_of_expectations(
    std::span<const DiscreteDistribution> candidates);

/// ESR value: sum_x mass(x) * u(x).
double expected_utility(const DiscreteDistribution& distribution, const MonotoneUtility& utility);
/// SER value: u(E[X]).
double utility_of_expectation(const DiscreteDistribution& distribution,
                              const MonotoneUtility& utility);

}  // namespace esr
