#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "esr/dominance.hpp"
#include "esr/environment.hpp"
#include "esr/error.hpp"
#include "esr/utility.hpp"
#include "oracle.hpp"

namespace {

using esr::Criterion;
using esr::DiscreteDistribution;
using esr::DominanceVerdict;
using esr::ReturnLattice;
using esr::RewardVector;

const ReturnLattice kGrid(0, 10, 1, 2);
const ReturnLattice kLine(0, 10, 1, 1);

std::vector<DiscreteDistribution> momab_arms() {
  std::vector<DiscreteDistribution> out;
  for (const auto& d : oracle::momab5_table()) out.push_back(oracle::to_distribution(d, kGrid));
  return out;
}

std::vector<DiscreteDistribution> vrs_arms() {
  std::vector<DiscreteDistribution> out;
  for (const auto& d : oracle::vrs_table()) out.push_back(oracle::to_distribution(d, kGrid));
  return out;
}

DiscreteDistribution scalar(std::vector<std::pair<double, double>> atoms) {
  std::vector<esr::Atom> list;
  for (auto [x, p] : atoms) list.push_back({{x}, p});
  return DiscreteDistribution(kLine, list);
}

TEST(Pareto, Examples) {
  EXPECT_TRUE(esr::pareto_dominates(RewardVector{4, 3}, RewardVector{2, 3}));
  EXPECT_FALSE(esr::pareto_dominates(RewardVector{2, 3}, RewardVector{3, 2}));
  EXPECT_FALSE(esr::pareto_dominates(RewardVector{3, 2}, RewardVector{2, 3}));
  EXPECT_FALSE(esr::pareto_dominates(RewardVector{2, 3}, RewardVector{2, 3}));
  EXPECT_THROW(esr::pareto_dominates(RewardVector{1}, RewardVector{1, 2}),
               esr::DimensionMismatchError);
}

TEST(ScalarFsd, Examples) {
  const auto five = DiscreteDistribution::point_mass(kLine, {5});
  const auto three = DiscreteDistribution::point_mass(kLine, {3});
  EXPECT_TRUE(esr::fsd_dominates_scalar(five, three));
  EXPECT_FALSE(esr::fsd_dominates_scalar(three, five));
  EXPECT_TRUE(esr::fsd_dominates_scalar(five, five));
  const auto spread = scalar({{1, 0.5}, {3, 0.5}});
  const auto middle = scalar({{2, 1.0}});
  EXPECT_FALSE(esr::fsd_dominates_scalar(spread, middle));
  EXPECT_FALSE(esr::fsd_dominates_scalar(middle, spread));
}

TEST(ScalarFsd, RejectsVectorDistributions) {
  const auto p = DiscreteDistribution::point_mass(kGrid, {1, 1});
  EXPECT_THROW(esr::fsd_dominates_scalar(p, p), esr::DimensionMismatchError);
}

TEST(EsrCdf, MomabExamples) {
  const auto arms = momab_arms();
  EXPECT_TRUE(esr::esr_dominates_cdf(arms[0], arms[3]));
  EXPECT_LT(arms[0].cdf(RewardVector{1, 2}), arms[3].cdf(RewardVector{1, 2}));
  EXPECT_DOUBLE_EQ(arms[0].cdf(RewardVector{1, 2}), 0.4);
  EXPECT_DOUBLE_EQ(arms[3].cdf(RewardVector{1, 2}), 1.0);
  EXPECT_FALSE(esr::esr_dominates_cdf(arms[0], arms[4]));
  EXPECT_FALSE(esr::esr_dominates_cdf(arms[4], arms[0]));
  EXPECT_EQ(esr::compare(arms[0], arms[4], Criterion::cdf), DominanceVerdict::incomparable);
  EXPECT_FALSE(esr::esr_dominates_cdf(arms[0], arms[0]));
  EXPECT_EQ(esr::compare(arms[0], arms[0], Criterion::cdf), DominanceVerdict::identical);
}

TEST(EsrPdf, MomabExamples) {
  const auto arms = momab_arms();
  // Survival of arm_5 vs arm_2: at (1,0) both are certain to exceed, the
  // discriminating point is (0,1).
  EXPECT_DOUBLE_EQ(arms[4].pareto_survival(RewardVector{1, 0}), 1.0);
  EXPECT_DOUBLE_EQ(arms[4].pareto_survival(RewardVector{0, 1}), 0.3);
  EXPECT_DOUBLE_EQ(arms[1].pareto_survival(RewardVector{0, 1}), 0.15);
  EXPECT_TRUE(esr::esr_dominates_pdf(arms[4], arms[1]));
  EXPECT_FALSE(esr::esr_dominates_pdf(arms[1], arms[4]));
  EXPECT_FALSE(esr::esr_dominates_pdf(arms[0], arms[0]));
  const auto hi = DiscreteDistribution::point_mass(kGrid, {5, 5});
  const auto lo = DiscreteDistribution::point_mass(kGrid, {0, 0});
  EXPECT_TRUE(esr::esr_dominates_pdf(hi, lo));
  EXPECT_DOUBLE_EQ(hi.pareto_survival(RewardVector{0, 0}), 1.0);
  EXPECT_EQ(lo.pareto_survival(RewardVector{0, 0}), 0.0);
}

TEST(Compare, DimensionMismatch) {
  const auto a = DiscreteDistribution::point_mass(kGrid, {1, 1});
  const auto b = DiscreteDistribution::point_mass(kLine, {1});
  EXPECT_THROW(esr::esr_dominates_cdf(a, b), esr::DimensionMismatchError);
  EXPECT_THROW(esr::esr_dominates_pdf(a, b), esr::DimensionMismatchError);
}

TEST(EsrSet, PresetSets) {
  EXPECT_EQ(esr::esr_set(momab_arms(), Criterion::cdf), (std::vector<std::size_t>{0, 4}));
  EXPECT_EQ(esr::esr_set(vrs_arms(), Criterion::cdf), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(esr::esr_set(momab_arms(), Criterion::pdf), (std::vector<std::size_t>{0, 4}));
  EXPECT_EQ(esr::esr_set(vrs_arms(), Criterion::pdf), (std::vector<std::size_t>{0, 2}));
}

TEST(EsrSet, MatchesIntegerOracleOnPresets) {
  for (const auto& table : {oracle::momab5_table(), oracle::vrs_table()}) {
    std::vector<DiscreteDistribution> dists;
    for (const auto& d : table) dists.push_back(oracle::to_distribution(d, kGrid));
    EXPECT_EQ(esr::esr_set(dists, Criterion::cdf),
              oracle::undominated(table, [](const auto& a, const auto& b) {
                return oracle::dominates_cdf(a, b, 0, 10);
              }));
    EXPECT_EQ(esr::esr_set(dists, Criterion::pdf),
              oracle::undominated(table, [](const auto& a, const auto& b) {
                return oracle::dominates_survival(a, b, 0, 10);
              }));
  }
}

TEST(EsrSet, SingleAndEmpty) {
  EXPECT_EQ(esr::esr_set(std::vector{DiscreteDistribution::point_mass(kGrid, {3, 3})},
                         Criterion::cdf),
            (std::vector<std::size_t>{0}));
  EXPECT_THROW(esr::esr_set(std::vector<DiscreteDistribution>{}, Criterion::cdf),
               std::invalid_argument);
  EXPECT_THROW(esr::fsd_undominated_set(std::vector<DiscreteDistribution>{}),
               std::invalid_argument);
}

TEST(FsdUndominated, KeepsIdenticalDominantDuplicates) {
  const auto top = DiscreteDistribution(kGrid, {{{5, 5}, 0.5}, {{6, 2}, 0.5}});
  const auto low = DiscreteDistribution::point_mass(kGrid, {1, 1});
  const std::vector<DiscreteDistribution> all{top, low, top};
  EXPECT_EQ(esr::fsd_undominated_set(all), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(esr::fsd_undominated_set(std::vector{low}), (std::vector<std::size_t>{0}));
}

TEST(FsdUndominated, SupersetOfEsrSetOnMomab) {
  const auto arms = momab_arms();
  const auto esr_indices = esr::esr_set(arms, Criterion::cdf);
  const auto undominated = esr::fsd_undominated_set(arms);
  EXPECT_TRUE(std::includes(undominated.begin(), undominated.end(), esr_indices.begin(),
                            esr_indices.end()));
}

TEST(ParetoFront, Examples) {
  const auto arms = momab_arms();
  EXPECT_EQ(esr::pareto_front_of_expectations(std::span<const DiscreteDistribution>(arms)),
            (std::vector<std::size_t>{0}));
  const auto p = DiscreteDistribution::point_mass(kGrid, {2, 2});
  const std::vector<DiscreteDistribution> same{p, p, p};
  EXPECT_EQ(esr::pareto_front_of_expectations(std::span<const DiscreteDistribution>(same)),
            (std::vector<std::size_t>{0, 1, 2}));
  const std::vector<DiscreteDistribution> crossing{
      DiscreteDistribution::point_mass(kGrid, {1, 4}),
      DiscreteDistribution::point_mass(kGrid, {4, 1})};
  EXPECT_EQ(esr::pareto_front_of_expectations(std::span<const DiscreteDistribution>(crossing)),
            (std::vector<std::size_t>{0, 1}));
}

TEST(ParetoFront, ZTableOverloadRejectsEmpty) {
  std::vector<esr::ZTable> tables(2, esr::ZTable(kGrid));
  tables[0].update(RewardVector{1, 1});
  EXPECT_THROW(esr::pareto_front_of_expectations(std::span<const esr::ZTable>(tables)),
               esr::EmptyDistributionError);
  tables[1].update(RewardVector{2, 2});
  EXPECT_EQ(esr::pareto_front_of_expectations(std::span<const esr::ZTable>(tables)),
            (std::vector<std::size_t>{1}));
}

TEST(ParetoFront, StrictlyInsideEsrSetOnMomab) {
  const auto arms = momab_arms();
  const auto front = esr::pareto_front_of_expectations(std::span<const DiscreteDistribution>(arms));
  const auto set = esr::esr_set(arms, Criterion::cdf);
  EXPECT_TRUE(std::includes(set.begin(), set.end(), front.begin(), front.end()));
  EXPECT_LT(front.size(), set.size());
}

TEST(Utilities, LotteryValues) {
  const auto env = esr::preset("lottery12");
  const auto l1 = esr::exact_distribution(env, 0);
  const auto l2 = esr::exact_distribution(env, 1);
  const auto u = esr::MonotoneUtility::separable({1, 1}, {2, 2}, {0, 0});
  EXPECT_NEAR(esr::utility_of_expectation(l1, u), 18.0, 1e-9);
  EXPECT_NEAR(esr::utility_of_expectation(l2, u), 12.02, 1e-9);
  EXPECT_NEAR(esr::expected_utility(l1, u), 19.0, 1e-9);
  EXPECT_NEAR(esr::expected_utility(l2, u), 19.4, 1e-9);
  const auto point = DiscreteDistribution::point_mass(kGrid, {3, 7});
  EXPECT_DOUBLE_EQ(esr::expected_utility(point, u), u(RewardVector{3, 7}));
  EXPECT_DOUBLE_EQ(esr::utility_of_expectation(point, u), u(RewardVector{3, 7}));
}

TEST(Utilities, SamplerContract) {
  const auto one = esr::sample_monotone_utilities(1, 5, true, kGrid);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_TRUE(one[0].is_linear());
  EXPECT_EQ(one[0].weights(), (std::vector<double>{1, 1}));
  EXPECT_EQ(one[0].powers(), (std::vector<double>{1, 1}));

  const auto a = esr::sample_monotone_utilities(50, 99, true, kGrid);
  const auto b = esr::sample_monotone_utilities(50, 99, true, kGrid);
  EXPECT_EQ(a, b);
  for (const auto& u : a) {
    EXPECT_TRUE(u.cross_partial_nonpositive());
    EXPECT_GT(u(RewardVector{4, 3}), u(RewardVector{2, 3})) << u.describe();
    for (std::size_t d = 0; d < 2; ++d) {
      EXPECT_GT(u.weights()[d], 0.0);
      EXPECT_GT(u.powers()[d], 0.0);
      EXPECT_LE(u.powers()[d], 1.0);
    }
  }
  const auto mixed = esr::sample_monotone_utilities(10, 3, false, kGrid);
  EXPECT_TRUE(std::any_of(mixed.begin(), mixed.end(), [](const auto& u) {
    return u.family() == esr::MonotoneUtility::Family::product;
  }));
  for (const auto& u : mixed) EXPECT_TRUE(esr::spot_check_monotone(u, kGrid, 1000, 1));
}

TEST(Utilities, DomainErrors) {
  const auto root = esr::MonotoneUtility::separable({1, 1}, {0.5, 0.5}, {0, 0});
  EXPECT_THROW(root(RewardVector{-1, 0}), esr::OutOfRangeError);
  const auto lin = esr::MonotoneUtility::linear({1, 2});
  EXPECT_DOUBLE_EQ(lin(RewardVector{-1, 3}), 5.0);
}

// ---- properties ---------------------------------------------------------

TEST(Properties, StrictnessAndAsymmetry) {
  std::mt19937_64 rng(31);
  int dominating_pairs = 0;
  for (int trial = 0; trial < 600; ++trial) {
    const auto ia = oracle::random_dist(rng, 2, 0, 5, 1 + trial % 4, 60);
    const auto ib = trial % 2 ? oracle::improve(ia, rng, 5, 3)
                              : oracle::random_dist(rng, 2, 0, 5, 1 + trial % 3, 60);
    const auto a = oracle::to_distribution(ia, kGrid);
    const auto b = oracle::to_distribution(ib, kGrid);
    for (auto criterion : {Criterion::cdf, Criterion::pdf}) {
      EXPECT_FALSE(esr::esr_dominates(a, a, criterion));
      const bool ab = esr::esr_dominates(a, b, criterion);
      const bool ba = esr::esr_dominates(b, a, criterion);
      EXPECT_FALSE(ab && ba);
      EXPECT_EQ(esr::compare(b, a, criterion), esr::mirror(esr::compare(a, b, criterion)));
      dominating_pairs += ab || ba;
    }
    EXPECT_TRUE(esr::fsd_dominates(a, a));
    EXPECT_EQ(esr::esr_dominates_cdf(a, b), oracle::dominates_cdf(ia, ib, 0, 10));
    EXPECT_EQ(esr::esr_dominates_cdf(b, a), oracle::dominates_cdf(ib, ia, 0, 10));
    EXPECT_EQ(esr::esr_dominates_pdf(a, b), oracle::dominates_survival(ia, ib, 0, 10));
    EXPECT_EQ(esr::fsd_dominates(a, b), oracle::weak_fsd(ia, ib, 0, 10));
  }
  EXPECT_GT(dominating_pairs, 200);
}

TEST(Properties, ShiftedComparisonsMatchOracle) {
  // Equal integer bonuses keep everything on the integer box, so the oracle
  // can check bonus-shifted comparisons as plain translations.
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ia = oracle::random_dist(rng, 2, 0, 6, 3, 40);
    const auto ib = oracle::random_dist(rng, 2, 0, 6, 3, 40);
    const int shift = trial % 3;
    oracle::IntDist sa;
    sa.denominator = ia.denominator;
    for (const auto& [x, m] : ia.mass) sa.mass[{x[0] + shift, x[1] + shift}] = m;
    const auto a = oracle::to_distribution(ia, kGrid).shifted(shift);
    const auto b = oracle::to_distribution(ib, kGrid);
    EXPECT_EQ(esr::esr_dominates_cdf(a, b), oracle::dominates_cdf(sa, ib, 0, 10));
    EXPECT_EQ(esr::esr_dominates_cdf(b, a), oracle::dominates_cdf(ib, sa, 0, 10));
    EXPECT_EQ(esr::esr_dominates_pdf(a, b), oracle::dominates_survival(sa, ib, 0, 10));
  }
}

TEST(Properties, EsrSetSubsetOfUndominatedAndPermutationInvariant) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<DiscreteDistribution> dists;
    const std::size_t n = 2 + trial % 6;
    const auto base = oracle::random_dist(rng, 2, 0, 6, 3, 50);
    for (std::size_t i = 0; i < n; ++i) {
      const auto d = i % 2 ? oracle::improve(base, rng, 6, 2)
                           : oracle::random_dist(rng, 2, 0, 6, 3, 50);
      dists.push_back(oracle::to_distribution(d, kGrid));
    }
    for (auto criterion : {Criterion::cdf, Criterion::pdf}) {
      const auto set = esr::esr_set(dists, criterion);
      ASSERT_FALSE(set.empty());
      if (criterion == Criterion::cdf) {
        const auto undominated = esr::fsd_undominated_set(dists);
        EXPECT_TRUE(std::includes(undominated.begin(), undominated.end(), set.begin(),
                                  set.end()));
      }
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<DiscreteDistribution> permuted;
      for (std::size_t i : perm) permuted.push_back(dists[i]);
      std::vector<std::size_t> mapped;
      for (std::size_t k : esr::esr_set(permuted, criterion)) mapped.push_back(perm[k]);
      std::sort(mapped.begin(), mapped.end());
      EXPECT_EQ(mapped, set);
    }
  }
}

TEST(Properties, ScalarFsdImpliesHigherMeanExactly) {
  std::mt19937_64 rng(43);
  int checked = 0;
  for (int trial = 0; trial < 2000 && checked < 500; ++trial) {
    const auto ia = oracle::random_dist(rng, 1, 0, 10, 1 + trial % 5, 120);
    const auto ib = trial % 3 ? oracle::improve(ia, rng, 10, 2)
                              : oracle::random_dist(rng, 1, 0, 10, 2, 120);
    const auto a = oracle::to_distribution(ia, kLine);
    const auto b = oracle::to_distribution(ib, kLine);
    if (!esr::fsd_dominates_scalar(b, a)) continue;
    ++checked;
    EXPECT_GE(ib.mean_numerator(0), ia.mean_numerator(0));
  }
  EXPECT_GE(checked, 500);
}

TEST(Properties, LinearUtilitiesSerEqualsEsr) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> w(0.1, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = oracle::to_distribution(oracle::random_dist(rng, 2, 0, 10, 4, 997), kGrid);
    for (int k = 0; k < 20; ++k) {
      const auto u = esr::MonotoneUtility::linear({w(rng), w(rng)});
      EXPECT_NEAR(esr::expected_utility(d, u), esr::utility_of_expectation(d, u), 1e-9);
    }
  }
}

// Separable utilities cannot see the dependence structure between
// objectives: two distributions with the same marginals tie for every such
// utility even though one is CDF-dominant. Strict utility gains therefore
// need a marginal improvement; only >= holds in general.
TEST(Properties, CopulaCounterexampleGivesEqualitySeparable) {
  const DiscreteDistribution anti(kGrid, {{{0, 1}, 0.5}, {{1, 0}, 0.5}});
  const DiscreteDistribution co(kGrid, {{{0, 0}, 0.5}, {{1, 1}, 0.5}});
  EXPECT_TRUE(esr::esr_dominates_cdf(anti, co));
  for (const auto& u : esr::sample_monotone_utilities(50, 1, true, kGrid)) {
    EXPECT_NEAR(esr::expected_utility(anti, u), esr::expected_utility(co, u), 1e-12);
  }
}

}  // namespace
