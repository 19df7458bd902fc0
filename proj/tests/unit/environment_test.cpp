#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <map>

#include "esr/dominance.hpp"
#include "esr/environment.hpp"
#include "esr/error.hpp"
#include "oracle.hpp"

namespace {

using esr::RewardVector;

double chi_squared_p_value(const std::vector<double>& observed,
                           const std::vector<double>& expected) {
  double statistic = 0.0;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    statistic += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
  }
  if (observed.size() < 2) return 1.0;
  boost::math::chi_squared dist(static_cast<double>(observed.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

const char* kMinimal = R"({
  "name": "tiny", "objectives": 2, "r_min": 0, "r_max": 10, "resolution": 1,
  "arms": [
    {"name": "a", "outcomes": [{"p": 1.0, "r": [2, 3]}]},
    {"name": "b", "outcomes": [{"p": 0.5, "r": [0, 0]}, {"p": 0.5, "r": [1, 1]}]}
  ]
})";

TEST(Rng, DeterministicAndDerived) {
  esr::Rng a(5);
  esr::Rng b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
  esr::Rng c = esr::Rng(5).derive(1);
  esr::Rng d = esr::Rng(5).derive(2);
  EXPECT_NE(c.uniform(), d.uniform());
  EXPECT_THROW(a.uniform_index(0), std::invalid_argument);
}

TEST(SampleArm, DegenerateArm) {
  const auto env = esr::load_environment_text(kMinimal);
  esr::Rng rng(1);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(esr::sample_arm(env, 0, rng), (RewardVector{2, 3}));
  EXPECT_THROW(esr::sample_arm(env, 2, rng), esr::OutOfRangeError);
}

TEST(SampleArm, Arm1Frequency) {
  const auto env = esr::preset("momab5");
  esr::Rng rng(99);
  int hits = 0;
  for (int i = 0; i < 100000; ++i) hits += esr::sample_arm(env, 0, rng) == RewardVector{5, 4};
  EXPECT_NEAR(hits / 100000.0, 0.6, 0.01);
}

TEST(SampleArm, SameSeedSameSequence) {
  const auto env = esr::preset("vrs");
  esr::Rng a(17);
  esr::Rng b(17);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_EQ(esr::sample_arm(env, i % 5, a), esr::sample_arm(env, i % 5, b));
  }
}

TEST(SampleArm, ChiSquaredGoodnessOfFit) {
  for (const char* name : {"momab5", "vrs"}) {
    const auto env = esr::preset(name);
    for (std::size_t arm = 0; arm < env.arms.size(); ++arm) {
      esr::Rng rng = esr::Rng(314).derive(arm);
      std::map<RewardVector, double> counts;
      const int n = 100000;
      for (int i = 0; i < n; ++i) counts[esr::sample_arm(env, arm, rng)] += 1;
      std::vector<double> observed;
      std::vector<double> expected;
      for (const auto& outcome : env.arms[arm].outcomes) {
        observed.push_back(counts[outcome.reward]);
        expected.push_back(outcome.probability * n);
      }
      EXPECT_GT(chi_squared_p_value(observed, expected), 0.001) << name << " arm " << arm;
    }
  }
}

TEST(ExactDistribution, PresetArms) {
  const auto momab = esr::preset("momab5");
  const auto arm5 = esr::exact_distribution(momab, 4);
  EXPECT_DOUBLE_EQ(arm5.pmf(RewardVector{2, 0}), 0.7);
  EXPECT_DOUBLE_EQ(arm5.pmf(RewardVector{4, 5}), 0.3);
  EXPECT_EQ(arm5.size(), 2u);

  const auto v1 = esr::exact_distribution(esr::preset("vrs"), 0);
  EXPECT_EQ(v1.size(), 4u);
  EXPECT_DOUBLE_EQ(v1.pmf(RewardVector{2, 0}), 0.05);
  EXPECT_DOUBLE_EQ(v1.pmf(RewardVector{2, 1}), 0.05);
  EXPECT_DOUBLE_EQ(v1.pmf(RewardVector{3, 2}), 0.1);
  EXPECT_DOUBLE_EQ(v1.pmf(RewardVector{4, 2}), 0.8);

  const auto tiny = esr::load_environment_text(kMinimal);
  EXPECT_EQ(esr::exact_distribution(tiny, 0).size(), 1u);
  EXPECT_THROW(esr::exact_distribution(tiny, 9), esr::OutOfRangeError);
}

TEST(Presets, MatchReferenceTables) {
  const auto momab = esr::preset("momab5");
  ASSERT_EQ(momab.arms.size(), 5u);
  EXPECT_EQ(momab.arms[0].name, "arm_1");
  EXPECT_EQ(momab.arms[0].outcomes,
            (std::vector<esr::Outcome>{{0.4, {0, 1}}, {0.6, {5, 4}}}));
  EXPECT_EQ(momab.true_esr_set, (std::vector<std::size_t>{0, 4}));
  EXPECT_EQ(esr::esr_cardinality_hint(momab), 2u);

  const auto vrs = esr::preset("vrs");
  EXPECT_EQ(vrs.arms[4].name, "V_5");
  EXPECT_EQ(vrs.arms[4].outcomes,
            (std::vector<esr::Outcome>{{0.8, {0, 0}}, {0.05, {1, 1}}, {0.05, {1, 2}},
                                       {0.1, {4, 0}}}));
  EXPECT_EQ(vrs.true_esr_set, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(esr::esr_cardinality_hint(vrs), 2u);

  for (const auto& [env, table] :
       {std::pair{momab, oracle::momab5_table()}, std::pair{vrs, oracle::vrs_table()}}) {
    EXPECT_EQ(env.lattice, esr::ReturnLattice(0, 10, 1, 2));
    for (std::size_t arm = 0; arm < 5; ++arm) {
      const auto& expected = table[arm];
      const auto got = esr::exact_distribution(env, arm);
      ASSERT_EQ(got.size(), expected.mass.size());
      for (const auto& [x, m] : expected.mass) {
        EXPECT_DOUBLE_EQ(got.pmf(RewardVector(x.begin(), x.end())), m / 1000.0);
      }
    }
  }
  EXPECT_THROW(esr::preset("nope"), esr::Error);
}

TEST(Presets, TrueSetsEqualComputedSets) {
  for (const auto& name : esr::preset_names()) {
    const auto env = esr::preset(name);
    const auto exact = esr::exact_distributions(env);
    if (env.true_esr_set) {
      EXPECT_EQ(esr::esr_set(exact, esr::Criterion::cdf), *env.true_esr_set) << name;
    }
  }
}

TEST(Presets, LotteriesSupportNegativeLattice) {
  const auto env = esr::preset("lottery34");
  EXPECT_LT(env.lattice.r_min(), 0.0);
  EXPECT_DOUBLE_EQ(esr::exact_distribution(env, 0).pmf(RewardVector{-20, 1}), 0.5);
}

TEST(LoadEnvironment, RoundTripsPresets) {
  for (const auto& name : esr::preset_names()) {
    const auto env = esr::preset(name);
    const auto text = esr::serialize_environment(env).dump();
    EXPECT_EQ(esr::load_environment_text(text), env) << name;
    EXPECT_EQ(esr::serialize_environment(esr::load_environment_text(text)).dump(), text);
  }
}

TEST(LoadEnvironment, PreservesDecimalStrings) {
  const auto env = esr::preset("vrs");
  const auto text = esr::serialize_environment(env).dump();
  EXPECT_NE(text.find("0.05"), std::string::npos);
  EXPECT_EQ(text.find("0.050000"), std::string::npos);
}

TEST(LoadEnvironment, ProbabilitySumErrorNamesArm) {
  const char* doc = R"({"name": "x", "objectives": 2, "r_min": 0, "r_max": 10, "resolution": 1,
    "arms": [{"name": "a", "outcomes": [{"p": 1.0, "r": [1, 1]}]},
             {"name": "bad", "outcomes": [{"p": 0.5, "r": [1, 1]}, {"p": 0.4, "r": [2, 2]}]}]})";
  try {
    esr::load_environment_text(doc);
    FAIL();
  } catch (const esr::ProbabilitySumError& e) {
    EXPECT_EQ(e.path(), "arms[1]");
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos) << e.what();
  }
}

TEST(LoadEnvironment, DistinctErrorKinds) {
  const std::string head =
      R"({"name": "x", "objectives": 2, "r_min": 0, "r_max": 10, "resolution": 1, )";
  EXPECT_THROW(esr::load_environment_text(head + R"("arms": [
      {"name": "a", "outcomes": [{"p": 1.0, "r": [1.5, 1]}]},
      {"name": "b", "outcomes": [{"p": 1.0, "r": [1, 1]}]}]})"),
               esr::OffLatticeRewardError);
  EXPECT_THROW(esr::load_environment_text(head + R"("arms": [
      {"name": "a", "outcomes": [{"p": 1.0, "r": [11, 1]}]},
      {"name": "b", "outcomes": [{"p": 1.0, "r": [1, 1]}]}]})"),
               esr::OffLatticeRewardError);
  EXPECT_THROW(esr::load_environment_text(head + R"("arms": [
      {"name": "a", "outcomes": [{"p": 1.0, "r": [1, 1]}]},
      {"name": "a", "outcomes": [{"p": 1.0, "r": [2, 1]}]}]})"),
               esr::DuplicateArmError);
  EXPECT_THROW(esr::load_environment_text(head + R"("arms": [
      {"name": "a", "outcomes": [{"p": 1.0, "r": [1, 1]}]}]})"),
               esr::ValidationError);
  EXPECT_THROW(esr::load_environment_text(head + R"("arms": [
      {"name": "a", "outcomes": [{"p": 1.0, "r": [1, 1, 1]}]},
      {"name": "b", "outcomes": [{"p": 1.0, "r": [1, 1]}]}]})"),
               esr::ValidationError);
  EXPECT_THROW(esr::load_environment_text(head + R"("arms": [
      {"name": "a", "outcomes": []},
      {"name": "b", "outcomes": [{"p": 1.0, "r": [1, 1]}]}]})"),
               esr::ValidationError);
  EXPECT_THROW(esr::load_environment_text("{not json"), esr::ValidationError);
}

TEST(LoadEnvironment, TrueSetMismatch) {
  auto doc = esr::serialize_environment(esr::preset("momab5"));
  doc["true_esr_set"] = {"arm_2"};
  EXPECT_THROW(esr::load_environment(doc), esr::EsrSetMismatchError);
  doc["true_esr_set"] = {"arm_9"};
  EXPECT_THROW(esr::load_environment(doc), esr::ValidationError);
}

TEST(LoadEnvironment, TrueSetOptional) {
  const auto env = esr::load_environment_text(kMinimal);
  EXPECT_FALSE(env.true_esr_set.has_value());
  EXPECT_EQ(esr::ground_truth_esr_set(env), (std::vector<std::size_t>{0}));
  EXPECT_EQ(esr::esr_cardinality_hint(env), 2u);
}

TEST(ResolveEnvironment, PresetOrFile) {
  EXPECT_EQ(esr::resolve_environment("vrs"), esr::preset("vrs"));
  EXPECT_THROW(esr::resolve_environment("/nonexistent/env.json"), esr::Error);
}

}  // namespace

namespace {

TEST(LoadEnvironment, ShippedExampleFile) {
  const auto env = esr::load_environment_file(ESR_SOURCE_DIR "/environments/three_arm.json");
  EXPECT_EQ(env.true_esr_set, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(esr::pareto_front_of_expectations(
                std::span<const esr::DiscreteDistribution>(esr::exact_distributions(env))),
            (std::vector<std::size_t>{1}));
}

}  // namespace
