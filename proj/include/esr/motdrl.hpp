#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "esr/dominance.hpp"
#include "esr/environment.hpp"
#include "esr/return_distribution.hpp"

namespace esr {

/// Random streams owned by one learning run: one for arm selection and one
/// per arm for outcome draws.
struct RunStreams {
  Rng selector;
  std::vector<Rng> arms;

  static RunStreams derive(std::uint64_t master_seed, std::uint64_t run, std::size_t arm_count);
};

/// Tabular distributional learner state: one Z-table per arm plus the pull
/// counters and the parameters of the exploration bonus.
class LearnerState {
 public:
  LearnerState(const EnvironmentSpec& env, std::size_t beta, std::size_t esr_cardinality,
               Criterion criterion = Criterion::cdf);

  void record(std::size_t arm, std::span<const double> reward);

  const std::vector<ZTable>& tables() const noexcept { return tables_; }
  const ZTable& table(std::size_t arm) const { return tables_.at(arm); }
  std::size_t arm_count() const noexcept { return tables_.size(); }
  std::uint64_t total_pulls() const noexcept { return total_pulls_; }
  std::size_t beta() const noexcept { return beta_; }
  std::size_t esr_cardinality() const noexcept { return esr_cardinality_; }
  std::size_t objectives() const noexcept { return objectives_; }
  Criterion criterion() const noexcept { return criterion_; }

 private:
  std::vector<ZTable> tables_;
  std::uint64_t total_pulls_ = 0;
  std::size_t beta_;
  std::size_t esr_cardinality_;
  std::size_t objectives_;
  Criterion criterion_;
};

/// Pulls every arm `beta` times. |E*| comes from esr_cardinality_hint(env).
LearnerState initialize(const EnvironmentSpec& env, std::size_t beta, RunStreams& streams,
                        Criterion criterion = Criterion::cdf);

/// sqrt(2 ln(n * (D |E*|)^(1/4)) / N_arm).
double ucb_bonus(std::uint64_t total_pulls, std::uint64_t arm_pulls, std::size_t objectives,
                 std::size_t esr_cardinality);
double ucb_bonus(const LearnerState& state, std::size_t arm);

/// Arms whose (optionally bonus-shifted) empirical distribution no other arm
/// ESR-dominates.
std::vector<std::size_t> current_esr_set(const LearnerState& state, bool with_bonus);

/// Uniform draw from current_esr_set(state, true); does not pull.
std::size_t select_arm(const LearnerState& state, Rng& selector);

/// One learning step: select, pull, update. Returns the chosen arm.
std::size_t step(LearnerState& state, const EnvironmentSpec& env, RunStreams& streams);

struct LearningSnapshot {
  std::uint64_t episode = 0;
  /// Bonus-free ESR set of the learned distributions.
  std::vector<std::size_t> solution_set;
  std::vector<DiscreteDistribution> distributions;
};

struct RunOptions {
  std::uint64_t episodes = 200'000;
  std::size_t beta = 5;
  std::uint64_t seed = 0;
  std::uint64_t run_id = 0;
  std::uint64_t snapshot_interval = 1000;
  Criterion criterion = Criterion::cdf;
};

/// Initializes, then takes `episodes` steps. Snapshots are taken every
/// `snapshot_interval` episodes and after the final one.
std::vector<LearningSnapshot> run(const EnvironmentSpec& env, const RunOptions& options,
                                  LearnerState* final_state = nullptr);

}  // namespace esr
