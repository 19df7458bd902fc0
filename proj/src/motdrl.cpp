#include "esr/motdrl.hpp"

#include <cmath>
#include <string>

#include "esr/error.hpp"

namespace esr {

RunStreams RunStreams::derive(std::uint64_t master_seed, std::uint64_t run,
                              std::size_t arm_count) {
  const Rng per_run = Rng(master_seed).derive(run);
  RunStreams streams{per_run.derive(0), {}};
  streams.arms.reserve(arm_count);
  for (std::size_t a = 0; a < arm_count; ++a) streams.arms.push_back(per_run.derive(a + 1));
  return streams;
}

LearnerState::LearnerState(const EnvironmentSpec& env, std::size_t beta,
                           std::size_t esr_cardinality, Criterion criterion)
    : beta_(beta),
      esr_cardinality_(esr_cardinality),
      objectives_(env.objectives()),
      criterion_(criterion) {
  if (beta < 1) throw std::invalid_argument("beta must be at least 1");
  if (esr_cardinality < 1) throw std::invalid_argument("|E*| must be at least 1");
  tables_.assign(env.arms.size(), ZTable(env.lattice));
}

void LearnerState::record(std::size_t arm, std::span<const double> reward) {
  tables_.at(arm).update(reward);
  ++total_pulls_;
}

LearnerState initialize(const EnvironmentSpec& env, std::size_t beta, RunStreams& streams,
                        Criterion criterion) {
  LearnerState state(env, beta, esr_cardinality_hint(env), criterion);
  if (streams.arms.size() != env.arms.size()) {
    throw std::invalid_argument("one random stream per arm is required");
  }
  for (std::size_t arm = 0; arm < env.arms.size(); ++arm) {
    for (std::size_t pull = 0; pull < beta; ++pull) {
      state.record(arm, sample_arm(env, arm, streams.arms[arm]));
    }
  }
  return state;
}

double ucb_bonus(std::uint64_t total_pulls, std::uint64_t arm_pulls, std::size_t objectives,
                 std::size_t esr_cardinality) {
  if (arm_pulls == 0 || total_pulls == 0) {
    throw EmptyDistributionError("UCB bonus is undefined before an arm has been pulled");
  }
  const double scale = std::pow(static_cast<double>(objectives * esr_cardinality), 0.25);
  const double log_term = std::log(static_cast<double>(total_pulls) * scale);
  return std::sqrt(2.0 * std::max(log_term, 0.0) / static_cast<double>(arm_pulls));
}

double ucb_bonus(const LearnerState& state, std::size_t arm) {
  return ucb_bonus(state.total_pulls(), state.table(arm).pulls(), state.objectives(),
                   state.esr_cardinality());
}

std::vector<std::size_t> current_esr_set(const LearnerState& state, bool with_bonus) {
  std::vector<DiscreteDistribution> views;
  views.reserve(state.arm_count());
  for (std::size_t arm = 0; arm < state.arm_count(); ++arm) {
    const ZTable& table = state.table(arm);
    if (table.pulls() == 0) {
      throw EmptyDistributionError("arm " + std::to_string(arm) + " has not been initialized");
    }
    views.push_back(with_bonus ? table.shifted_view(ucb_bonus(state, arm))
                               : table.distribution());
  }
  return esr_set(views, state.criterion());
}

std::size_t select_arm(const LearnerState& state, Rng& selector) {
  const auto candidates = current_esr_set(state, true);
  return candidates[selector.uniform_index(candidates.size())];
}

std::size_t step(LearnerState& state, const EnvironmentSpec& env, RunStreams& streams) {
  const std::size_t arm = select_arm(state, streams.selector);
  state.record(arm, sample_arm(env, arm, streams.arms.at(arm)));
  return arm;
}

std::vector<LearningSnapshot> run(const EnvironmentSpec& env, const RunOptions& options,
                                  LearnerState* final_state) {
  if (options.episodes < 1) throw std::invalid_argument("episodes must be at least 1");
  if (options.snapshot_interval < 1) {
    throw std::invalid_argument("snapshot interval must be at least 1");
  }
  RunStreams streams = RunStreams::derive(options.seed, options.run_id, env.arms.size());
  LearnerState state = initialize(env, options.beta, streams, options.criterion);

  std::vector<LearningSnapshot> snapshots;
  snapshots.reserve(options.episodes / options.snapshot_interval + 1);
  for (std::uint64_t episode = 1; episode <= options.episodes; ++episode) {
    step(state, env, streams);
    if (episode % options.snapshot_interval == 0 || episode == options.episodes) {
      LearningSnapshot snapshot;
      snapshot.episode = episode;
      snapshot.solution_set = current_esr_set(state, false);
      snapshot.distributions.reserve(state.arm_count());
      for (const auto& table : state.tables()) snapshot.distributions.push_back(table.distribution());
      snapshots.push_back(std::move(snapshot));
    }
  }
  if (final_state) *final_state = std::move(state);
  return snapshots;
}

}  // namespace esr
