#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "esr/lattice.hpp"
#include "esr/return_distribution.hpp"

namespace esr {

/// Seedable generator that can derive independent child streams, so each
/// (run, arm) pair draws from its own sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  Rng derive(std::uint64_t stream) const;

  /// Uniform in [0, 1).
  double uniform();
  /// Uniform in {0, ..., n - 1}; n must be positive.
  std::size_t uniform_index(std::size_t n);

  std::uint64_t seed() const noexcept { return seed_; }
  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

struct Outcome {
  double probability = 0.0;
  RewardVector reward;

  bool operator==(const Outcome&) const = default;
};

struct ArmSpec {
  std::string name;
  std::vector<Outcome> outcomes;

  bool operator==(const ArmSpec&) const = default;
};

/// Ground truth of a multi-objective bandit. Immutable once validated.
struct EnvironmentSpec {
  std::string name;
  ReturnLattice lattice;
  std::vector<ArmSpec> arms;
  /// Declared optimal arm indices, ascending. Validated against the exact
  /// distributions when present.
  std::optional<std::vector<std::size_t>> true_esr_set;
  /// Declared |E*| used by the learner's exploration bonus.
  std::optional<std::size_t> esr_set_cardinality;

  std::size_t objectives() const noexcept { return lattice.objectives(); }
  /// Index of the arm called `name`; throws Error when unknown.
  std::size_t arm_index(std::string_view name) const;

  bool operator==(const EnvironmentSpec&) const = default;
};

/// Checks every invariant; throws the matching ValidationError subclass.
void validate_environment(const EnvironmentSpec& env);

RewardVector sample_arm(const EnvironmentSpec& env, std::size_t arm, Rng& rng);

DiscreteDistribution exact_distribution(const EnvironmentSpec& env, std::size_t arm);
std::vector<DiscreteDistribution> exact_distributions(const EnvironmentSpec& env);

/// The declared true ESR set, or the CDF-criterion ESR set of the exact arm
/// distributions when none is declared.
std::vector<std::size_t> ground_truth_esr_set(const EnvironmentSpec& env);

/// |E*| for the exploration bonus: declared cardinality, else the size of the
/// declared true set, else the number of arms.
std::size_t esr_cardinality_hint(const EnvironmentSpec& env);

EnvironmentSpec load_environment(const nlohmann::json& document);
EnvironmentSpec load_environment_text(std::string_view text);
EnvironmentSpec load_environment_file(const std::string& path);
nlohmann::json serialize_environment(const EnvironmentSpec& env);

/// Built-in environments: "momab5", "vrs", "lottery12", "lottery34".
EnvironmentSpec preset(std::string_view name);
std::vector<std::string> preset_names();

/// Preset name or path to an environment file.
EnvironmentSpec resolve_environment(const std::string& name_or_path);

}  // namespace esr
