#include "esr/environment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "esr/dominance.hpp"
#include "esr/error.hpp"

namespace esr {

namespace {

constexpr double kProbabilitySumTolerance = 1e-9;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string arm_path(std::size_t arm) { return "arms[" + std::to_string(arm) + "]"; }

std::string outcome_path(std::size_t arm, std::size_t outcome) {
  return arm_path(arm) + ".outcomes[" + std::to_string(outcome) + "]";
}

// Integral values are written as JSON integers so lattice bounds and rewards
// read naturally; everything else uses the shortest round-trip form.
nlohmann::json number_json(double value) {
  if (std::nearbyint(value) == value && std::abs(value) < 9.0e15) {
    return static_cast<std::int64_t>(value);
  }
  return value;
}

nlohmann::json vector_json(const RewardVector& values) {
  nlohmann::json out = nlohmann::json::array();
  for (double v : values) out.push_back(number_json(v));
  return out;
}

const nlohmann::json& require_field(const nlohmann::json& object, const std::string& key,
                                    const std::string& path) {
  if (!object.is_object()) throw ValidationError(path, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) {
    throw ValidationError(path.empty() ? key : path + "." + key, "missing required field");
  }
  return *it;
}

double require_number(const nlohmann::json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path, "expected a number");
  return value.get<double>();
}

std::size_t require_count(const nlohmann::json& value, const std::string& path) {
  if (!value.is_number_integer() || value.get<std::int64_t>() < 1) {
    throw ValidationError(path, "expected a positive integer");
  }
  return value.get<std::size_t>();
}

std::string join_indices(const std::vector<std::size_t>& indices, const EnvironmentSpec& env) {
  std::string out = "{";
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k) out += ", ";
    out += indices[k] < env.arms.size() ? env.arms[indices[k]].name : std::to_string(indices[k]);
  }
  return out + "}";
}

ArmSpec make_arm(std::string name, std::vector<Outcome> outcomes) {
  return ArmSpec{std::move(name), std::move(outcomes)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Rng

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

Rng Rng::derive(std::uint64_t stream) const {
  return Rng(splitmix64(seed_ ^ splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index needs n > 0");
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw;
  do {
    draw = engine_();
  } while (draw >= limit);
  return static_cast<std::size_t>(draw % bound);
}

// ---------------------------------------------------------------------------
// EnvironmentSpec

std::size_t EnvironmentSpec::arm_index(std::string_view arm_name) const {
  for (std::size_t i = 0; i < arms.size(); ++i) {
    if (arms[i].name == arm_name) return i;
  }
  throw Error("environment '" + name + "' has no arm named '" + std::string(arm_name) + "'");
}

void validate_environment(const EnvironmentSpec& env) {
  if (env.arms.size() < 2) throw ValidationError("arms", "at least two arms are required");
  std::set<std::string> names;
  for (std::size_t a = 0; a < env.arms.size(); ++a) {
    const ArmSpec& arm = env.arms[a];
    if (arm.name.empty()) throw ValidationError(arm_path(a) + ".name", "arm name is empty");
    if (!names.insert(arm.name).second) {
      throw DuplicateArmError(arm_path(a) + ".name", "duplicate arm name '" + arm.name + "'");
    }
    if (arm.outcomes.empty()) {
      throw ValidationError(arm_path(a) + ".outcomes", "arm '" + arm.name + "' has no outcomes");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < arm.outcomes.size(); ++k) {
      const Outcome& outcome = arm.outcomes[k];
      if (!(outcome.probability > 0.0 && outcome.probability <= 1.0)) {
        throw ValidationError(outcome_path(a, k) + ".p", "probability must lie in (0, 1]");
      }
      if (outcome.reward.size() != env.objectives()) {
        throw ValidationError(outcome_path(a, k) + ".r",
                              "reward has " + std::to_string(outcome.reward.size()) +
                                  " components, expected " + std::to_string(env.objectives()));
      }
      try {
        (void)env.lattice.flat_index(outcome.reward);
      } catch (const Error& e) {
        throw OffLatticeRewardError(outcome_path(a, k) + ".r", e.what());
      }
      total += outcome.probability;
    }
    if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
      std::ostringstream msg;
      msg << "probabilities of arm '" << arm.name << "' sum to " << total << ", expected 1";
      throw ProbabilitySumError(arm_path(a), msg.str());
    }
  }
  if (env.esr_set_cardinality && *env.esr_set_cardinality == 0) {
    throw ValidationError("esr_set_cardinality", "must be positive");
  }
  if (env.true_esr_set) {
    const auto& declared = *env.true_esr_set;
    if (declared.empty()) throw ValidationError("true_esr_set", "must not be empty");
    for (std::size_t index : declared) {
      if (index >= env.arms.size()) throw ValidationError("true_esr_set", "arm index out of range");
    }
    std::vector<std::size_t> sorted = declared;
    std::sort(sorted.begin(), sorted.end());
    const auto computed = esr_set(exact_distributions(env), Criterion::cdf);
    if (sorted != computed) {
      throw EsrSetMismatchError("true_esr_set", "declared " + join_indices(sorted, env) +
                                                    " but the exact distributions give " +
                                                    join_indices(computed, env));
    }
  }
}

RewardVector sample_arm(const EnvironmentSpec& env, std::size_t arm, Rng& rng) {
  if (arm >= env.arms.size()) throw OutOfRangeError("arm index " + std::to_string(arm) + " out of range");
  const auto& outcomes = env.arms[arm].outcomes;
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (const auto& outcome : outcomes) {
    cumulative += outcome.probability;
    if (u < cumulative) return outcome.reward;
  }
  return outcomes.back().reward;
}

DiscreteDistribution exact_distribution(const EnvironmentSpec& env, std::size_t arm) {
  if (arm >= env.arms.size()) throw OutOfRangeError("arm index " + std::to_string(arm) + " out of range");
  std::vector<Atom> atoms;
  for (const auto& outcome : env.arms[arm].outcomes) {
    atoms.push_back(Atom{outcome.reward, outcome.probability});
  }
  return DiscreteDistribution(env.lattice, std::move(atoms));
}

std::vector<DiscreteDistribution> exact_distributions(const EnvironmentSpec& env) {
  std::vector<DiscreteDistribution> out;
  out.reserve(env.arms.size());
  for (std::size_t a = 0; a < env.arms.size(); ++a) out.push_back(exact_distribution(env, a));
  return out;
}

std::vector<std::size_t> ground_truth_esr_set(const EnvironmentSpec& env) {
  if (env.true_esr_set) {
    auto sorted = *env.true_esr_set;
    std::sort(sorted.begin(), sorted.end());
    return sorted;
  }
  return esr_set(exact_distributions(env), Criterion::cdf);
}

std::size_t esr_cardinality_hint(const EnvironmentSpec& env) {
  if (env.esr_set_cardinality) return *env.esr_set_cardinality;
  if (env.true_esr_set) return env.true_esr_set->size();
  return env.arms.size();
}

// ---------------------------------------------------------------------------
// Documents

EnvironmentSpec load_environment(const nlohmann::json& document) {
  if (!document.is_object()) throw ValidationError("", "environment document must be an object");
  const auto& name = require_field(document, "name", "");
  if (!name.is_string()) throw ValidationError("name", "expected a string");
  const std::size_t objectives = require_count(require_field(document, "objectives", ""), "objectives");
  const double r_min = require_number(require_field(document, "r_min", ""), "r_min");
  const double r_max = require_number(require_field(document, "r_max", ""), "r_max");
  const double resolution =
      document.contains("resolution") ? require_number(document["resolution"], "resolution") : 1.0;

  std::optional<ReturnLattice> lattice;
  try {
    lattice.emplace(r_min, r_max, resolution, objectives);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("lattice", e.what());
  }

  EnvironmentSpec env{name.get<std::string>(), *lattice, {}, std::nullopt, std::nullopt};

  const auto& arms = require_field(document, "arms", "");
  if (!arms.is_array()) throw ValidationError("arms", "expected a list");
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const auto& arm_doc = arms[a];
    const auto& arm_name = require_field(arm_doc, "name", arm_path(a));
    if (!arm_name.is_string()) throw ValidationError(arm_path(a) + ".name", "expected a string");
    const auto& outcomes = require_field(arm_doc, "outcomes", arm_path(a));
    if (!outcomes.is_array()) throw ValidationError(arm_path(a) + ".outcomes", "expected a list");
    ArmSpec arm{arm_name.get<std::string>(), {}};
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
      const std::string path = outcome_path(a, k);
      Outcome outcome;
      outcome.probability = require_number(require_field(outcomes[k], "p", path), path + ".p");
      const auto& reward = require_field(outcomes[k], "r", path);
      if (!reward.is_array()) throw ValidationError(path + ".r", "expected a list of numbers");
      for (std::size_t d = 0; d < reward.size(); ++d) {
        outcome.reward.push_back(
            require_number(reward[d], path + ".r[" + std::to_string(d) + "]"));
      }
      arm.outcomes.push_back(std::move(outcome));
    }
    env.arms.push_back(std::move(arm));
  }

  if (document.contains("esr_set_cardinality")) {
    env.esr_set_cardinality = require_count(document["esr_set_cardinality"], "esr_set_cardinality");
  }
  if (document.contains("true_esr_set")) {
    const auto& declared = document["true_esr_set"];
    if (!declared.is_array()) throw ValidationError("true_esr_set", "expected a list of arm names");
    std::vector<std::size_t> indices;
    for (std::size_t k = 0; k < declared.size(); ++k) {
      const std::string path = "true_esr_set[" + std::to_string(k) + "]";
      if (!declared[k].is_string()) throw ValidationError(path, "expected an arm name");
      const auto wanted = declared[k].get<std::string>();
      const auto it = std::find_if(env.arms.begin(), env.arms.end(),
                                   [&](const ArmSpec& arm) { return arm.name == wanted; });
      if (it == env.arms.end()) throw ValidationError(path, "unknown arm '" + wanted + "'");
      indices.push_back(static_cast<std::size_t>(it - env.arms.begin()));
    }
    std::sort(indices.begin(), indices.end());
    env.true_esr_set = std::move(indices);
  }

  validate_environment(env);
  return env;
}

EnvironmentSpec load_environment_text(std::string_view text) {
  nlohmann::json document;
  try {
    document = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("", std::string("malformed JSON: ") + e.what());
  }
  return load_environment(document);
}

EnvironmentSpec load_environment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open environment file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_environment_text(buffer.str());
}

nlohmann::json serialize_environment(const EnvironmentSpec& env) {
  nlohmann::json arms = nlohmann::json::array();
  for (const auto& arm : env.arms) {
    nlohmann::json outcomes = nlohmann::json::array();
    for (const auto& outcome : arm.outcomes) {
      outcomes.push_back({{"p", number_json(outcome.probability)}, {"r", vector_json(outcome.reward)}});
    }
    arms.push_back({{"name", arm.name}, {"outcomes", std::move(outcomes)}});
  }
  nlohmann::json document = {{"name", env.name},
                             {"objectives", env.objectives()},
                             {"r_min", number_json(env.lattice.r_min())},
                             {"r_max", number_json(env.lattice.r_max())},
                             {"resolution", number_json(env.lattice.resolution())},
                             {"arms", std::move(arms)}};
  if (env.true_esr_set) {
    nlohmann::json names = nlohmann::json::array();
    for (std::size_t index : *env.true_esr_set) names.push_back(env.arms.at(index).name);
    document["true_esr_set"] = std::move(names);
  }
  if (env.esr_set_cardinality) document["esr_set_cardinality"] = *env.esr_set_cardinality;
  return document;
}

// ---------------------------------------------------------------------------
// Presets

EnvironmentSpec preset(std::string_view name) {
  const ReturnLattice unit_grid(0, 10, 1, 2);
  EnvironmentSpec env{std::string(name), unit_grid, {}, std::nullopt, std::nullopt};
  if (name == "momab5") {
    env.arms = {
        make_arm("arm_1", {{0.4, {0, 1}}, {0.6, {5, 4}}}),
        make_arm("arm_2", {{0.85, {1, 0}}, {0.15, {3, 2}}}),
        make_arm("arm_3", {{0.75, {2, 0}}, {0.25, {4, 2}}}),
        make_arm("arm_4", {{0.8, {0, 1}}, {0.2, {1, 2}}}),
        make_arm("arm_5", {{0.7, {2, 0}}, {0.3, {4, 5}}}),
    };
    env.true_esr_set = std::vector<std::size_t>{0, 4};
    env.esr_set_cardinality = 2;
  } else if (name == "vrs") {
    // Objectives are (safety, effectiveness).
    env.arms = {
        make_arm("V_1", {{0.05, {2, 0}}, {0.05, {2, 1}}, {0.1, {3, 2}}, {0.8, {4, 2}}}),
        make_arm("V_2", {{0.1, {0, 0}}, {0.1, {1, 1}}, {0.5, {2, 0}}, {0.3, {2, 1}}}),
        make_arm("V_3", {{0.1, {1, 0}}, {0.1, {1, 3}}, {0.2, {3, 4}}, {0.6, {5, 4}}}),
        make_arm("V_4", {{0.1, {1, 0}}, {0.4, {2, 1}}, {0.4, {3, 1}}, {0.1, {3, 2}}}),
        make_arm("V_5", {{0.8, {0, 0}}, {0.05, {1, 1}}, {0.05, {1, 2}}, {0.1, {4, 0}}}),
    };
    env.true_esr_set = std::vector<std::size_t>{0, 2};
    env.esr_set_cardinality = 2;
  } else if (name == "lottery12") {
    env.arms = {
        make_arm("L_1", {{0.5, {4, 3}}, {0.5, {2, 3}}}),
        make_arm("L_2", {{0.9, {1, 3}}, {0.1, {10, 2}}}),
    };
  } else if (name == "lottery34") {
    env.lattice = ReturnLattice(-20, 20, 1, 2);
    env.arms = {
        make_arm("L_3", {{0.5, {-20, 1}}, {0.5, {20, 3}}}),
        make_arm("L_4", {{0.9, {0, 2}}, {0.1, {5, 2}}}),
    };
  } else {
    throw Error("unknown preset '" + std::string(name) +
                "' (expected momab5, vrs, lottery12 or lottery34)");
  }
  validate_environment(env);
  return env;
}

std::vector<std::string> preset_names() { return {"momab5", "vrs", "lottery12", "lottery34"}; }

EnvironmentSpec resolve_environment(const std::string& name_or_path) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return preset(name_or_path);
  }
  return load_environment_file(name_or_path);
}

}  // namespace esr
