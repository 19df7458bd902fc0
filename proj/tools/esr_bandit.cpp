#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "esr/environment.hpp"
#include "esr/error.hpp"
#include "esr/experiment.hpp"

namespace {

int cmd_run(esr::ExperimentConfig config, const std::string& criterion) {
  config.criterion = esr::criterion_from_string(criterion);
  config.validate();
  const esr::EnvironmentSpec env = esr::resolve_environment(config.environment);
  const esr::ExperimentResult result = esr::run_experiment(env, config);
  esr::write_experiment(result, env, config);

  const auto first = result.first_perfect_episode();
  std::cout << "environment " << env.name << ": " << config.runs << " run(s) x "
            << config.episodes << " episodes\n";
  std::cout << "final mean F1 " << result.curve.back().mean_f1 << "\n";
  std::cout << "first episode with mean F1 = 1: "
            << (first ? std::to_string(*first) : std::string("never")) << "\n";
  std::cout << "artifacts written to " << config.output.string() << "\n";
  return 0;
}

int cmd_analyze(const std::string& environment, const std::string& out) {
  const esr::EnvironmentSpec env = esr::resolve_environment(environment);
  const std::string text = esr::report_to_json(esr::analyze(env), env).dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text) || !file.flush()) {
    throw esr::Error("cannot write report to '" + out + "'");
  }
  return 0;
}

int cmd_validate(const std::string& environment) {
  const esr::EnvironmentSpec env = esr::resolve_environment(environment);
  std::cout << env.name << ": valid (" << env.arms.size() << " arms, " << env.objectives()
            << " objectives)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributional multi-objective bandit experiments under ESR", "esr-bandit"};
  app.require_subcommand(1);

  esr::ExperimentConfig config;
  std::string criterion = "cdf";
  std::string out_dir = "results";
  auto* run = app.add_subcommand("run", "Run multi-seed MOTDRL experiments and write artifacts");
  run->add_option("--env", config.environment, "Preset name or environment JSON file")
      ->capture_default_str();
  run->add_option("--episodes", config.episodes)->capture_default_str();
  run->add_option("--runs", config.runs)->capture_default_str();
  run->add_option("--beta", config.beta, "Initial pulls per arm")->capture_default_str();
  run->add_option("--epsilon", config.epsilon, "KS tolerance for coverage matching")
      ->capture_default_str();
  run->add_option("--seed", config.seed)->capture_default_str();
  run->add_option("--snapshot-interval", config.snapshot_interval)->capture_default_str();
  run->add_option("--criterion", criterion, "cdf or pdf")->capture_default_str();
  run->add_option("--threads", config.threads, "Worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();

  std::string analyze_env = "momab5";
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "Exact dominance analysis of an environment");
  analyze->add_option("--env", analyze_env)->capture_default_str();
  analyze->add_option("--out", analyze_out, "Report file (stdout when omitted)");

  std::string run_dir;
  std::string arm;
  std::size_t run_id = 0;
  std::string export_out = ".";
  auto* export_dist =
      app.add_subcommand("export-dist", "Export a learned arm distribution as PDF/CDF grids");
  export_dist->add_option("--run-dir", run_dir, "Directory written by `run`")->required();
  export_dist->add_option("--arm", arm, "Arm name or zero-based index")->required();
  export_dist->add_option("--run", run_id)->capture_default_str();
  export_dist->add_option("--out", export_out)->capture_default_str();

  std::string validate_env;
  auto* validate = app.add_subcommand("validate-env", "Check an environment file or preset");
  validate->add_option("--env", validate_env)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      config.output = out_dir;
      return cmd_run(config, criterion);
    }
    if (*analyze) return cmd_analyze(analyze_env, analyze_out);
    if (*export_dist) {
      esr::export_distribution(run_dir, arm, run_id, export_out);
      std::cout << "wrote " << export_out << "\n";
      return 0;
    }
    if (*validate) return cmd_validate(validate_env);
  } catch (const esr::ValidationError& e) {
    std::cerr << "invalid environment: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
