#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "esr/dominance.hpp"
#include "esr/environment.hpp"
#include "esr/return_distribution.hpp"

namespace esr {

struct ExperimentConfig {
  std::string environment = "momab5";
  std::uint64_t episodes = 200'000;
  std::size_t runs = 10;
  std::size_t beta = 5;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  std::uint64_t snapshot_interval = 1000;
  Criterion criterion = Criterion::cdf;
  std::filesystem::path output = "results";
  /// Worker threads for independent runs; 0 picks hardware concurrency.
  std::size_t threads = 0;

  /// Throws Error on episodes/runs/snapshot_interval/beta < 1 or epsilon <= 0.
  void validate() const;
};

nlohmann::json config_to_json(const ExperimentConfig& config);

struct ExperimentRecord {
  std::size_t run = 0;
  std::uint64_t episode = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<std::size_t> solution_set;
};

struct CurvePoint {
  std::uint64_t episode = 0;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double mean_f1 = 0.0;
};

struct ExperimentResult {
  /// Ordered by run, then episode.
  std::vector<ExperimentRecord> records;
  /// Arithmetic mean over runs at each snapshot episode.
  std::vector<CurvePoint> curve;
  /// final_tables[run][arm]
  std::vector<std::vector<ZTable>> final_tables;

  /// First snapshot episode with mean F1 == 1, if any.
  std::optional<std::uint64_t> first_perfect_episode() const;
};

/// Runs `config.runs` independent learners (seeds derived per run) and scores
/// every snapshot against the ground-truth ESR set.
ExperimentResult run_experiment(const EnvironmentSpec& env, const ExperimentConfig& config);

/// Writes records.csv, mean_f1.csv, final_distributions.json and
/// metadata.json into `config.output`.
void write_experiment(const ExperimentResult& result, const EnvironmentSpec& env,
                      const ExperimentConfig& config);

/// Exact-distribution analysis of an environment.
struct AnalysisReport {
  std::vector<std::size_t> esr_set_cdf;
  std::vector<std::size_t> esr_set_pdf;
  std::vector<std::size_t> fsd_undominated;
  std::vector<std::size_t> pareto_front;
  std::vector<RewardVector> expectations;
  /// verdicts[i][j] compares arm i (first) with arm j (second).
  std::vector<std::vector<DominanceVerdict>> cdf_verdicts;
  std::vector<std::vector<DominanceVerdict>> pdf_verdicts;
};

AnalysisReport analyze(const EnvironmentSpec& env);
nlohmann::json report_to_json(const AnalysisReport& report, const EnvironmentSpec& env);

/// Writes `<out>/<arm>_pdf.csv` and `<out>/<arm>_cdf.csv` from a run
/// directory's final_distributions.json. Each row is one lattice point:
/// r0,...,r{D-1},value.
void export_distribution(const std::filesystem::path& run_directory, const std::string& arm,
                         std::size_t run, const std::filesystem::path& output_directory);

}  // namespace esr
