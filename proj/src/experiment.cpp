#include "esr/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <thread>

#include "esr/error.hpp"
#include "esr/evaluation.hpp"
#include "esr/motdrl.hpp"

namespace esr {

namespace {

struct RunOutput {
  std::vector<ExperimentRecord> records;
  std::vector<ZTable> final_tables;
};

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.10g", value);
  return buffer;
}

std::string join_names(const std::vector<std::size_t>& indices, const EnvironmentSpec& env) {
  std::string out;
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (k) out += ';';
    out += env.arms.at(indices[k]).name;
  }
  return out;
}

nlohmann::json names_json(const std::vector<std::size_t>& indices, const EnvironmentSpec& env) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t index : indices) out.push_back(env.arms.at(index).name);
  return out;
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error("failed while writing '" + path.string() + "'");
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("missing run artifact '" + path.string() + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed run artifact '" + path.string() + "': " + e.what());
  }
}

RunOutput execute_run(const EnvironmentSpec& env, const ExperimentConfig& config,
                      std::span<const DiscreteDistribution> truth, std::size_t run_id) {
  RunOptions options;
  options.episodes = config.episodes;
  options.beta = config.beta;
  options.seed = config.seed;
  options.run_id = run_id;
  options.snapshot_interval = config.snapshot_interval;
  options.criterion = config.criterion;

  LearnerState final_state(env, config.beta, esr_cardinality_hint(env), config.criterion);
  const auto snapshots = run(env, options, &final_state);

  RunOutput output;
  output.records.reserve(snapshots.size());
  for (const auto& snapshot : snapshots) {
    std::vector<DiscreteDistribution> found;
    for (std::size_t arm : snapshot.solution_set) found.push_back(snapshot.distributions[arm]);
    const CoverageResult coverage = coverage_ratio(found, truth, config.epsilon);
    output.records.push_back(ExperimentRecord{run_id, snapshot.episode, coverage.precision,
                                              coverage.recall, coverage.f1,
                                              snapshot.solution_set});
  }
  output.final_tables = final_state.tables();
  return output;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (episodes < 1) throw Error("episodes must be at least 1");
  if (runs < 1) throw Error("runs must be at least 1");
  if (beta < 1) throw Error("beta must be at least 1");
  if (snapshot_interval < 1) throw Error("snapshot interval must be at least 1");
  if (!(epsilon > 0.0)) throw Error("epsilon must be positive");
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  return {{"environment", config.environment},
          {"episodes", config.episodes},
          {"runs", config.runs},
          {"beta", config.beta},
          {"epsilon", config.epsilon},
          {"seed", config.seed},
          {"snapshot_interval", config.snapshot_interval},
          {"criterion", std::string(to_string(config.criterion))}};
}

std::optional<std::uint64_t> ExperimentResult::first_perfect_episode() const {
  for (const auto& point : curve) {
    if (point.mean_f1 >= 1.0) return point.episode;
  }
  return std::nullopt;
}

ExperimentResult run_experiment(const EnvironmentSpec& env, const ExperimentConfig& config) {
  config.validate();
  std::vector<DiscreteDistribution> truth;
  for (std::size_t arm : ground_truth_esr_set(env)) truth.push_back(exact_distribution(env, arm));

  std::vector<RunOutput> outputs(config.runs);
  std::vector<std::exception_ptr> failures(config.runs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < config.runs; r = next++) {
      try {
        outputs[r] = execute_run(env, config, truth, r);
      } catch (...) {
        failures[r] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads ? config.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, config.runs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  ExperimentResult result;
  for (auto& output : outputs) {
    result.records.insert(result.records.end(), output.records.begin(), output.records.end());
    result.final_tables.push_back(std::move(output.final_tables));
  }
  const std::size_t snapshots = outputs.front().records.size();
  for (std::size_t k = 0; k < snapshots; ++k) {
    CurvePoint point;
    point.episode = outputs.front().records[k].episode;
    for (const auto& output : outputs) {
      point.mean_precision += output.records[k].precision;
      point.mean_recall += output.records[k].recall;
      point.mean_f1 += output.records[k].f1;
    }
    const double n = static_cast<double>(outputs.size());
    point.mean_precision /= n;
    point.mean_recall /= n;
    point.mean_f1 /= n;
    result.curve.push_back(point);
  }
  return result;
}

void write_experiment(const ExperimentResult& result, const EnvironmentSpec& env,
                      const ExperimentConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output, ec);
  if (ec || !std::filesystem::is_directory(config.output)) {
    throw Error("cannot create output directory '" + config.output.string() + "'");
  }

  const auto records_path = config.output / "records.csv";
  auto records = open_for_writing(records_path);
  records << "run,episode,precision,recall,f1,solution_set\n";
  for (const auto& record : result.records) {
    records << record.run << ',' << record.episode << ',' << format_number(record.precision)
            << ',' << format_number(record.recall) << ',' << format_number(record.f1) << ','
            << join_names(record.solution_set, env) << '\n';
  }
  finish(records, records_path);

  const auto curve_path = config.output / "mean_f1.csv";
  auto curve = open_for_writing(curve_path);
  curve << "episode,mean_precision,mean_recall,mean_f1\n";
  for (const auto& point : result.curve) {
    curve << point.episode << ',' << format_number(point.mean_precision) << ','
          << format_number(point.mean_recall) << ',' << format_number(point.mean_f1) << '\n';
  }
  finish(curve, curve_path);

  nlohmann::json runs = nlohmann::json::array();
  for (std::size_t r = 0; r < result.final_tables.size(); ++r) {
    nlohmann::json tables = nlohmann::json::object();
    for (std::size_t arm = 0; arm < result.final_tables[r].size(); ++arm) {
      tables[env.arms[arm].name] = ztable_to_json(result.final_tables[r][arm]);
    }
    runs.push_back({{"run", r}, {"tables", std::move(tables)}});
  }
  nlohmann::json arm_names = nlohmann::json::array();
  for (const auto& arm : env.arms) arm_names.push_back(arm.name);
  const auto dist_path = config.output / "final_distributions.json";
  auto dists = open_for_writing(dist_path);
  dists << nlohmann::json{{"environment", env.name}, {"arms", arm_names}, {"runs", runs}}.dump(1)
        << '\n';
  finish(dists, dist_path);

  nlohmann::json metadata = {{"config", config_to_json(config)},
                             {"environment", serialize_environment(env)},
                             {"true_esr_set", names_json(ground_truth_esr_set(env), env)},
                             {"esr_set_cardinality", esr_cardinality_hint(env)}};
  const auto first = result.first_perfect_episode();
  metadata["first_perfect_episode"] = first ? nlohmann::json(*first) : nlohmann::json(nullptr);
  if (!result.curve.empty()) metadata["final_mean_f1"] = result.curve.back().mean_f1;
  const auto meta_path = config.output / "metadata.json";
  auto meta = open_for_writing(meta_path);
  meta << metadata.dump(2) << '\n';
  finish(meta, meta_path);
}

AnalysisReport analyze(const EnvironmentSpec& env) {
  const auto exact = exact_distributions(env);
  AnalysisReport report;
  report.esr_set_cdf = esr_set(exact, Criterion::cdf);
  report.esr_set_pdf = esr_set(exact, Criterion::pdf);
  report.fsd_undominated = fsd_undominated_set(exact);
  report.pareto_front = pareto_front_of_expectations(std::span<const DiscreteDistribution>(exact));
  const std::size_t n = exact.size();
  report.cdf_verdicts.assign(n, std::vector<DominanceVerdict>(n, DominanceVerdict::identical));
  report.pdf_verdicts = report.cdf_verdicts;
  for (std::size_t i = 0; i < n; ++i) {
    report.expectations.push_back(exact[i].mean());
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      report.cdf_verdicts[i][j] = compare(exact[i], exact[j], Criterion::cdf);
      report.pdf_verdicts[i][j] = compare(exact[i], exact[j], Criterion::pdf);
    }
  }
  return report;
}

nlohmann::json report_to_json(const AnalysisReport& report, const EnvironmentSpec& env) {
  auto verdict_matrix = [&](const std::vector<std::vector<DominanceVerdict>>& verdicts) {
    nlohmann::json rows = nlohmann::json::object();
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      nlohmann::json row = nlohmann::json::object();
      for (std::size_t j = 0; j < verdicts[i].size(); ++j) {
        row[env.arms[j].name] = std::string(to_string(verdicts[i][j]));
      }
      rows[env.arms[i].name] = std::move(row);
    }
    return rows;
  };
  nlohmann::json expectations = nlohmann::json::object();
  for (std::size_t i = 0; i < report.expectations.size(); ++i) {
    expectations[env.arms[i].name] = report.expectations[i];
  }
  return {{"environment", env.name},
          {"esr_set", {{"cdf", names_json(report.esr_set_cdf, env)},
                       {"pdf", names_json(report.esr_set_pdf, env)}}},
          {"fsd_undominated_set", names_json(report.fsd_undominated, env)},
          {"pareto_front", names_json(report.pareto_front, env)},
          {"expectations", std::move(expectations)},
          {"verdicts", {{"cdf", verdict_matrix(report.cdf_verdicts)},
                        {"pdf", verdict_matrix(report.pdf_verdicts)}}}};
}

void export_distribution(const std::filesystem::path& run_directory, const std::string& arm,
                         std::size_t run, const std::filesystem::path& output_directory) {
  const auto document = read_json(run_directory / "final_distributions.json");
  const auto& runs = document.at("runs");
  const auto run_it = std::find_if(runs.begin(), runs.end(), [&](const nlohmann::json& entry) {
    return entry.at("run").get<std::size_t>() == run;
  });
  if (run_it == runs.end()) throw Error("run " + std::to_string(run) + " not found in artifacts");
  const auto& tables = run_it->at("tables");

  std::string arm_name = arm;
  if (!tables.contains(arm_name)) {
    // Accept a zero-based arm index as well.
    const auto& names = document.at("arms");
    char* end = nullptr;
    const unsigned long index = std::strtoul(arm.c_str(), &end, 10);
    if (arm.empty() || *end != '\0' || index >= names.size()) {
      throw Error("arm '" + arm + "' not found in artifacts");
    }
    arm_name = names[index].get<std::string>();
  }
  const ZTable table = ztable_from_json(tables.at(arm_name));
  const ReturnLattice& lattice = table.lattice();

  std::error_code ec;
  std::filesystem::create_directories(output_directory, ec);
  if (ec || !std::filesystem::is_directory(output_directory)) {
    throw Error("cannot create output directory '" + output_directory.string() + "'");
  }
  std::string header;
  for (std::size_t d = 0; d < lattice.objectives(); ++d) header += "r" + std::to_string(d) + ",";

  const auto pdf_path = output_directory / (arm_name + "_pdf.csv");
  const auto cdf_path = output_directory / (arm_name + "_cdf.csv");
  auto pdf = open_for_writing(pdf_path);
  auto cdf = open_for_writing(cdf_path);
  pdf << header << "pdf\n";
  cdf << header << "cdf\n";
  for (std::size_t flat = 0; flat < lattice.cell_count(); ++flat) {
    const RewardVector point = lattice.point_at(flat);
    std::string prefix;
    for (double v : point) prefix += format_number(v) + ",";
    pdf << prefix << format_number(table.pdf(point)) << '\n';
    cdf << prefix << format_number(table.cdf(point)) << '\n';
  }
  finish(pdf, pdf_path);
  finish(cdf, cdf_path);
}

}  // namespace esr
