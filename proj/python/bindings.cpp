#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "esr/dominance.hpp"
#include "esr/environment.hpp"
#include "esr/error.hpp"
#include "esr/evaluation.hpp"
#include "esr/experiment.hpp"
#include "esr/motdrl.hpp"
#include "esr/utility.hpp"

namespace py = pybind11;

namespace {

std::vector<esr::DiscreteDistribution> gather(const esr::EnvironmentSpec& env,
                                              const std::vector<std::size_t>& arms) {
  std::vector<esr::DiscreteDistribution> out;
  for (std::size_t arm : arms) out.push_back(esr::exact_distribution(env, arm));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Distributional multi-objective bandit learning under ESR";

  auto error = py::register_exception<esr::Error>(m, "EsrError", PyExc_RuntimeError);
  auto validation = py::register_exception<esr::ValidationError>(m, "ValidationError", error.ptr());
  py::register_exception<esr::OutOfRangeError>(m, "OutOfRangeError", error.ptr());
  py::register_exception<esr::QuantizationError>(m, "QuantizationError", error.ptr());
  py::register_exception<esr::EmptyDistributionError>(m, "EmptyDistributionError", error.ptr());
  py::register_exception<esr::DimensionMismatchError>(m, "DimensionMismatchError", error.ptr());
  py::register_exception<esr::ProbabilitySumError>(m, "ProbabilitySumError", validation.ptr());
  py::register_exception<esr::OffLatticeRewardError>(m, "OffLatticeRewardError", validation.ptr());
  py::register_exception<esr::DuplicateArmError>(m, "DuplicateArmError", validation.ptr());
  py::register_exception<esr::EsrSetMismatchError>(m, "EsrSetMismatchError", validation.ptr());

  py::class_<esr::ReturnLattice>(m, "ReturnLattice")
      .def(py::init<double, double, double, std::size_t>(), py::arg("r_min"), py::arg("r_max"),
           py::arg("resolution") = 1.0, py::arg("objectives") = 2)
      .def_property_readonly("r_min", &esr::ReturnLattice::r_min)
      .def_property_readonly("r_max", &esr::ReturnLattice::r_max)
      .def_property_readonly("resolution", &esr::ReturnLattice::resolution)
      .def_property_readonly("objectives", &esr::ReturnLattice::objectives)
      .def_property_readonly("points_per_axis", &esr::ReturnLattice::points_per_axis)
      .def_property_readonly("cell_count", &esr::ReturnLattice::cell_count)
      .def("point_at", &esr::ReturnLattice::point_at)
      .def(py::self == py::self);

  py::class_<esr::DiscreteDistribution>(m, "DiscreteDistribution")
      .def(py::init([](const esr::ReturnLattice& lattice,
                       const std::vector<std::pair<esr::RewardVector, double>>& atoms) {
             std::vector<esr::Atom> list;
             for (const auto& [point, mass] : atoms) list.push_back({point, mass});
             return esr::DiscreteDistribution(lattice, std::move(list));
           }),
           py::arg("lattice"), py::arg("atoms"))
      .def_static("point_mass", &esr::DiscreteDistribution::point_mass)
      .def_property_readonly("dimension", &esr::DiscreteDistribution::dimension)
      .def("__len__", &esr::DiscreteDistribution::size)
      .def("support_point", &esr::DiscreteDistribution::support_point)
      .def("mass", &esr::DiscreteDistribution::mass)
      .def("pmf", [](const esr::DiscreteDistribution& d, const esr::RewardVector& v) { return d.pmf(v); })
      .def("cdf", [](const esr::DiscreteDistribution& d, const esr::RewardVector& v) { return d.cdf(v); })
      .def("pareto_survival", [](const esr::DiscreteDistribution& d, const esr::RewardVector& v) {
        return d.pareto_survival(v);
      })
      .def("mean", &esr::DiscreteDistribution::mean)
      .def("shifted", &esr::DiscreteDistribution::shifted, py::arg("bonus"));

  py::class_<esr::ZTable>(m, "ZTable")
      .def(py::init<esr::ReturnLattice>())
      .def("update", [](esr::ZTable& t, const esr::RewardVector& r) { t.update(r); })
      .def_property_readonly("pulls", &esr::ZTable::pulls)
      .def_property_readonly("lattice", &esr::ZTable::lattice)
      .def("count", [](const esr::ZTable& t, const esr::RewardVector& v) { return t.count(v); })
      .def("pdf", [](const esr::ZTable& t, const esr::RewardVector& v) { return t.pdf(v); })
      .def("cdf", [](const esr::ZTable& t, const esr::RewardVector& v) { return t.cdf(v); })
      .def("expectation", &esr::ZTable::expectation)
      .def("distribution", &esr::ZTable::distribution)
      .def("shifted_view", &esr::ZTable::shifted_view, py::arg("bonus"))
      .def("to_json", [](const esr::ZTable& t) { return esr::ztable_to_json(t).dump(); })
      .def_static("from_json", [](const std::string& text) {
        return esr::ztable_from_json(nlohmann::json::parse(text));
      })
      .def(py::self == py::self);

  m.def("ks_distance", &esr::ks_distance);
  m.def("pareto_dominates", [](const esr::RewardVector& a, const esr::RewardVector& b) {
    return esr::pareto_dominates(a, b);
  });
  m.def("fsd_dominates_scalar", &esr::fsd_dominates_scalar);
  m.def(
      "esr_dominates",
      [](const esr::DiscreteDistribution& a, const esr::DiscreteDistribution& b,
         const std::string& criterion) {
        return esr::esr_dominates(a, b, esr::criterion_from_string(criterion));
      },
      py::arg("a"), py::arg("b"), py::arg("criterion") = "cdf");
  m.def(
      "compare",
      [](const esr::DiscreteDistribution& a, const esr::DiscreteDistribution& b,
         const std::string& criterion) {
        return std::string(esr::to_string(esr::compare(a, b, esr::criterion_from_string(criterion))));
      },
      py::arg("a"), py::arg("b"), py::arg("criterion") = "cdf");
  m.def(
      "esr_set",
      [](const std::vector<esr::DiscreteDistribution>& candidates, const std::string& criterion) {
        return esr::esr_set(candidates, esr::criterion_from_string(criterion));
      },
      py::arg("candidates"), py::arg("criterion") = "cdf");
  m.def("fsd_undominated_set", [](const std::vector<esr::DiscreteDistribution>& candidates) {
    return esr::fsd_undominated_set(candidates);
  });
  m.def("pareto_front_of_expectations",
        [](const std::vector<esr::DiscreteDistribution>& candidates) {
          return esr::pareto_front_of_expectations(
              std::span<const esr::DiscreteDistribution>(candidates));
        });

  py::class_<esr::MonotoneUtility>(m, "MonotoneUtility")
      .def_static("separable", &esr::MonotoneUtility::separable, py::arg("weights"),
                  py::arg("powers"), py::arg("origin") = esr::RewardVector{})
      .def_static("linear", &esr::MonotoneUtility::linear, py::arg("weights"))
      .def_static("product", &esr::MonotoneUtility::product, py::arg("powers"),
                  py::arg("origin") = esr::RewardVector{})
      .def("__call__", [](const esr::MonotoneUtility& u, const esr::RewardVector& x) { return u(x); })
      .def_property_readonly("cross_partial_nonpositive",
                             &esr::MonotoneUtility::cross_partial_nonpositive)
      .def_property_readonly("weights", &esr::MonotoneUtility::weights)
      .def_property_readonly("powers", &esr::MonotoneUtility::powers)
      .def("__repr__", &esr::MonotoneUtility::describe);
  m.def("sample_monotone_utilities", &esr::sample_monotone_utilities, py::arg("count"),
        py::arg("seed"), py::arg("require_cross_partial_nonpositive"), py::arg("domain"));
  m.def("expected_utility", &esr::expected_utility);
  m.def("utility_of_expectation", &esr::utility_of_expectation);

  py::class_<esr::EnvironmentSpec>(m, "EnvironmentSpec")
      .def_readonly("name", &esr::EnvironmentSpec::name)
      .def_readonly("lattice", &esr::EnvironmentSpec::lattice)
      .def_readonly("true_esr_set", &esr::EnvironmentSpec::true_esr_set)
      .def_property_readonly("arm_names",
                             [](const esr::EnvironmentSpec& env) {
                               std::vector<std::string> out;
                               for (const auto& arm : env.arms) out.push_back(arm.name);
                               return out;
                             })
      .def("arm_index", &esr::EnvironmentSpec::arm_index)
      .def("to_json", [](const esr::EnvironmentSpec& env) {
        return esr::serialize_environment(env).dump();
      });
  m.def("preset", &esr::preset);
  m.def("preset_names", &esr::preset_names);
  m.def("load_environment_text", &esr::load_environment_text);
  m.def("resolve_environment", &esr::resolve_environment);
  m.def("exact_distribution", &esr::exact_distribution);
  m.def("exact_distributions", &esr::exact_distributions);
  m.def("ground_truth_esr_set", &esr::ground_truth_esr_set);
  m.def("sample_arm", [](const esr::EnvironmentSpec& env, std::size_t arm, std::uint64_t seed,
                         std::size_t count) {
    esr::Rng rng(seed);
    std::vector<esr::RewardVector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(esr::sample_arm(env, arm, rng));
    return out;
  }, py::arg("env"), py::arg("arm"), py::arg("seed"), py::arg("count") = 1);

  m.def("ucb_bonus",
        py::overload_cast<std::uint64_t, std::uint64_t, std::size_t, std::size_t>(&esr::ucb_bonus),
        py::arg("total_pulls"), py::arg("arm_pulls"), py::arg("objectives"),
        py::arg("esr_cardinality"));

  py::class_<esr::CoverageResult>(m, "CoverageResult")
      .def_readonly("precision", &esr::CoverageResult::precision)
      .def_readonly("recall", &esr::CoverageResult::recall)
      .def_readonly("f1", &esr::CoverageResult::f1)
      .def_readonly("matched_pairs", &esr::CoverageResult::matched_pairs);
  m.def("coverage_ratio", &esr::coverage_ratio, py::arg("found"), py::arg("truth"),
        py::arg("epsilon") = 0.01);
  m.def("coverage_of_arms",
        [](const esr::EnvironmentSpec& env, const std::vector<std::size_t>& found, double epsilon) {
          return esr::coverage_ratio(gather(env, found), gather(env, esr::ground_truth_esr_set(env)),
                                     epsilon);
        },
        py::arg("env"), py::arg("found"), py::arg("epsilon") = 0.01);

  m.def("analyze_json", [](const esr::EnvironmentSpec& env) {
    return esr::report_to_json(esr::analyze(env), env).dump();
  });

  py::class_<esr::ExperimentRecord>(m, "ExperimentRecord")
      .def_readonly("run", &esr::ExperimentRecord::run)
      .def_readonly("episode", &esr::ExperimentRecord::episode)
      .def_readonly("precision", &esr::ExperimentRecord::precision)
      .def_readonly("recall", &esr::ExperimentRecord::recall)
      .def_readonly("f1", &esr::ExperimentRecord::f1)
      .def_readonly("solution_set", &esr::ExperimentRecord::solution_set);
  py::class_<esr::CurvePoint>(m, "CurvePoint")
      .def_readonly("episode", &esr::CurvePoint::episode)
      .def_readonly("mean_precision", &esr::CurvePoint::mean_precision)
      .def_readonly("mean_recall", &esr::CurvePoint::mean_recall)
      .def_readonly("mean_f1", &esr::CurvePoint::mean_f1);
  py::class_<esr::ExperimentResult>(m, "ExperimentResult")
      .def_readonly("records", &esr::ExperimentResult::records)
      .def_readonly("curve", &esr::ExperimentResult::curve)
      .def_readonly("final_tables", &esr::ExperimentResult::final_tables)
      .def("first_perfect_episode", &esr::ExperimentResult::first_perfect_episode);

  m.def(
      "run_experiment",
      [](const std::string& environment, std::uint64_t episodes, std::size_t runs,
         std::size_t beta, double epsilon, std::uint64_t seed, std::uint64_t snapshot_interval,
         const std::string& criterion, std::size_t threads,
         const std::optional<std::filesystem::path>& out) {
        esr::ExperimentConfig config;
        config.environment = environment;
        config.episodes = episodes;
        config.runs = runs;
        config.beta = beta;
        config.epsilon = epsilon;
        config.seed = seed;
        config.snapshot_interval = snapshot_interval;
        config.criterion = esr::criterion_from_string(criterion);
        config.threads = threads;
        const auto env = esr::resolve_environment(environment);
        esr::ExperimentResult result;
        {
          py::gil_scoped_release release;
          result = esr::run_experiment(env, config);
        }
        if (out) {
          config.output = *out;
          esr::write_experiment(result, env, config);
        }
        return result;
      },
      py::arg("environment") = "momab5", py::arg("episodes") = 200'000, py::arg("runs") = 10,
      py::arg("beta") = 5, py::arg("epsilon") = 0.01, py::arg("seed") = 0,
      py::arg("snapshot_interval") = 1000, py::arg("criterion") = "cdf", py::arg("threads") = 0,
      py::arg("out") = py::none());
}
