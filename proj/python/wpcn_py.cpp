#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wpcn/config.hpp"
#include "wpcn/error.hpp"
#include "wpcn/experiments.hpp"
#include "wpcn/maxmin.hpp"
#include "wpcn/oracle.hpp"
#include "wpcn/output.hpp"
#include "wpcn/scalar.hpp"
#include "wpcn/sum_solvers.hpp"
#include "wpcn/units.hpp"

namespace py = pybind11;
using namespace wpcn;

namespace {

NetworkInstance coefficients(const std::vector<double>& alpha, const std::vector<double>& harvest_rate,
                             std::optional<std::vector<double>> e_budget, std::optional<double> e_max) {
  const std::vector<double> eb = e_budget.value_or(std::vector<double>(alpha.size(), 0.0));
  return NetworkInstance::from_coefficients(alpha, harvest_rate, eb, e_max);
}

ProblemKind kind_or_throw(const std::string& text) {
  const auto k = parse_problem_kind(text);
  if (!k) throw ConfigError("unknown problem '" + text + "'");
  return *k;
}

}  // namespace

PYBIND11_MODULE(_wpcn, m) {
  m.doc() = "Throughput solvers for harvest-then-transmit networks";
  m.attr("__version__") = "0.1.0";

  auto base = py::register_exception<Error>(m, "WpcnError", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<InvalidAllocation>(m, "InvalidAllocation", base.ptr());

  py::class_<Allocation>(m, "Allocation")
      .def_readonly("tau0", &Allocation::tau0)
      .def_readonly("tau", &Allocation::tau)
      .def_readonly("energy", &Allocation::energy)
      .def_readonly("shared_energy", &Allocation::shared_energy);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("allocation", &SolveReport::allocation)
      .def_readonly("per_user_rate", &SolveReport::per_user_rate)
      .def_readonly("sum_rate", &SolveReport::sum_rate)
      .def_readonly("min_rate", &SolveReport::min_rate)
      .def_readonly("jfi", &SolveReport::jfi)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("residual", &SolveReport::residual)
      .def_readonly("objective_trace", &SolveReport::objective_trace)
      .def_readonly("converged", &SolveReport::converged)
      .def_readonly("notes", &SolveReport::notes);

  py::class_<NetworkInstance>(m, "NetworkInstance")
      .def_static("from_coefficients", &coefficients, py::arg("alpha"), py::arg("harvest_rate"),
                  py::arg("e_budget") = py::none(), py::arg("e_max") = py::none())
      .def_property_readonly("size", &NetworkInstance::size)
      .def_property_readonly("alphas", &NetworkInstance::alphas)
      .def_property_readonly("harvest_rates", &NetworkInstance::harvest_rates)
      .def_property_readonly("e_max", &NetworkInstance::e_max);

  py::class_<HeteroInstance>(m, "HeteroInstance")
      .def(py::init<std::vector<double>, std::vector<double>, std::vector<double>, double>(), py::arg("gamma"),
           py::arg("harvest_rate"), py::arg("theta"), py::arg("e_max"))
      .def_property_readonly("harvesters", &HeteroInstance::harvesters)
      .def_property_readonly("legacy", &HeteroInstance::legacy);

  py::class_<P4Thresholds>(m, "P4Thresholds")
      .def_readonly("lower", &P4Thresholds::lower)
      .def_readonly("upper", &P4Thresholds::upper);

  m.def("rate", &rate, py::arg("energy"), py::arg("time"), py::arg("alpha"));
  m.def("jain_index", [](const std::vector<double>& r) { return jain_index(r).index; });
  m.def("f_transcendental", &f_transcendental);
  m.def("solve_f_equals", [](double target) { return solve_f_equals(target).root; }, py::arg("target"));

  m.def("solve_p1", [](const NetworkInstance& n) { return solve_p1(n); });
  m.def("solve_p2", [](const NetworkInstance& n) { return solve_p2(n); });
  m.def("solve_p3", &solve_p3);
  m.def("solve_p4", &solve_p4);
  m.def("p4_thresholds", &p4_thresholds);
  m.def("solve_p1_maxmin", [](const NetworkInstance& n) { return solve_p1_maxmin(n); });
  m.def("solve_p2_maxmin", [](const NetworkInstance& n) { return solve_p2_maxmin(n); });
  m.def("solve_p3_maxmin", [](const NetworkInstance& n) { return solve_p3_maxmin(n); });
  m.def("solve_p4_maxmin", [](const HeteroInstance& n) { return solve_p4_maxmin(n); });
  m.def("grid_best", [](const std::string& problem, const NetworkInstance& n) {
    return grid_best(kind_or_throw(problem), n);
  });

  m.def("figure_names", &figure_names);
  // Runs a preset and returns the sweep CSV.
  m.def(
      "figure_csv",
      [](const std::string& name, std::optional<std::size_t> realizations, std::optional<std::uint64_t> seed) {
        ExperimentSpec spec = figure_preset(name);
        if (realizations) spec.realizations = *realizations;
        if (seed) spec.seed = *seed;
        py::gil_scoped_release release;
        return sweep_csv(run_sweep(spec));
      },
      py::arg("name"), py::arg("realizations") = py::none(), py::arg("seed") = py::none());
  m.def(
      "sweep_config_csv",
      [](const std::string& toml_text, const std::vector<std::string>& overrides) {
        const ExperimentSpec spec = experiment_from_config(parse_config(toml_text, overrides, "<string>"));
        py::gil_scoped_release release;
        return sweep_csv(run_sweep(spec));
      },
      py::arg("toml_text"), py::arg("overrides") = std::vector<std::string>{});
}
