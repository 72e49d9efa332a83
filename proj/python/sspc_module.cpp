#include "sspc/errors.hpp"
#include "sspc/experiment.hpp"
#include "sspc/numerics.hpp"
#include "sspc/parametric_nlp.hpp"
#include "sspc/problems.hpp"
#include "sspc/sspc_solver.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace sspc;

PYBIND11_MODULE(_sspc, m) {
  m.doc() = "Semismooth predictor-corrector MPC";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<SingularMatrix>(m, "SingularMatrix", base.ptr());
  py::register_exception<NoConvergence>(m, "NoConvergence", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());

  m.def("fb", &fb, py::arg("a"), py::arg("b"));

  m.def(
      "solve_dare",
      [](const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R, double tol) {
        const auto r = solve_dare(A, B, Q, R, tol);
        return py::make_tuple(r.P, r.K, r.iterations, r.residual);
      },
      py::arg("A"), py::arg("B"), py::arg("Q"), py::arg("R"), py::arg("tol") = 1e-12,
      "Returns (P, K, iterations, residual).");

  py::class_<PrimalDualPoint>(m, "PrimalDualPoint")
      .def(py::init([](const Vector& w, const Vector& lambda, const Vector& v) {
             return PrimalDualPoint{w, lambda, v};
           }),
           py::arg("w"), py::arg("lam"), py::arg("v"))
      .def_static("zeros", &PrimalDualPoint::zeros)
      .def_readwrite("w", &PrimalDualPoint::w)
      .def_readwrite("lam", &PrimalDualPoint::lambda)
      .def_readwrite("v", &PrimalDualPoint::v)
      .def("stacked", &PrimalDualPoint::stacked);

  py::class_<SspcConfig>(m, "SspcConfig")
      .def(py::init<>())
      .def_readwrite("ell", &SspcConfig::ell)
      .def_readwrite("use_predictor", &SspcConfig::use_predictor)
      .def_readwrite("regularization_delta", &SspcConfig::regularization_delta)
      .def_readwrite("oracle_tol", &SspcConfig::oracle_tol)
      .def_readwrite("oracle_max_iter", &SspcConfig::oracle_max_iter);

  py::class_<Problem>(m, "Problem")
      .def_readonly("name", &Problem::name)
      .def_readonly("default_x0", &Problem::default_x0)
      .def_property_readonly("n", [](const Problem& p) { return p.nlp->n; })
      .def_property_readonly("m", [](const Problem& p) { return p.nlp->m; })
      .def_property_readonly("q", [](const Problem& p) { return p.nlp->q; })
      .def_property_readonly("n_p", [](const Problem& p) { return p.nlp->n_p; })
      .def("zero_point", [](const Problem& p) {
        return PrimalDualPoint::zeros(p.nlp->n, p.nlp->m, p.nlp->q);
      });

  m.def("problem_names", &problem_names);
  m.def(
      "make_problem",
      [](const std::string& name, std::optional<int> horizon, std::optional<double> tau) {
        return make_problem(name, ProblemOptions{horizon, tau});
      },
      py::arg("name"), py::arg("horizon") = py::none(), py::arg("tau") = py::none());

  m.def(
      "residual_norm",
      [](const Problem& p, const PrimalDualPoint& z, const Vector& param) {
        return residual(*p.nlp, z, param).norm2;
      },
      py::arg("problem"), py::arg("z"), py::arg("p"));

  m.def(
      "step",
      [](const Problem& p, const SspcConfig& cfg, const PrimalDualPoint& z, const Vector& p_prev,
         const Vector& p_new) {
        auto r = step(*p.nlp, cfg, z, p_prev, p_new);
        return py::make_tuple(r.z, r.diagnostics.residual_after_each_corrector);
      },
      py::arg("problem"), py::arg("cfg"), py::arg("z"), py::arg("p_prev"), py::arg("p_new"),
      "Returns (z, residual after each corrector).");

  m.def(
      "solve_to_convergence",
      [](const Problem& p, const SspcConfig& cfg, const PrimalDualPoint& z0, const Vector& param) {
        auto r = solve_to_convergence(*p.nlp, cfg, z0, param);
        return py::make_tuple(r.z, r.iterations, r.residual);
      },
      py::arg("problem"), py::arg("cfg"), py::arg("z0"), py::arg("p"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readonly("problem", &ExperimentConfig::problem)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_property(
          "ell", [](const ExperimentConfig& c) { return c.solver.ell; },
          [](ExperimentConfig& c, int ell) { c.solver.ell = ell; })
      .def_property(
          "steps", [](const ExperimentConfig& c) { return c.sim.steps; },
          [](ExperimentConfig& c, int steps) { c.sim.steps = steps; });

  m.def("load_config", &load_config, py::arg("path"));
  m.def(
      "parse_config",
      [](const std::string& text) { return parse_config(nlohmann::json::parse(text)); },
      py::arg("json_text"));
  m.def("simulate", &run_simulate, py::arg("cfg"), py::arg("out_dir"),
        "Writes trace.csv, summary.txt and config-echo.json; returns the exit code.");
  m.def(
      "sweep_ell",
      [](const ExperimentConfig& cfg, const std::vector<int>& ells,
         const std::filesystem::path& out) {
        int code = 0;
        for (const auto& e : run_sweep_ell(cfg, ells, out)) code = std::max(code, e.exit_code);
        return code;
      },
      py::arg("cfg"), py::arg("ells"), py::arg("out_dir"));
  m.def(
      "check_derivatives",
      [](const ExperimentConfig& cfg) {
        std::ostringstream out;
        const int code = run_check_derivatives(cfg, out);
        return py::make_tuple(code == 0, out.str());
      },
      py::arg("cfg"), "Returns (passed, report text).");
}
