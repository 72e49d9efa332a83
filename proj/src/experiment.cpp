#include "sspc/experiment.hpp"

#include "sspc/errors.hpp"
#include "sspc/mpc_runtime.hpp"
#include "sspc/trace_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace sspc {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, std::set<std::string> known) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) throw ConfigError(where + key + ": unknown field");
  }
}

template <typename T>
T field(const json& obj, const std::string& where, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) throw ConfigError(where + key + ": expected a boolean");
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) throw ConfigError(where + key + ": expected an integer");
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError(where + key + ": expected a number");
  } else {
    if (!v.is_string()) throw ConfigError(where + key + ": expected a string");
  }
  return v.get<T>();
}

Vector number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  Vector out(Eigen::Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ConfigError(where + "[" + std::to_string(i) + "]: expected a number");
    }
    out(Eigen::Index(i)) = v[i].get<double>();
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown(doc, "",
                 {"problem", "horizon", "tau_s", "solver", "simulation", "initial_state",
                  "output_dir", "seed", "derivative_points"});
  ExperimentConfig cfg;
  cfg.problem = field<std::string>(doc, "", "problem", cfg.problem);
  const auto& names = problem_names();
  if (std::find(names.begin(), names.end(), cfg.problem) == names.end()) {
    throw ConfigError("problem: unknown problem '" + cfg.problem + "'");
  }
  if (doc.contains("horizon")) {
    cfg.problem_options.horizon = field<int>(doc, "", "horizon", 0);
    if (*cfg.problem_options.horizon < 1) throw ConfigError("horizon: must be >= 1");
  }
  if (doc.contains("tau_s")) {
    cfg.problem_options.tau = field<double>(doc, "", "tau_s", 0.0);
    if (!(*cfg.problem_options.tau > 0.0)) throw ConfigError("tau_s: must be > 0");
  }
  cfg.output_dir = field<std::string>(doc, "", "output_dir", cfg.output_dir);
  {
    const auto seed = field<std::int64_t>(doc, "", "seed", 0);
    if (seed < 0) throw ConfigError("seed: must be >= 0");
    cfg.seed = std::uint64_t(seed);
  }
  cfg.derivative_points = field<int>(doc, "", "derivative_points", cfg.derivative_points);
  if (cfg.derivative_points < 1) throw ConfigError("derivative_points: must be >= 1");

  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    if (!s.is_object()) throw ConfigError("solver: expected an object");
    reject_unknown(s, "solver.",
                   {"ell", "use_predictor", "regularization_delta", "oracle_tol",
                    "oracle_max_iter"});
    auto& sc = cfg.solver;
    sc.ell = field<int>(s, "solver.", "ell", sc.ell);
    sc.use_predictor = field<bool>(s, "solver.", "use_predictor", sc.use_predictor);
    sc.regularization_delta =
        field<double>(s, "solver.", "regularization_delta", sc.regularization_delta);
    sc.oracle_tol = field<double>(s, "solver.", "oracle_tol", sc.oracle_tol);
    sc.oracle_max_iter = field<int>(s, "solver.", "oracle_max_iter", sc.oracle_max_iter);
  }
  try {
    cfg.solver.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }

  if (doc.contains("simulation")) {
    const auto& s = doc.at("simulation");
    if (!s.is_object()) throw ConfigError("simulation: expected an object");
    reject_unknown(s, "simulation.",
                   {"steps", "record_suboptimality", "input_disturbance", "trace_wall_time"});
    cfg.sim.steps = field<int>(s, "simulation.", "steps", cfg.sim.steps);
    cfg.sim.record_suboptimality =
        field<bool>(s, "simulation.", "record_suboptimality", cfg.sim.record_suboptimality);
    cfg.trace_wall_time = field<bool>(s, "simulation.", "trace_wall_time", cfg.trace_wall_time);
    if (s.contains("input_disturbance")) {
      const auto& d = s.at("input_disturbance");
      if (!d.is_array()) throw ConfigError("simulation.input_disturbance: expected an array");
      for (std::size_t k = 0; k < d.size(); ++k) {
        cfg.sim.input_disturbance.push_back(
            number_array(d[k], "simulation.input_disturbance[" + std::to_string(k) + "]"));
      }
    }
  }
  if (cfg.sim.steps < 1) throw ConfigError("simulation.steps: must be >= 1");

  if (doc.contains("initial_state")) {
    const auto& s = doc.at("initial_state");
    if (!s.is_object()) throw ConfigError("initial_state: expected an object");
    reject_unknown(s, "initial_state.", {"values", "angle_unit"});
    if (!s.contains("values")) throw ConfigError("initial_state.values: missing");
    Vector x = number_array(s.at("values"), "initial_state.values");
    const auto unit = field<std::string>(s, "initial_state.", "angle_unit", "rad");
    if (unit != "rad" && unit != "deg") {
      throw ConfigError("initial_state.angle_unit: expected \"rad\" or \"deg\"");
    }
    if (unit == "deg") {
      // Only the attitude angles are converted; rates stay in rad/s.
      if (cfg.problem == "spacecraft")
        for (int i = 3; i < std::min<int>(6, int(x.size())); ++i) x(i) = spacecraft::deg_to_rad(x(i));
    }
    cfg.initial_state = std::move(x);
  }
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  try {
    return parse_config(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["problem"] = cfg.problem;
  if (cfg.problem_options.horizon) j["horizon"] = *cfg.problem_options.horizon;
  if (cfg.problem_options.tau) j["tau_s"] = *cfg.problem_options.tau;
  j["solver"] = {{"ell", cfg.solver.ell},
                 {"use_predictor", cfg.solver.use_predictor},
                 {"regularization_delta", cfg.solver.regularization_delta},
                 {"oracle_tol", cfg.solver.oracle_tol},
                 {"oracle_max_iter", cfg.solver.oracle_max_iter}};
  json dist = json::array();
  for (const auto& d : cfg.sim.input_disturbance) dist.push_back(std::vector<double>(d.begin(), d.end()));
  j["simulation"] = {{"steps", cfg.sim.steps},
                     {"record_suboptimality", cfg.sim.record_suboptimality},
                     {"trace_wall_time", cfg.trace_wall_time},
                     {"input_disturbance", dist}};
  if (cfg.initial_state) {
    j["initial_state"] = {
        {"values", std::vector<double>(cfg.initial_state->begin(), cfg.initial_state->end())},
        {"angle_unit", "rad"}};
  }
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  j["derivative_points"] = cfg.derivative_points;
  return j;
}

SimSummary summarize(const SimTrace& trace, const OcpSpec& ocp) {
  SimSummary s;
  s.records = int(trace.records.size());
  s.abort_reason = trace.abort_reason;
  s.max_abs_state = Vector::Zero(trace.n_x);
  s.max_abs_input = Vector::Zero(trace.n_u);
  const std::vector<double> milestones{1e-4, 1e-6, 1e-8, 1e-10};
  for (double m : milestones) s.residual_milestones.emplace_back(m, std::nullopt);
  double wall_sum = 0.0;
  for (const auto& r : trace.records) {
    s.max_violation = std::max(s.max_violation, r.max_violation);
    s.max_abs_state = s.max_abs_state.cwiseMax(r.x.cwiseAbs());
    s.max_abs_input = s.max_abs_input.cwiseMax(r.u.cwiseAbs());
    s.closed_loop_cost += ocp.stage_cost(r.x, r.u);
    for (auto& [level, when] : s.residual_milestones)
      if (!when && r.residual <= level) when = r.t;
    if (!s.steps_to_residual_1e10 && r.residual <= 1e-10) s.steps_to_residual_1e10 = r.k;
    s.max_wall_s = std::max(s.max_wall_s, r.step_wall_s);
    wall_sum += r.step_wall_s;
  }
  if (!trace.records.empty()) {
    s.final_state = trace.records.back().x;
    s.final_state_norm_inf = s.final_state.cwiseAbs().maxCoeff();
    s.mean_wall_s = wall_sum / double(trace.records.size());
  }
  return s;
}

namespace {

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? " " : "") + format_double(v(i));
  return out;
}

}  // namespace

void write_summary(const SimSummary& s, std::ostream& out) {
  out << "records = " << s.records << '\n';
  out << "status = " << (s.abort_reason ? "aborted: " + *s.abort_reason : "completed") << '\n';
  out << "final_state = " << join(s.final_state) << '\n';
  out << "final_state_norm_inf = " << format_double(s.final_state_norm_inf) << '\n';
  out << "max_constraint_violation = " << format_double(s.max_violation) << '\n';
  out << "max_abs_state = " << join(s.max_abs_state) << '\n';
  out << "max_abs_input = " << join(s.max_abs_input) << '\n';
  out << "closed_loop_cost = " << format_double(s.closed_loop_cost) << '\n';
  for (const auto& [level, when] : s.residual_milestones) {
    out << "first_t_residual_le_" << format_double(level) << " = "
        << (when ? format_double(*when) : std::string("never")) << '\n';
  }
  out << "max_step_wall_s = " << format_double(s.max_wall_s) << '\n';
  out << "mean_step_wall_s = " << format_double(s.mean_wall_s) << '\n';
}

SimulationRun run_closed_loop(const ExperimentConfig& cfg) {
  Problem problem = make_problem(cfg.problem, cfg.problem_options);
  if (!problem.ocp || !problem.plant || !problem.layout) {
    throw ConfigError("problem '" + cfg.problem + "' has no plant model; use the solve command");
  }
  const Vector x0 = cfg.initial_state.value_or(problem.default_x0);
  if (x0.size() != problem.layout->n_x) {
    throw ConfigError("initial_state.values: expected " + std::to_string(problem.layout->n_x) +
                      " entries, got " + std::to_string(x0.size()));
  }
  auto compensator = init_compensator(problem.nlp, *problem.layout, cfg.solver, std::nullopt, x0);
  SimulationRun run;
  run.trace = simulate(*problem.plant, *problem.ocp, compensator, cfg.sim);
  run.summary = summarize(run.trace, *problem.ocp);
  run.exit_code = run.trace.abort_reason ? 2 : 0;
  return run;
}

namespace {

void write_run_files(const ExperimentConfig& cfg, const SimulationRun& run,
                     const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "trace.csv");
    write_trace_csv(run.trace, out, cfg.trace_wall_time);
  }
  {
    std::ofstream out(dir / "summary.txt");
    write_summary(run.summary, out);
  }
  std::ofstream out(dir / "config-echo.json");
  out << std::setw(2) << config_to_json(cfg) << '\n';
}

}  // namespace

int run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir) {
  const auto run = run_closed_loop(cfg);
  write_run_files(cfg, run, out_dir);
  return run.exit_code;
}

std::vector<SweepEntry> run_sweep_ell(const ExperimentConfig& cfg, const std::vector<int>& ells,
                                      const std::filesystem::path& out_dir) {
  if (ells.empty()) throw ConfigError("sweep-ell: list of ell values is empty");
  std::filesystem::create_directories(out_dir);
  std::vector<SweepEntry> entries;
  for (int ell : ells) {
    ExperimentConfig member = cfg;
    member.solver.ell = ell;
    member.solver.validate();
    SweepEntry entry{ell, {}, 0};
    try {
      const auto run = run_closed_loop(member);
      write_run_files(member, run, out_dir / ("ell_" + std::to_string(ell)));
      entry.summary = run.summary;
      entry.exit_code = run.exit_code;
    } catch (const Error& e) {
      entry.summary.abort_reason = e.what();
      entry.exit_code = 2;
    }
    entries.push_back(std::move(entry));
  }
  std::ofstream metrics(out_dir / "metrics.csv");
  metrics << "ell,steps_to_residual_1e-10,max_violation,closed_loop_cost\n";
  for (const auto& e : entries) {
    metrics << e.ell << ','
            << (e.summary.steps_to_residual_1e10 ? std::to_string(*e.summary.steps_to_residual_1e10)
                                                 : std::string())
            << ',' << format_double(e.summary.max_violation) << ','
            << format_double(e.summary.closed_loop_cost) << '\n';
  }
  return entries;
}

int run_check_derivatives(const ExperimentConfig& cfg, std::ostream& out) {
  const Problem problem = make_problem(cfg.problem, cfg.problem_options);
  const auto report =
      check_derivatives(*problem.nlp, problem.sampler, cfg.derivative_points, cfg.seed);
  out << "problem " << problem.name << ", " << cfg.derivative_points << " points, seed "
      << cfg.seed << '\n';
  for (const auto& b : report.blocks) {
    out << (b.pass ? "PASS " : "FAIL ") << std::left << std::setw(28) << b.block
        << " max_abs_err=" << format_double(b.max_abs_error)
        << " worst_ratio=" << format_double(b.worst_ratio) << " at point " << b.worst_point
        << " entry (" << b.worst_row << "," << b.worst_col << ")\n";
  }
  out << (report.pass ? "all derivative checks passed" : "derivative check FAILED") << '\n';
  return report.pass ? 0 : 1;
}

int run_solve(const ExperimentConfig& cfg, std::ostream& out) {
  const Problem problem = make_problem(cfg.problem, cfg.problem_options);
  const Vector p = cfg.initial_state.value_or(problem.default_x0);
  if (p.size() != problem.nlp->n_p) {
    throw ConfigError("initial_state.values: expected " + std::to_string(problem.nlp->n_p) +
                      " entries");
  }
  const auto z0 = PrimalDualPoint::zeros(problem.nlp->n, problem.nlp->m, problem.nlp->q);
  try {
    const auto solved = solve_to_convergence(*problem.nlp, cfg.solver, z0, p);
    out << "iterations = " << solved.iterations << '\n';
    out << "residual = " << format_double(solved.residual) << '\n';
    out << "w = " << join(solved.z.w) << '\n';
    out << "lambda = " << join(solved.z.lambda) << '\n';
    out << "v = " << join(solved.z.v) << '\n';
    if (problem.layout) out << "u0 = " << join(extract_control(*problem.layout, solved.z)) << '\n';
    return 0;
  } catch (const NoConvergence& e) {
    out << "no convergence: residual = " << format_double(e.residual) << '\n';
    return 2;
  }
}

}  // namespace sspc
