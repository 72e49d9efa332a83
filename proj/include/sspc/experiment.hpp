#pragma once

#include "sspc/closed_loop_sim.hpp"
#include "sspc/problems.hpp"
#include "sspc/sspc_solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace sspc {

/// Parsed experiment file. Angles in `initial_state` are stored in radians
/// regardless of the unit the file used.
struct ExperimentConfig {
  std::string problem = "spacecraft";
  ProblemOptions problem_options;
  SspcConfig solver;
  SimConfig sim;
  bool trace_wall_time = false;
  std::optional<Vector> initial_state;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  int derivative_points = 100;
};

/// Throws ConfigError naming the offending field.
ExperimentConfig parse_config(const nlohmann::json& doc);
/// Reads and parses a JSON file; parse errors carry line and column.
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON form of a config (angles reported in radians).
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct SimSummary {
  Vector final_state;
  double final_state_norm_inf = 0.0;
  double max_violation = 0.0;
  Vector max_abs_state;
  Vector max_abs_input;
  double closed_loop_cost = 0.0;  ///< sum_k l(x_k, u_k) over the recorded samples
  /// First time the residual drops to each milestone (1e-4, 1e-6, 1e-8, 1e-10).
  std::vector<std::pair<double, std::optional<double>>> residual_milestones;
  std::optional<int> steps_to_residual_1e10;
  double max_wall_s = 0.0;
  double mean_wall_s = 0.0;
  int records = 0;
  std::optional<std::string> abort_reason;
};

SimSummary summarize(const SimTrace& trace, const OcpSpec& ocp);
void write_summary(const SimSummary& summary, std::ostream& out);

struct SimulationRun {
  SimTrace trace;
  SimSummary summary;
  int exit_code = 0;
};

/// Builds the problem and compensator (z0 = 0) and runs the closed loop.
SimulationRun run_closed_loop(const ExperimentConfig& cfg);

/// Writes trace.csv, summary.txt and config-echo.json into `out_dir`.
/// Returns nonzero when the solver aborted the run.
int run_simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

struct SweepEntry {
  int ell = 0;
  SimSummary summary;
  int exit_code = 0;
};

/// One run per ell in out_dir/ell_<ell>/ plus out_dir/metrics.csv with
/// columns ell,steps_to_residual_1e-10,max_violation,closed_loop_cost.
std::vector<SweepEntry> run_sweep_ell(const ExperimentConfig& cfg, const std::vector<int>& ells,
                                      const std::filesystem::path& out_dir);

/// Checks every analytic derivative of the configured problem at
/// cfg.derivative_points seeded random points; prints a per-block report.
int run_check_derivatives(const ExperimentConfig& cfg, std::ostream& out);

/// Solves the configured problem to convergence at the initial state from z = 0.
int run_solve(const ExperimentConfig& cfg, std::ostream& out);

}  // namespace sspc
