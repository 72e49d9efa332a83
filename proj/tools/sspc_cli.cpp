#include "sspc/errors.hpp"
#include "sspc/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<int> ell;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_out) {
  cmd->add_option("--config", flags.config, "experiment JSON file")->check(CLI::ExistingFile);
  if (with_out) cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--ell", flags.ell, "corrector iterations per sample (overrides config)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", flags.seed, "random seed (overrides config)");
}

sspc::ExperimentConfig resolve(const CommonFlags& flags) {
  sspc::ExperimentConfig cfg =
      flags.config.empty() ? sspc::ExperimentConfig{} : sspc::load_config(flags.config);
  if (flags.ell) cfg.solver.ell = *flags.ell;
  if (flags.seed) cfg.seed = *flags.seed;
  if (!flags.out.empty()) cfg.output_dir = flags.out;
  cfg.solver.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semismooth predictor-corrector MPC"};
  app.require_subcommand(1);

  CommonFlags sim_flags, sweep_flags, deriv_flags, solve_flags;
  std::vector<int> ells{1, 2, 4};

  auto* sim = app.add_subcommand("simulate", "run the closed loop; writes trace.csv, summary.txt");
  add_common(sim, sim_flags, true);
  auto* sweep = app.add_subcommand("sweep-ell", "closed loop for several ell; writes metrics.csv");
  add_common(sweep, sweep_flags, true);
  sweep->add_option("--ells", ells, "ell values to sweep")->check(CLI::PositiveNumber);
  auto* deriv = app.add_subcommand("check-derivatives", "compare derivatives with finite differences");
  add_common(deriv, deriv_flags, false);
  auto* solve = app.add_subcommand("solve", "solve the OCP to convergence at the initial state");
  add_common(solve, solve_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) {
      const auto cfg = resolve(sim_flags);
      const int code = sspc::run_simulate(cfg, cfg.output_dir);
      std::cout << "wrote " << cfg.output_dir << "/trace.csv\n";
      return code;
    }
    if (sweep->parsed()) {
      if (sweep_flags.ell) ells = {*sweep_flags.ell};
      const auto cfg = resolve(sweep_flags);
      const auto entries = sspc::run_sweep_ell(cfg, ells, cfg.output_dir);
      int code = 0;
      for (const auto& e : entries) {
        std::cout << "ell=" << e.ell << " cost=" << e.summary.closed_loop_cost
                  << (e.summary.abort_reason ? " aborted: " + *e.summary.abort_reason : "") << '\n';
        code = std::max(code, e.exit_code);
      }
      std::cout << "wrote " << cfg.output_dir << "/metrics.csv\n";
      return code;
    }
    if (deriv->parsed()) return sspc::run_check_derivatives(resolve(deriv_flags), std::cout);
    if (solve->parsed()) return sspc::run_solve(resolve(solve_flags), std::cout);
  } catch (const sspc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 64;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
