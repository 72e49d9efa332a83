#pragma once

#include "sspc/parametric_nlp.hpp"

#include <span>
#include <vector>

namespace sspc {

struct SspcConfig {
  int ell = 1;  ///< corrector iterations per parameter update
  bool use_predictor = true;
  double regularization_delta = 0.0;
  double oracle_tol = 1e-10;
  int oracle_max_iter = 100;

  /// Throws ConfigError when ell < 0, oracle_tol <= 0 or delta < 0.
  void validate() const;
};

/// Regularization added on top of SspcConfig::regularization_delta when a
/// Newton system turns out singular; the solve is retried once.
inline constexpr double kSingularRescueDelta = 1e-8;

/// A corrector that grows the residual by more than this factor is flagged.
inline constexpr double kResidualGrowthWarning = 10.0;

struct StepDiagnostics {
  double residual_before = 0.0;  ///< ||F(z_prev, p_new)||
  double residual_after_predictor = 0.0;
  std::vector<double> residual_after_each_corrector;
  int linear_solve_count = 0;
  int singular_rescues = 0;
  int residual_growth_warnings = 0;
};

/// Euler-type sensitivity step: solves V (p_new - p_prev) + B (z_bar - z_prev) = 0
/// with B, V the generalized Jacobians at (z_prev, p_prev).
PrimalDualPoint predictor(const ParametricNLP& nlp, const PrimalDualPoint& z_prev,
                          const Vector& p_prev, const Vector& p_new, const SspcConfig& cfg = {});

/// One semismooth Newton iteration at fixed p: F(z_bar,p) + B (z - z_bar) = 0.
PrimalDualPoint corrector(const ParametricNLP& nlp, const PrimalDualPoint& z_bar, const Vector& p,
                          const SspcConfig& cfg = {});

struct StepResult {
  PrimalDualPoint z;
  StepDiagnostics diagnostics;
};

/// One predictor (if enabled) followed by cfg.ell correctors at p_new.
/// A SingularMatrix escaping this call carries the failing iteration index.
StepResult step(const ParametricNLP& nlp, const SspcConfig& cfg, const PrimalDualPoint& z_prev,
                const Vector& p_prev, const Vector& p_new);

struct ConvergedSolve {
  PrimalDualPoint z;
  int iterations = 0;
  double residual = 0.0;
};

/// Repeats the corrector at fixed p until ||F|| <= cfg.oracle_tol.
/// Throws NoConvergence (with the best iterate, stacked) after cfg.oracle_max_iter.
ConvergedSolve solve_to_convergence(const ParametricNLP& nlp, const SspcConfig& cfg,
                                    const PrimalDualPoint& z0, const Vector& p);

/// r_after / r_before^2 for each corrector in each step (the first corrector
/// of a step is measured against the post-predictor residual). 0/0 reads as 0.
std::vector<double> convergence_ratios(std::span<const StepDiagnostics> diagnostics);

}  // namespace sspc
