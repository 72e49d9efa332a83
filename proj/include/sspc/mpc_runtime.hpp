#pragma once

#include "sspc/ocp_transcription.hpp"
#include "sspc/sspc_solver.hpp"

#include <memory>
#include <optional>

namespace sspc {

/// Internal state of the suboptimal MPC compensator: the solution estimate
/// z and the parameter it was last updated for.
struct CompensatorState {
  std::shared_ptr<const ParametricNLP> nlp;
  VariableLayout layout;
  SspcConfig cfg;
  PrimalDualPoint z;
  Vector p_prev;
  StepDiagnostics last_diagnostics;
};

/// Stores z0 (zeros when absent) and x0 without taking a solver step.
CompensatorState init_compensator(std::shared_ptr<const ParametricNLP> nlp, VariableLayout layout,
                                  SspcConfig cfg, std::optional<PrimalDualPoint> z0,
                                  const Vector& x0);

/// z_k = T_ell(z_{k-1}, x_k), returns u_k = H z_k. On error the state is untouched.
Vector update(CompensatorState& state, const Vector& x_now);

struct IdealControl {
  Vector u;
  PrimalDualPoint z;
  int iterations = 0;
};

/// Fully converged solve at x_now warm-started from z_warm.
IdealControl ideal_control(const ParametricNLP& nlp, const VariableLayout& layout,
                           const SspcConfig& cfg, const Vector& x_now,
                           const PrimalDualPoint& z_warm);

/// ||H z - H z*||_2 where z* is the converged solution at x_now reached
/// from the compensator's own estimate.
double suboptimality_error(const CompensatorState& state, const Vector& x_now);

}  // namespace sspc
