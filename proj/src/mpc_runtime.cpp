#include "sspc/mpc_runtime.hpp"

#include "sspc/errors.hpp"

#include <string>

namespace sspc {

CompensatorState init_compensator(std::shared_ptr<const ParametricNLP> nlp, VariableLayout layout,
                                  SspcConfig cfg, std::optional<PrimalDualPoint> z0,
                                  const Vector& x0) {
  if (!nlp) throw DimensionMismatch("init_compensator: null problem");
  cfg.validate();
  if (nlp->n != layout.n() || nlp->m != layout.m() || nlp->q != layout.q()) {
    throw DimensionMismatch("init_compensator: layout does not match problem");
  }
  if (x0.size() != layout.n_x || nlp->n_p != layout.n_x) {
    throw DimensionMismatch("init_compensator: x0 has length " + std::to_string(x0.size()) +
                            ", expected " + std::to_string(layout.n_x));
  }
  PrimalDualPoint z = z0 ? std::move(*z0) : PrimalDualPoint::zeros(nlp->n, nlp->m, nlp->q);
  if (z.w.size() != nlp->n || z.lambda.size() != nlp->m || z.v.size() != nlp->q) {
    throw DimensionMismatch("init_compensator: z0 has length " + std::to_string(z.size()) +
                            ", expected " + std::to_string(nlp->n + nlp->m + nlp->q));
  }
  return {std::move(nlp), std::move(layout), cfg, std::move(z), x0, {}};
}

Vector update(CompensatorState& state, const Vector& x_now) {
  if (x_now.size() != state.layout.n_x) {
    throw DimensionMismatch("update: state measurement has length " +
                            std::to_string(x_now.size()) + ", expected " +
                            std::to_string(state.layout.n_x));
  }
  auto result = step(*state.nlp, state.cfg, state.z, state.p_prev, x_now);
  // Commit only after the step succeeded.
  state.z = std::move(result.z);
  state.p_prev = x_now;
  state.last_diagnostics = std::move(result.diagnostics);
  return extract_control(state.layout, state.z);
}

IdealControl ideal_control(const ParametricNLP& nlp, const VariableLayout& layout,
                           const SspcConfig& cfg, const Vector& x_now,
                           const PrimalDualPoint& z_warm) {
  auto solved = solve_to_convergence(nlp, cfg, z_warm, x_now);
  Vector u = extract_control(layout, solved.z);
  return {std::move(u), std::move(solved.z), solved.iterations};
}

double suboptimality_error(const CompensatorState& state, const Vector& x_now) {
  const auto ideal = ideal_control(*state.nlp, state.layout, state.cfg, x_now, state.z);
  return (extract_control(state.layout, state.z) - ideal.u).norm();
}

}  // namespace sspc
