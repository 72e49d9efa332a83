#include "sspc/sspc_solver.hpp"

#include "sspc/errors.hpp"

#include <limits>
#include <string>

namespace sspc {

void SspcConfig::validate() const {
  if (ell < 0) throw ConfigError("SspcConfig: ell must be >= 0, got " + std::to_string(ell));
  if (!(oracle_tol > 0.0)) throw ConfigError("SspcConfig: oracle_tol must be > 0");
  if (oracle_max_iter < 0) throw ConfigError("SspcConfig: oracle_max_iter must be >= 0");
  if (!(regularization_delta >= 0.0)) {
    throw ConfigError("SspcConfig: regularization_delta must be >= 0");
  }
}

namespace {

struct SolveStats {
  int solves = 0;
  int rescues = 0;
};

/// Solves jz dz = rhs, retrying once with extra primal regularization.
Vector newton_solve(const Matrix& jz, const Vector& rhs, Eigen::Index n, SolveStats& stats) {
  ++stats.solves;
  try {
    return solve_linear(jz, rhs);
  } catch (const SingularMatrix&) {
    Matrix rescued = jz;
    regularize_primal_block(rescued, n, kSingularRescueDelta);
    ++stats.rescues;
    ++stats.solves;
    return solve_linear(rescued, rhs);
  }
}

PrimalDualPoint offset(const PrimalDualPoint& z, const Vector& dz, const ParametricNLP& nlp) {
  PrimalDualPoint out = z;
  out.w += dz.head(nlp.n);
  out.lambda += dz.segment(nlp.n, nlp.m);
  out.v += dz.tail(nlp.q);
  return out;
}

PrimalDualPoint predictor_impl(const ParametricNLP& nlp, const PrimalDualPoint& z_prev,
                               const Vector& p_prev, const Vector& p_new, const SspcConfig& cfg,
                               SolveStats& stats) {
  if (p_prev.size() != nlp.n_p || p_new.size() != nlp.n_p) {
    throw DimensionMismatch("predictor: parameter length does not match problem");
  }
  const Vector dp = p_new - p_prev;
  if (dp.isZero(0.0)) return z_prev;
  const auto lin = linearize(nlp, z_prev, p_prev, cfg.regularization_delta, true);
  const Vector dz = newton_solve(lin.jz, -(lin.jp * dp), nlp.n, stats);
  return offset(z_prev, dz, nlp);
}

PrimalDualPoint corrector_impl(const ParametricNLP& nlp, const PrimalDualPoint& z_bar,
                               const Vector& p, const SspcConfig& cfg, SolveStats& stats) {
  const auto lin = linearize(nlp, z_bar, p, cfg.regularization_delta, false);
  const Vector dz = newton_solve(lin.jz, -lin.residual.stacked(), nlp.n, stats);
  return offset(z_bar, dz, nlp);
}

}  // namespace

PrimalDualPoint predictor(const ParametricNLP& nlp, const PrimalDualPoint& z_prev,
                          const Vector& p_prev, const Vector& p_new, const SspcConfig& cfg) {
  SolveStats stats;
  return predictor_impl(nlp, z_prev, p_prev, p_new, cfg, stats);
}

PrimalDualPoint corrector(const ParametricNLP& nlp, const PrimalDualPoint& z_bar, const Vector& p,
                          const SspcConfig& cfg) {
  SolveStats stats;
  return corrector_impl(nlp, z_bar, p, cfg, stats);
}

StepResult step(const ParametricNLP& nlp, const SspcConfig& cfg, const PrimalDualPoint& z_prev,
                const Vector& p_prev, const Vector& p_new) {
  cfg.validate();
  StepResult out;
  auto& diag = out.diagnostics;
  SolveStats stats;

  diag.residual_before = residual(nlp, z_prev, p_new).norm2;
  PrimalDualPoint z = z_prev;
  diag.residual_after_predictor = diag.residual_before;
  if (cfg.use_predictor && p_new != p_prev) {
    try {
      z = predictor_impl(nlp, z_prev, p_prev, p_new, cfg, stats);
    } catch (const SingularMatrix& e) {
      throw SingularMatrix(std::string("predictor: ") + e.what(), -1);
    }
    diag.residual_after_predictor = residual(nlp, z, p_new).norm2;
  }

  double previous = diag.residual_after_predictor;
  diag.residual_after_each_corrector.reserve(cfg.ell);
  for (int j = 0; j < cfg.ell; ++j) {
    try {
      z = corrector_impl(nlp, z, p_new, cfg, stats);
    } catch (const SingularMatrix& e) {
      throw SingularMatrix("corrector " + std::to_string(j) + ": " + e.what(), j);
    }
    const double r = residual(nlp, z, p_new).norm2;
    if (r > kResidualGrowthWarning * previous) ++diag.residual_growth_warnings;
    diag.residual_after_each_corrector.push_back(r);
    previous = r;
  }
  diag.linear_solve_count = stats.solves;
  diag.singular_rescues = stats.rescues;
  out.z = std::move(z);
  return out;
}

ConvergedSolve solve_to_convergence(const ParametricNLP& nlp, const SspcConfig& cfg,
                                    const PrimalDualPoint& z0, const Vector& p) {
  cfg.validate();
  SolveStats stats;
  PrimalDualPoint z = z0;
  double r = residual(nlp, z, p).norm2;
  PrimalDualPoint best = z;
  double best_r = r;
  int it = 0;
  while (!(r <= cfg.oracle_tol)) {
    if (it >= cfg.oracle_max_iter) {
      throw NoConvergence("solve_to_convergence: residual " + std::to_string(best_r) +
                              " after " + std::to_string(it) + " iterations",
                          best_r, best.stacked());
    }
    z = corrector_impl(nlp, z, p, cfg, stats);
    r = residual(nlp, z, p).norm2;
    ++it;
    if (r < best_r) {
      best = z;
      best_r = r;
    }
  }
  return {std::move(z), it, r};
}

std::vector<double> convergence_ratios(std::span<const StepDiagnostics> diagnostics) {
  std::vector<double> ratios;
  for (const auto& d : diagnostics) {
    double before = d.residual_after_predictor;
    for (double after : d.residual_after_each_corrector) {
      ratios.push_back(before == 0.0 ? 0.0 : after / (before * before));
      before = after;
    }
  }
  return ratios;
}

}  // namespace sspc
