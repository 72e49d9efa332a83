#include "sspc/derivative_check.hpp"

#include <algorithm>
#include <cmath>

namespace sspc {

double error_ratio(const Matrix& analytic, const Matrix& reference, DerivativeTolerance tol,
                   Eigen::Index* row, Eigen::Index* col) {
  double worst = 0.0;
  for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
    for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
      const double a = analytic(i, j), b = reference(i, j);
      const double allowed = std::max(tol.abs_tol, tol.rel_tol * std::max(std::abs(a), std::abs(b)));
      const double ratio = std::abs(a - b) / allowed;
      if (!(ratio <= worst)) {
        worst = std::isnan(ratio) ? INFINITY : ratio;
        if (row) *row = i;
        if (col) *col = j;
      }
    }
  }
  return worst;
}

namespace {

Vector lagrangian_gradient(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p) {
  Vector g = nlp.objective_gradient(z.w, p);
  if (nlp.m > 0) g += nlp.equality_jacobian(z.w, p).transpose() * z.lambda;
  if (nlp.q > 0) g += nlp.inequality_jacobian(z.w, p).transpose() * z.v;
  return g;
}

void record(BlockReport& report, const Matrix& analytic, const Matrix& reference,
            DerivativeTolerance tol, int point) {
  Eigen::Index r = -1, c = -1;
  const double ratio = error_ratio(analytic, reference, tol, &r, &c);
  const double abs_err = analytic.size() ? (analytic - reference).cwiseAbs().maxCoeff() : 0.0;
  report.max_abs_error = std::max(report.max_abs_error, abs_err);
  if (ratio > report.worst_ratio || report.worst_point < 0) {
    report.worst_ratio = ratio;
    report.worst_point = point;
    report.worst_row = r;
    report.worst_col = c;
  }
  report.pass = report.worst_ratio <= 1.0;
}

}  // namespace

DerivativeReport check_derivatives(const ParametricNLP& nlp, const PointSampler& sampler,
                                   int n_points, std::uint64_t seed, DerivativeTolerance tol) {
  nlp.validate();
  std::mt19937_64 rng(seed);

  std::vector<BlockReport> blocks;
  auto block = [&](const std::string& name) -> BlockReport& {
    for (auto& b : blocks)
      if (b.block == name) return b;
    blocks.push_back(BlockReport{name});
    return blocks.back();
  };
  // Register in a fixed order so the report layout does not depend on m, q.
  block("objective_gradient");
  if (nlp.m > 0) {
    block("equality_jacobian");
    block("equality_param_jacobian");
  }
  if (nlp.q > 0) {
    block("inequality_jacobian");
    block("inequality_param_jacobian");
  }
  block("lagrangian_hessian");
  block("lagrangian_param_cross");

  for (int k = 0; k < n_points; ++k) {
    const auto [z, p] = sampler(rng);

    auto f_of_w = [&](const Vector& w) { return Vector::Constant(1, nlp.objective(w, p)); };
    record(block("objective_gradient"), nlp.objective_gradient(z.w, p).transpose(),
           fd_jacobian(f_of_w, z.w), tol, k);

    if (nlp.m > 0) {
      record(block("equality_jacobian"), nlp.equality_jacobian(z.w, p),
             fd_jacobian([&](const Vector& w) { return nlp.equality(w, p); }, z.w), tol, k);
      record(block("equality_param_jacobian"), nlp.equality_param_jacobian(z.w, p),
             fd_jacobian([&](const Vector& pp) { return nlp.equality(z.w, pp); }, p), tol, k);
    }
    if (nlp.q > 0) {
      record(block("inequality_jacobian"), nlp.inequality_jacobian(z.w, p),
             fd_jacobian([&](const Vector& w) { return nlp.inequality(w, p); }, z.w), tol, k);
      record(block("inequality_param_jacobian"), nlp.inequality_param_jacobian(z.w, p),
             fd_jacobian([&](const Vector& pp) { return nlp.inequality(z.w, pp); }, p), tol, k);
    }

    auto grad_in_w = [&](const Vector& w) {
      PrimalDualPoint zz{w, z.lambda, z.v};
      return lagrangian_gradient(nlp, zz, p);
    };
    record(block("lagrangian_hessian"), nlp.lagrangian_hessian(z, p), fd_jacobian(grad_in_w, z.w),
           tol, k);
    auto grad_in_p = [&](const Vector& pp) { return lagrangian_gradient(nlp, z, pp); };
    record(block("lagrangian_param_cross"), nlp.lagrangian_param_cross(z, p),
           fd_jacobian(grad_in_p, p), tol, k);
  }

  DerivativeReport report{std::move(blocks), true};
  for (const auto& b : report.blocks) report.pass = report.pass && b.pass;
  return report;
}

}  // namespace sspc
