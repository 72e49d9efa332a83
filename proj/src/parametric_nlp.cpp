#include "sspc/parametric_nlp.hpp"

#include "sspc/errors.hpp"

#include <cmath>
#include <string>

namespace sspc {

PrimalDualPoint PrimalDualPoint::from_stacked(const Vector& z, Eigen::Index n, Eigen::Index m,
                                              Eigen::Index q) {
  if (z.size() != n + m + q) {
    throw DimensionMismatch("PrimalDualPoint: stacked length " + std::to_string(z.size()) +
                            " != " + std::to_string(n + m + q));
  }
  return {z.head(n), z.segment(n, m), z.tail(q)};
}

Vector PrimalDualPoint::stacked() const {
  Vector z(size());
  z << w, lambda, v;
  return z;
}

Vector KktResidual::stacked() const {
  Vector f(stationarity.size() + equality.size() + complementarity.size());
  f << stationarity, equality, complementarity;
  return f;
}

void ParametricNLP::validate() const {
  if (n < 0 || m < 0 || q < 0 || n_p < 0) {
    throw DimensionMismatch("ParametricNLP: negative dimension");
  }
  auto require = [](bool present, const char* name) {
    if (!present) throw DimensionMismatch(std::string("ParametricNLP: missing callback ") + name);
  };
  require(bool(objective), "objective");
  require(bool(objective_gradient), "objective_gradient");
  require(bool(lagrangian_hessian), "lagrangian_hessian");
  require(bool(lagrangian_param_cross), "lagrangian_param_cross");
  if (m > 0) {
    require(bool(equality), "equality");
    require(bool(equality_jacobian), "equality_jacobian");
    require(bool(equality_param_jacobian), "equality_param_jacobian");
  }
  if (q > 0) {
    require(bool(inequality), "inequality");
    require(bool(inequality_jacobian), "inequality_jacobian");
    require(bool(inequality_param_jacobian), "inequality_param_jacobian");
  }
}

double fb(double a, double b) { return a + b - std::hypot(a, b); }

FbDerivative fb_pair_derivative(double h, double v, double tie_a, double tie_b) {
  const double r = std::hypot(h, v);
  if (r <= kFbTieThreshold) return {1.0 - tie_a, 1.0 - tie_b};
  return {1.0 + h / r, 1.0 - v / r};
}

namespace {

template <typename T>
const T& checked(const T& value, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (value.rows() != rows || value.cols() != cols) {
    throw DimensionMismatch(std::string(name) + ": got " + std::to_string(value.rows()) + "x" +
                            std::to_string(value.cols()) + ", expected " + std::to_string(rows) +
                            "x" + std::to_string(cols));
  }
  if (!value.allFinite()) throw NonFiniteEvaluation(std::string(name) + ": non-finite output");
  return value;
}

void check_point(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p) {
  if (z.w.size() != nlp.n || z.lambda.size() != nlp.m || z.v.size() != nlp.q ||
      p.size() != nlp.n_p) {
    throw DimensionMismatch("point (n,m,q,n_p) = (" + std::to_string(z.w.size()) + "," +
                            std::to_string(z.lambda.size()) + "," + std::to_string(z.v.size()) +
                            "," + std::to_string(p.size()) + ") does not match problem (" +
                            std::to_string(nlp.n) + "," + std::to_string(nlp.m) + "," +
                            std::to_string(nlp.q) + "," + std::to_string(nlp.n_p) + ")");
  }
}

/// Callback values shared by the residual and both Jacobians.
struct FirstOrder {
  Vector grad_f;
  Vector g;
  Matrix dg;
  Vector h;
  Matrix dh;
};

FirstOrder eval_first_order(const ParametricNLP& nlp, const Vector& w, const Vector& p) {
  FirstOrder fo;
  fo.grad_f = nlp.objective_gradient(w, p);
  checked(fo.grad_f, nlp.n, 1, "objective_gradient");
  if (nlp.m > 0) {
    fo.g = nlp.equality(w, p);
    checked(fo.g, nlp.m, 1, "equality");
    fo.dg = nlp.equality_jacobian(w, p);
    checked(fo.dg, nlp.m, nlp.n, "equality_jacobian");
  } else {
    fo.g = Vector(0);
    fo.dg = Matrix(0, nlp.n);
  }
  if (nlp.q > 0) {
    fo.h = nlp.inequality(w, p);
    checked(fo.h, nlp.q, 1, "inequality");
    fo.dh = nlp.inequality_jacobian(w, p);
    checked(fo.dh, nlp.q, nlp.n, "inequality_jacobian");
  } else {
    fo.h = Vector(0);
    fo.dh = Matrix(0, nlp.n);
  }
  return fo;
}

KktResidual assemble_residual(const FirstOrder& fo, const PrimalDualPoint& z) {
  KktResidual r;
  r.stationarity = fo.grad_f;
  if (fo.g.size() > 0) r.stationarity.noalias() += fo.dg.transpose() * z.lambda;
  if (fo.h.size() > 0) r.stationarity.noalias() += fo.dh.transpose() * z.v;
  r.equality = fo.g;
  r.complementarity.resize(fo.h.size());
  for (Eigen::Index i = 0; i < fo.h.size(); ++i) r.complementarity(i) = fb(-fo.h(i), z.v(i));
  const double sq = r.stationarity.squaredNorm() + r.equality.squaredNorm() +
                    r.complementarity.squaredNorm();
  r.norm2 = std::sqrt(sq);
  return r;
}

}  // namespace

KktResidual residual(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p) {
  check_point(nlp, z, p);
  return assemble_residual(eval_first_order(nlp, z.w, p), z);
}

void regularize_primal_block(Matrix& jz, Eigen::Index n, double delta) {
  if (delta != 0.0) jz.topLeftCorner(n, n).diagonal().array() += delta;
}

KktLinearization linearize(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p,
                           double delta, bool with_param_jacobian) {
  check_point(nlp, z, p);
  const auto n = nlp.n, m = nlp.m, q = nlp.q;
  const FirstOrder fo = eval_first_order(nlp, z.w, p);

  KktLinearization lin;
  lin.residual = assemble_residual(fo, z);
  lin.nu.resize(q);
  lin.mu.resize(q);
  for (Eigen::Index i = 0; i < q; ++i) {
    const auto d = fb_pair_derivative(fo.h(i), z.v(i));
    lin.nu(i) = d.nu;
    lin.mu(i) = d.mu;
  }

  const Matrix hess = nlp.lagrangian_hessian(z, p);
  checked(hess, n, n, "lagrangian_hessian");

  lin.jz = Matrix::Zero(n + m + q, n + m + q);
  lin.jz.topLeftCorner(n, n) = hess;
  regularize_primal_block(lin.jz, n, delta);
  if (m > 0) {
    lin.jz.block(0, n, n, m) = fo.dg.transpose();
    lin.jz.block(n, 0, m, n) = fo.dg;
  }
  if (q > 0) {
    lin.jz.block(0, n + m, n, q) = fo.dh.transpose();
    lin.jz.block(n + m, 0, q, n) = -(lin.nu.asDiagonal() * fo.dh);
    lin.jz.bottomRightCorner(q, q).diagonal() = lin.mu;
  }

  if (with_param_jacobian) {
    const auto np = nlp.n_p;
    lin.jp.resize(n + m + q, np);
    const Matrix cross = nlp.lagrangian_param_cross(z, p);
    lin.jp.topRows(n) = checked(cross, n, np, "lagrangian_param_cross");
    if (m > 0) {
      const Matrix dgp = nlp.equality_param_jacobian(z.w, p);
      lin.jp.middleRows(n, m) = checked(dgp, m, np, "equality_param_jacobian");
    }
    if (q > 0) {
      const Matrix dhp = nlp.inequality_param_jacobian(z.w, p);
      checked(dhp, q, np, "inequality_param_jacobian");
      lin.jp.bottomRows(q) = -(lin.nu.asDiagonal() * dhp);
    }
  }
  return lin;
}

Matrix jacobian_z(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p,
                  double delta) {
  return linearize(nlp, z, p, delta, false).jz;
}

Matrix jacobian_p(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p) {
  return linearize(nlp, z, p, 0.0, true).jp;
}

}  // namespace sspc
