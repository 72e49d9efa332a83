#pragma once

#include "sspc/numerics.hpp"

#include <functional>

namespace sspc {

/// Primal-dual estimate z = (w, lambda, v).
struct PrimalDualPoint {
  Vector w;       ///< primal variables, length n
  Vector lambda;  ///< equality multipliers, length m
  Vector v;       ///< inequality multipliers, length q

  static PrimalDualPoint zeros(Eigen::Index n, Eigen::Index m, Eigen::Index q) {
    return {Vector::Zero(n), Vector::Zero(m), Vector::Zero(q)};
  }
  static PrimalDualPoint from_stacked(const Vector& z, Eigen::Index n, Eigen::Index m,
                                      Eigen::Index q);

  Eigen::Index size() const { return w.size() + lambda.size() + v.size(); }
  Vector stacked() const;
};

/// min_w f(w,p) s.t. g(w,p) = 0, h(w,p) <= 0, with callbacks for every
/// first and second derivative the semismooth Newton system needs.
///
/// Jacobians are laid out row-per-constraint: equality_jacobian is m x n,
/// equality_param_jacobian is m x n_p. lagrangian_hessian returns the n x n
/// matrix d^2 L / dw^2 and lagrangian_param_cross the n x n_p matrix
/// d/dp (grad_w L). Callbacks for empty constraint blocks may be left unset.
struct ParametricNLP {
  using Scalar = std::function<double(const Vector& w, const Vector& p)>;
  using VectorFn = std::function<Vector(const Vector& w, const Vector& p)>;
  using MatrixFn = std::function<Matrix(const Vector& w, const Vector& p)>;
  using DualMatrixFn = std::function<Matrix(const PrimalDualPoint& z, const Vector& p)>;

  Eigen::Index n = 0;
  Eigen::Index m = 0;
  Eigen::Index q = 0;
  Eigen::Index n_p = 0;

  Scalar objective;
  VectorFn objective_gradient;
  VectorFn equality;
  MatrixFn equality_jacobian;
  MatrixFn equality_param_jacobian;
  VectorFn inequality;
  MatrixFn inequality_jacobian;
  MatrixFn inequality_param_jacobian;
  DualMatrixFn lagrangian_hessian;
  DualMatrixFn lagrangian_param_cross;

  /// Throws DimensionMismatch on missing callbacks or negative sizes.
  void validate() const;
};

/// Pairs (h_i, v_i) with Euclidean norm at or below this are the kink of
/// the Fischer-Burmeister function.
inline constexpr double kFbTieThreshold = 1e-14;
/// Generalized-derivative selection used at the kink: a = b = 2^{-1/2}.
inline constexpr double kFbTieValue = 0.70710678118654752440;

/// Fischer-Burmeister NCP function a + b - sqrt(a^2 + b^2).
double fb(double a, double b);

struct FbDerivative {
  double nu;
  double mu;
};

/// Element of the generalized derivative for the pair (h, v):
/// (1 + h/r, 1 - v/r) with r = ||(h, v)||, or (1 - tie_a, 1 - tie_b) at the kink.
FbDerivative fb_pair_derivative(double h, double v, double tie_a = kFbTieValue,
                                double tie_b = kFbTieValue);

/// F(z,p) = (grad_w L, g, phi(-h, v)).
struct KktResidual {
  Vector stationarity;
  Vector equality;
  Vector complementarity;
  double norm2 = 0.0;

  Vector stacked() const;
};

KktResidual residual(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p);

/// Everything one Newton-type step needs, evaluated at a single (z, p).
/// `nu` is the diagonal of C, shared by jz and jp.
struct KktLinearization {
  KktResidual residual;
  Matrix jz;
  Matrix jp;
  Vector nu;
  Vector mu;
};

/// Evaluates F, dF/dz and (optionally) dF/dp in one pass so both Jacobians
/// use the same C. `delta` adds delta * I to the Hessian block of jz.
KktLinearization linearize(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p,
                           double delta = 0.0, bool with_param_jacobian = true);

Matrix jacobian_z(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p,
                  double delta = 0.0);
Matrix jacobian_p(const ParametricNLP& nlp, const PrimalDualPoint& z, const Vector& p);

/// Adds delta to the primal diagonal block of an assembled jz in place.
void regularize_primal_block(Matrix& jz, Eigen::Index n, double delta);

}  // namespace sspc
