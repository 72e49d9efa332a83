#pragma once

#include "sspc/numerics.hpp"
#include "sspc/ocp_transcription.hpp"
#include "sspc/parametric_nlp.hpp"

#include <random>

namespace sspc::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols,
                            double scale = 1.0) {
  std::uniform_real_distribution<double> unit(-scale, scale);
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = unit(rng);
  return M;
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index size, double scale = 1.0) {
  return random_matrix(rng, size, 1, scale);
}

/// Dense parametric QP
///   min 1/2 w'Hw + w'(Fp + c)  s.t.  Aw - Ep - b = 0,  Gw - Lp - d <= 0
/// with H positive definite.
struct DenseQp {
  Matrix H, F, A, E, G, L;
  Vector c, b, d;
  ParametricNLP nlp;
};

inline DenseQp random_dense_qp(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m,
                               Eigen::Index q, Eigen::Index n_p) {
  DenseQp qp;
  const Matrix M = random_matrix(rng, n, n);
  qp.H = M * M.transpose() + Matrix::Identity(n, n);
  qp.F = random_matrix(rng, n, n_p);
  qp.A = random_matrix(rng, m, n);
  qp.E = random_matrix(rng, m, n_p);
  qp.G = random_matrix(rng, q, n);
  qp.L = random_matrix(rng, q, n_p);
  qp.c = random_vector(rng, n);
  qp.b = random_vector(rng, m);
  qp.d = random_vector(rng, q);

  ParametricNLP& nlp = qp.nlp;
  nlp.n = n;
  nlp.m = m;
  nlp.q = q;
  nlp.n_p = n_p;
  const DenseQp data = qp;
  nlp.objective = [data](const Vector& w, const Vector& p) {
    return 0.5 * w.dot(data.H * w) + w.dot(data.F * p + data.c);
  };
  nlp.objective_gradient = [data](const Vector& w, const Vector& p) -> Vector {
    return data.H * w + data.F * p + data.c;
  };
  nlp.equality = [data](const Vector& w, const Vector& p) -> Vector {
    return data.A * w - data.E * p - data.b;
  };
  nlp.equality_jacobian = [data](const Vector&, const Vector&) -> Matrix { return data.A; };
  nlp.equality_param_jacobian = [data](const Vector&, const Vector&) -> Matrix {
    return -data.E;
  };
  nlp.inequality = [data](const Vector& w, const Vector& p) -> Vector {
    return data.G * w - data.L * p - data.d;
  };
  nlp.inequality_jacobian = [data](const Vector&, const Vector&) -> Matrix { return data.G; };
  nlp.inequality_param_jacobian = [data](const Vector&, const Vector&) -> Matrix {
    return -data.L;
  };
  nlp.lagrangian_hessian = [data](const PrimalDualPoint&, const Vector&) -> Matrix {
    return data.H;
  };
  nlp.lagrangian_param_cross = [data](const PrimalDualPoint&, const Vector&) -> Matrix {
    return data.F;
  };
  return qp;
}

/// Scalar integrator x+ = x + u with l = x^2 + u^2, V_f = x^2 and an
/// optional box |u| <= u_bound (n_c = 2 when enabled).
inline OcpSpec scalar_integrator_ocp(int horizon, std::optional<double> u_bound = std::nullopt) {
  OcpSpec ocp;
  ocp.horizon = horizon;
  ocp.n_x = 1;
  ocp.n_u = 1;
  ocp.dynamics = [](const Vector& x, const Vector& u) -> Vector { return x + u; };
  ocp.dynamics_jacobian = [](const Vector&, const Vector&) -> Matrix {
    return Matrix::Ones(1, 2);
  };
  ocp.dynamics_hessian = [](const Vector&, const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(2, 2);
  };
  ocp.stage_cost = [](const Vector& x, const Vector& u) { return x(0) * x(0) + u(0) * u(0); };
  ocp.stage_cost_gradient = [](const Vector& x, const Vector& u) -> Vector {
    return Vector{{2.0 * x(0), 2.0 * u(0)}};
  };
  ocp.stage_cost_hessian = [](const Vector&, const Vector&) -> Matrix {
    return 2.0 * Matrix::Identity(2, 2);
  };
  ocp.terminal_cost = [](const Vector& x) { return x(0) * x(0); };
  ocp.terminal_cost_gradient = [](const Vector& x) -> Vector { return 2.0 * x; };
  ocp.terminal_cost_hessian = [](const Vector&) -> Matrix { return 2.0 * Matrix::Identity(1, 1); };
  if (u_bound) {
    const double b = *u_bound;
    ocp.n_c = 2;
    ocp.path_constraint = [b](const Vector&, const Vector& u) -> Vector {
      return Vector{{u(0) - b, -u(0) - b}};
    };
    ocp.path_constraint_jacobian = [](const Vector&, const Vector&) -> Matrix {
      return Matrix{{0.0, 1.0}, {0.0, -1.0}};
    };
    ocp.path_row_state_only = {false, false};
  }
  return ocp;
}

}  // namespace sspc::testing
