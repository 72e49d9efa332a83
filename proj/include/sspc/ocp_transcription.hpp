#pragma once

#include "sspc/parametric_nlp.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace sspc {

/// Finite-horizon optimal control problem
///
///   min  V_f(xi_N) + sum_{i<N} l(xi_i, u_i)
///   s.t. xi_{i+1} = f_d(xi_i, u_i),  c(xi_i, u_i) <= 0,  c_N(xi_N) <= 0,  xi_0 = x.
///
/// Stage-level derivatives are taken jointly in y = (x, u), so gradients
/// have length n_x + n_u and Hessians are (n_x + n_u) square. The *_hessian
/// callbacks receive a multiplier vector and return the weighted sum of the
/// component Hessians. Missing constraint Hessians mean the constraint is affine.
struct OcpSpec {
  using StageScalar = std::function<double(const Vector& x, const Vector& u)>;
  using StageVector = std::function<Vector(const Vector& x, const Vector& u)>;
  using StageMatrix = std::function<Matrix(const Vector& x, const Vector& u)>;
  using StageContraction =
      std::function<Matrix(const Vector& x, const Vector& u, const Vector& multipliers)>;
  using TerminalScalar = std::function<double(const Vector& x)>;
  using TerminalVector = std::function<Vector(const Vector& x)>;
  using TerminalMatrix = std::function<Matrix(const Vector& x)>;
  using TerminalContraction = std::function<Matrix(const Vector& x, const Vector& multipliers)>;

  int horizon = 1;
  int n_x = 0;
  int n_u = 0;
  int n_c = 0;
  int n_cf = 0;

  StageVector dynamics;            ///< f_d(x, u), length n_x
  StageMatrix dynamics_jacobian;   ///< n_x x (n_x + n_u)
  StageContraction dynamics_hessian;

  StageScalar stage_cost;
  StageVector stage_cost_gradient;  ///< length n_x + n_u
  StageMatrix stage_cost_hessian;

  TerminalScalar terminal_cost;
  TerminalVector terminal_cost_gradient;
  TerminalMatrix terminal_cost_hessian;

  StageVector path_constraint;           ///< c(x, u), length n_c
  StageMatrix path_constraint_jacobian;  ///< n_c x (n_x + n_u)
  StageContraction path_constraint_hessian;
  /// Rows of c that depend on x only. At stage 0 they are constants of the
  /// parameter and are left out of the transcribed inequalities.
  std::vector<bool> path_row_state_only;

  TerminalVector terminal_constraint;           ///< c_N(x), length n_cf
  TerminalMatrix terminal_constraint_jacobian;  ///< n_cf x n_x
  TerminalContraction terminal_constraint_hessian;

  /// Checks dimensions at the origin and that l(0, 0) = 0.
  void validate() const;
};

/// Index map from OCP quantities into z = (w, lambda, v).
///
/// w = (xi_1 .. xi_N, u_0 .. u_{N-1}); lambda follows the dynamics stages
/// 0..N-1; v holds the path rows of stages 0..N-1 (stage 0 without the
/// state-only rows) followed by the terminal rows.
struct VariableLayout {
  int horizon = 0;
  int n_x = 0;
  int n_u = 0;
  int n_c = 0;
  int n_cf = 0;
  std::vector<int> stage0_rows;  ///< path rows kept at stage 0

  Eigen::Index n() const { return Eigen::Index(horizon) * (n_x + n_u); }
  Eigen::Index m() const { return Eigen::Index(horizon) * n_x; }
  Eigen::Index q() const;

  /// Offset of xi_i in w, i = 1..N.
  Eigen::Index state_offset(int i) const { return Eigen::Index(i - 1) * n_x; }
  /// Offset of u_i in w, i = 0..N-1.
  Eigen::Index input_offset(int i) const { return Eigen::Index(horizon) * n_x + Eigen::Index(i) * n_u; }
  Eigen::Index dynamics_row(int i) const { return Eigen::Index(i) * n_x; }
  /// Offset of stage i path rows in v.
  Eigen::Index path_row(int i) const;
  Eigen::Index path_row_count(int i) const;
  Eigen::Index terminal_row() const { return q() - n_cf; }
};

struct Transcription {
  std::shared_ptr<const ParametricNLP> nlp;
  VariableLayout layout;
};

/// Builds the parametric NLP with parameter p = current state; xi_0 is
/// substituted by p.
Transcription transcribe(const OcpSpec& ocp);

/// u_0 block of w.
Vector extract_control(const VariableLayout& layout, const PrimalDualPoint& z);

/// J evaluated at the primal part of z with xi_0 = p.
double plan_cost(const OcpSpec& ocp, const VariableLayout& layout, const PrimalDualPoint& z,
                 const Vector& p);

}  // namespace sspc
