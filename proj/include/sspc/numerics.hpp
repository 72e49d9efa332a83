#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>

namespace sspc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative pivot threshold used by solve_linear.
inline constexpr double kSingularPivotTolerance = 1e-14;

/// Solves A x = b with an LU factorization using partial (row) pivoting.
///
/// Throws SingularMatrix when a pivot magnitude drops below
/// kSingularPivotTolerance times the largest column 2-norm of A, and
/// DimensionMismatch when A is not square or b has the wrong length.
Vector solve_linear(const Matrix& A, const Vector& b);

struct RiccatiResult {
  Matrix P;  ///< cost-to-go, symmetric positive definite
  Matrix K;  ///< gain, u = -K x
  int iterations = 0;
  double residual = 0.0;
};

/// Residual ||P - (Q + A'PA - A'PB (R + B'PB)^-1 B'PA)||_inf of the
/// discrete-time algebraic Riccati equation.
double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& P);

/// Solves the DARE by fixed-point iteration of the Riccati recursion
/// starting from P = Q.
///
/// The stopping test is scaled by the size of P: the iteration stops once
/// dare_residual(P) <= tol * max(1, ||P||_inf), and `residual` reports that
/// scaled quantity. For ||P||_inf <= 1 this is the plain absolute residual.
/// Throws NoConvergence when max_iter is exhausted.
RiccatiResult solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                         double tol = 1e-12, int max_iter = 100000);

using VectorFunction = std::function<Vector(const Vector&)>;

/// Central-difference Jacobian of fn at `at`. The default step is
/// 1e-6 * (1 + ||at||_inf). Throws NonFiniteEvaluation when fn returns a
/// non-finite entry.
Matrix fd_jacobian(const VectorFunction& fn, const Vector& at,
                   std::optional<double> step = std::nullopt);

}  // namespace sspc
