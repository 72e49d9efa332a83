#include "sspc/numerics.hpp"

#include "sspc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace sspc {

Vector solve_linear(const Matrix& A, const Vector& b) {
  if (A.rows() != A.cols()) {
    throw DimensionMismatch("solve_linear: matrix is " + std::to_string(A.rows()) + "x" +
                            std::to_string(A.cols()) + ", expected square");
  }
  if (A.rows() != b.size()) {
    throw DimensionMismatch("solve_linear: rhs has length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(A.rows()));
  }
  if (A.rows() == 0) return Vector(0);

  const double scale = A.colwise().norm().maxCoeff();
  const double threshold = kSingularPivotTolerance * scale;

  Eigen::PartialPivLU<Matrix> lu(A);
  const auto& packed = lu.matrixLU();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double pivot = std::abs(packed(i, i));
    if (!(pivot >= threshold) || scale == 0.0) {
      char msg[128];
      std::snprintf(msg, sizeof msg, "solve_linear: pivot %td has magnitude %.3e below threshold %.3e",
                    std::ptrdiff_t(i), pivot, threshold);
      throw SingularMatrix(msg);
    }
  }
  Vector x = lu.solve(b);
  if (!x.allFinite()) throw SingularMatrix("solve_linear: non-finite solution");
  return x;
}

namespace {

struct RiccatiUpdate {
  Matrix next;
  Matrix gain;
};

RiccatiUpdate riccati_map(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                          const Matrix& P) {
  const Matrix PA = P * A;
  const Matrix PB = P * B;
  const Matrix S = R + B.transpose() * PB;
  Matrix gain = S.ldlt().solve(PB.transpose() * A);
  Matrix next = Q + A.transpose() * PA - (A.transpose() * PB) * gain;
  next = 0.5 * (next + next.transpose()).eval();
  return {std::move(next), std::move(gain)};
}

void check_dare_dimensions(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R) {
  const auto n = A.rows();
  if (A.cols() != n || B.rows() != n || Q.rows() != n || Q.cols() != n ||
      R.rows() != B.cols() || R.cols() != B.cols()) {
    throw DimensionMismatch("solve_dare: inconsistent A, B, Q, R dimensions");
  }
}

}  // namespace

double dare_residual(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                     const Matrix& P) {
  check_dare_dimensions(A, B, Q, R);
  const auto update = riccati_map(A, B, Q, R, P);
  return (P - update.next).cwiseAbs().rowwise().sum().maxCoeff();
}

RiccatiResult solve_dare(const Matrix& A, const Matrix& B, const Matrix& Q, const Matrix& R,
                         double tol, int max_iter) {
  check_dare_dimensions(A, B, Q, R);
  Matrix P = 0.5 * (Q + Q.transpose());
  double scaled = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    auto update = riccati_map(A, B, Q, R, P);
    const double diff = (P - update.next).cwiseAbs().rowwise().sum().maxCoeff();
    const double size = std::max(1.0, P.cwiseAbs().rowwise().sum().maxCoeff());
    scaled = diff / size;
    if (!std::isfinite(scaled)) break;
    if (scaled <= tol) {
      // The gain belongs to P itself, which is the iterate whose residual was measured.
      return {std::move(P), std::move(update.gain), it, scaled};
    }
    P = std::move(update.next);
  }
  throw NoConvergence("solve_dare: no convergence after " + std::to_string(max_iter) +
                          " iterations",
                      scaled);
}

Matrix fd_jacobian(const VectorFunction& fn, const Vector& at, std::optional<double> step) {
  const double at_size = at.size() > 0 ? at.cwiseAbs().maxCoeff() : 0.0;
  const double h = step.value_or(1e-6 * (1.0 + at_size));
  const Vector f0 = fn(at);
  if (!f0.allFinite()) throw NonFiniteEvaluation("fd_jacobian: non-finite value at base point");
  Matrix jac(f0.size(), at.size());
  Vector probe = at;
  for (Eigen::Index j = 0; j < at.size(); ++j) {
    probe(j) = at(j) + h;
    const Vector fp = fn(probe);
    probe(j) = at(j) - h;
    const Vector fm = fn(probe);
    probe(j) = at(j);
    if (!fp.allFinite() || !fm.allFinite()) {
      throw NonFiniteEvaluation("fd_jacobian: non-finite value while perturbing coordinate " +
                                std::to_string(j));
    }
    jac.col(j) = (fp - fm) / (2.0 * h);
  }
  return jac;
}

}  // namespace sspc
