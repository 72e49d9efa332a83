#pragma once

#include <Eigen/Dense>

#include <optional>
#include <stdexcept>
#include <string>

namespace sspc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pivot fell below the singularity threshold during a linear solve.
///
/// `iteration` identifies where inside an SSPC step the failure happened:
/// -1 for the predictor, j >= 0 for the j-th corrector, unset otherwise.
class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(const std::string& what, std::optional<int> iteration = std::nullopt)
      : Error(what), iteration(iteration) {}

  std::optional<int> iteration;
};

/// An iterative method ran out of iterations. Carries the best iterate seen
/// (stacked, when meaningful) and the final residual.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double residual,
                std::optional<Eigen::VectorXd> best_iterate = std::nullopt)
      : Error(what), residual(residual), best_iterate(std::move(best_iterate)) {}

  double residual;
  std::optional<Eigen::VectorXd> best_iterate;
};

class NonFiniteEvaluation : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The 3-2-1 Euler-angle kinematics are singular at pitch = +-90 deg.
class GimbalLock : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace sspc
