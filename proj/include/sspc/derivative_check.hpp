#pragma once

#include "sspc/parametric_nlp.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace sspc {

/// Entrywise agreement test: |a - b| <= max(abs_tol, rel_tol * max(|a|, |b|)).
struct DerivativeTolerance {
  double abs_tol = 1e-6;
  double rel_tol = 1e-5;
};

struct BlockReport {
  std::string block;
  double max_abs_error = 0.0;
  double worst_ratio = 0.0;  ///< error / allowed, > 1 means failure
  int worst_point = -1;
  Eigen::Index worst_row = -1;
  Eigen::Index worst_col = -1;
  bool pass = true;
};

struct DerivativeReport {
  std::vector<BlockReport> blocks;
  bool pass = true;
};

using PointSampler = std::function<std::pair<PrimalDualPoint, Vector>(std::mt19937_64&)>;

/// Compares every analytic derivative callback of `nlp` against central
/// differences of the lower-order callbacks at `n_points` sampled points.
DerivativeReport check_derivatives(const ParametricNLP& nlp, const PointSampler& sampler,
                                   int n_points, std::uint64_t seed,
                                   DerivativeTolerance tol = {});

/// Largest error ratio between two matrices under `tol`; fills row/col of the worst entry.
double error_ratio(const Matrix& analytic, const Matrix& reference, DerivativeTolerance tol,
                   Eigen::Index* row = nullptr, Eigen::Index* col = nullptr);

}  // namespace sspc
