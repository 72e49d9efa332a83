#pragma once

#include "sspc/mpc_runtime.hpp"
#include "sspc/ocp_transcription.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sspc {

/// Discrete plant x+ = f_d(x, u).
struct PlantModel {
  using StepFn = std::function<Vector(const Vector& x, const Vector& u)>;

  int n_x = 0;
  int n_u = 0;
  StepFn step;
  StepFn field;      ///< continuous vector field, when built by integration
  double tau = 0.0;  ///< sample time in seconds, 0 when unknown
};

/// Wraps a discrete map, checking f_d(0, 0) = 0 to within 1e-12.
PlantModel make_plant(int n_x, int n_u, PlantModel::StepFn step, double tau = 0.0);

/// f_d(x, u) = x + tau * f_c(x, u).
PlantModel euler_discretize(int n_x, int n_u, PlantModel::StepFn field, double tau);

/// c(x, u) componentwise; nonpositive entries are satisfied constraints.
Vector constraint_margins(const OcpSpec& ocp, const Vector& x, const Vector& u);

struct SimConfig {
  int steps = 200;
  bool record_suboptimality = false;
  /// Additive input disturbance d_k; entries past the end count as zero.
  std::vector<Vector> input_disturbance;
};

struct TraceRecord {
  int k = 0;
  double t = 0.0;
  Vector x;
  Vector u;
  double residual = 0.0;  ///< ||F(z_k, x_k)||
  double cost = 0.0;      ///< plan cost J(z_k; x_k)
  Vector margins;
  double max_violation = 0.0;  ///< max(0, max margins)
  std::optional<double> subopt_err;
  int ell = 0;
  double step_wall_s = 0.0;
};

struct SimTrace {
  int n_x = 0;
  int n_u = 0;
  std::vector<TraceRecord> records;
  std::optional<std::string> abort_reason;
};

/// Runs the plant in loop with the compensator for cfg.steps transitions.
/// The trace holds cfg.steps + 1 records (k = 0..steps); each records the
/// measured state and the control computed from it. A solver error ends the
/// run early with the cause in abort_reason.
SimTrace simulate(const PlantModel& plant, const OcpSpec& ocp, CompensatorState& compensator,
                  const SimConfig& cfg);

}  // namespace sspc
