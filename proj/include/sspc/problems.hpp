#pragma once

#include "sspc/closed_loop_sim.hpp"
#include "sspc/derivative_check.hpp"
#include "sspc/ocp_transcription.hpp"
#include "sspc/spacecraft_model.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sspc {

/// min 1/2 (w - p)^2 s.t. w >= 1. Solution map w*(p) = max(p, 1),
/// v*(p) = max(0, 1 - p).
ParametricNLP make_tracking_qp();

/// Double integrator with sample time h: x+ = (pos + h vel + h^2/2 u, vel + h u),
/// l = |x|^2 + 0.1 u^2, DARE terminal cost, |vel| <= 1, |u| <= 1, no terminal set.
OcpSpec make_double_integrator_ocp(int horizon = 20, double h = 0.5);
PlantModel make_double_integrator_plant(double h = 0.5);

struct ProblemOptions {
  std::optional<int> horizon;
  std::optional<double> tau;
};

/// A named built-in problem with everything the CLI needs to run it.
/// Problems without an OCP (tracking_qp) have no layout, plant or ocp.
struct Problem {
  std::string name;
  std::shared_ptr<const ParametricNLP> nlp;
  std::shared_ptr<const OcpSpec> ocp;
  std::optional<VariableLayout> layout;
  std::optional<PlantModel> plant;
  Vector default_x0;
  PointSampler sampler;  ///< random points for derivative checks
  /// Indices of x that are angles (converted when a config gives degrees).
  std::vector<int> angle_indices;
  std::optional<spacecraft::TerminalIngredients> terminal;
};

const std::vector<std::string>& problem_names();

/// Throws ConfigError for unknown names.
Problem make_problem(const std::string& name, const ProblemOptions& options = {});

}  // namespace sspc
