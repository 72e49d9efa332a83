#include "sspc/closed_loop_sim.hpp"

#include "sspc/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace sspc {

PlantModel make_plant(int n_x, int n_u, PlantModel::StepFn step, double tau) {
  if (n_x < 1 || n_u < 0) throw DimensionMismatch("make_plant: invalid dimensions");
  const Vector origin = step(Vector::Zero(n_x), Vector::Zero(n_u));
  if (origin.size() != n_x) throw DimensionMismatch("make_plant: step returns wrong length");
  if (!(origin.cwiseAbs().maxCoeff() <= 1e-12)) {
    throw DimensionMismatch("make_plant: the origin must be an equilibrium, f_d(0,0) != 0");
  }
  return {n_x, n_u, std::move(step), {}, tau};
}

PlantModel euler_discretize(int n_x, int n_u, PlantModel::StepFn field, double tau) {
  if (!(tau > 0.0)) throw ConfigError("euler_discretize: tau must be positive");
  auto step = [field, tau](const Vector& x, const Vector& u) -> Vector {
    return x + tau * field(x, u);
  };
  PlantModel plant = make_plant(n_x, n_u, step, tau);
  plant.field = std::move(field);
  return plant;
}

Vector constraint_margins(const OcpSpec& ocp, const Vector& x, const Vector& u) {
  if (x.size() != ocp.n_x || u.size() != ocp.n_u) {
    throw DimensionMismatch("constraint_margins: dimension mismatch");
  }
  if (ocp.n_c == 0) return Vector(0);
  return ocp.path_constraint(x, u);
}

SimTrace simulate(const PlantModel& plant, const OcpSpec& ocp, CompensatorState& compensator,
                  const SimConfig& cfg) {
  if (cfg.steps < 1) throw ConfigError("simulate: steps must be >= 1");
  if (plant.n_x != compensator.layout.n_x || plant.n_u != compensator.layout.n_u ||
      ocp.n_x != plant.n_x || ocp.n_u != plant.n_u) {
    throw DimensionMismatch("simulate: plant, OCP and compensator dimensions differ");
  }
  for (const auto& d : cfg.input_disturbance) {
    if (d.size() != plant.n_u) throw DimensionMismatch("simulate: disturbance length != n_u");
  }
  using Clock = std::chrono::steady_clock;

  SimTrace trace;
  trace.n_x = plant.n_x;
  trace.n_u = plant.n_u;
  trace.records.reserve(std::size_t(cfg.steps) + 1);

  Vector x = compensator.p_prev;
  for (int k = 0; k <= cfg.steps; ++k) {
    TraceRecord rec;
    rec.k = k;
    rec.t = plant.tau > 0.0 ? k * plant.tau : double(k);
    rec.x = x;
    rec.ell = compensator.cfg.ell;
    try {
      const auto start = Clock::now();
      rec.u = update(compensator, x);
      rec.step_wall_s = std::chrono::duration<double>(Clock::now() - start).count();
      rec.residual = residual(*compensator.nlp, compensator.z, x).norm2;
      rec.cost = plan_cost(ocp, compensator.layout, compensator.z, x);
      rec.margins = constraint_margins(ocp, x, rec.u);
      rec.max_violation = rec.margins.size() ? std::max(0.0, rec.margins.maxCoeff()) : 0.0;
      if (cfg.record_suboptimality) rec.subopt_err = suboptimality_error(compensator, x);
    } catch (const Error& e) {
      trace.abort_reason = "step " + std::to_string(k) + ": " + e.what();
      return trace;
    }
    Vector u_applied = rec.u;
    if (std::size_t(k) < cfg.input_disturbance.size()) u_applied += cfg.input_disturbance[k];
    trace.records.push_back(std::move(rec));
    if (k == cfg.steps) break;

    x = plant.step(x, u_applied);
    if (!x.allFinite()) {
      trace.abort_reason = "step " + std::to_string(k) + ": plant state became non-finite";
      return trace;
    }
  }
  return trace;
}

}  // namespace sspc
