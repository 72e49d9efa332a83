#include "sspc/problems.hpp"

#include "sspc/errors.hpp"

#include <random>

namespace sspc {

ParametricNLP make_tracking_qp() {
  ParametricNLP nlp;
  nlp.n = 1;
  nlp.m = 0;
  nlp.q = 1;
  nlp.n_p = 1;
  nlp.objective = [](const Vector& w, const Vector& p) {
    return 0.5 * (w(0) - p(0)) * (w(0) - p(0));
  };
  nlp.objective_gradient = [](const Vector& w, const Vector& p) -> Vector { return w - p; };
  nlp.inequality = [](const Vector& w, const Vector&) -> Vector {
    return Vector::Constant(1, 1.0 - w(0));
  };
  nlp.inequality_jacobian = [](const Vector&, const Vector&) -> Matrix {
    return Matrix::Constant(1, 1, -1.0);
  };
  nlp.inequality_param_jacobian = [](const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(1, 1);
  };
  nlp.lagrangian_hessian = [](const PrimalDualPoint&, const Vector&) -> Matrix {
    return Matrix::Identity(1, 1);
  };
  nlp.lagrangian_param_cross = [](const PrimalDualPoint&, const Vector&) -> Matrix {
    return Matrix::Constant(1, 1, -1.0);
  };
  return nlp;
}

namespace {

struct DoubleIntegrator {
  Matrix A;
  Matrix B;
};

DoubleIntegrator double_integrator(double h) {
  Matrix A(2, 2), B(2, 1);
  A << 1.0, h, 0.0, 1.0;
  B << 0.5 * h * h, h;
  return {A, B};
}

}  // namespace

OcpSpec make_double_integrator_ocp(int horizon, double h) {
  const auto [A, B] = double_integrator(h);
  const Matrix Q = Matrix::Identity(2, 2);
  const Matrix R = Matrix::Constant(1, 1, 0.1);
  const Matrix P = solve_dare(A, B, Q, R).P;

  OcpSpec ocp;
  ocp.horizon = horizon;
  ocp.n_x = 2;
  ocp.n_u = 1;
  ocp.n_c = 4;
  ocp.n_cf = 0;
  ocp.dynamics = [A, B](const Vector& x, const Vector& u) -> Vector { return A * x + B * u; };
  Matrix AB(2, 3);
  AB << A, B;
  ocp.dynamics_jacobian = [AB](const Vector&, const Vector&) -> Matrix { return AB; };
  ocp.dynamics_hessian = [](const Vector&, const Vector&, const Vector&) -> Matrix {
    return Matrix::Zero(3, 3);
  };
  Matrix W = Matrix::Zero(3, 3);
  W.topLeftCorner(2, 2) = Q;
  W.bottomRightCorner(1, 1) = R;
  ocp.stage_cost = [W](const Vector& x, const Vector& u) {
    Vector y(3);
    y << x, u;
    return y.dot(W * y);
  };
  ocp.stage_cost_gradient = [W](const Vector& x, const Vector& u) -> Vector {
    Vector y(3);
    y << x, u;
    return 2.0 * W * y;
  };
  ocp.stage_cost_hessian = [W](const Vector&, const Vector&) -> Matrix { return 2.0 * W; };
  ocp.terminal_cost = [P](const Vector& x) { return x.dot(P * x); };
  ocp.terminal_cost_gradient = [P](const Vector& x) -> Vector { return 2.0 * P * x; };
  ocp.terminal_cost_hessian = [P](const Vector&) -> Matrix { return 2.0 * P; };

  // vel - 1, -vel - 1, u - 1, -u - 1
  Matrix C = Matrix::Zero(4, 3);
  C(0, 1) = 1.0;
  C(1, 1) = -1.0;
  C(2, 2) = 1.0;
  C(3, 2) = -1.0;
  ocp.path_constraint = [C](const Vector& x, const Vector& u) -> Vector {
    Vector y(3);
    y << x, u;
    return C * y - Vector::Ones(4);
  };
  ocp.path_constraint_jacobian = [C](const Vector&, const Vector&) -> Matrix { return C; };
  ocp.path_row_state_only = {true, true, false, false};
  return ocp;
}

PlantModel make_double_integrator_plant(double h) {
  const auto [A, B] = double_integrator(h);
  return make_plant(2, 1, [A, B](const Vector& x, const Vector& u) -> Vector {
    return A * x + B * u;
  }, h);
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"spacecraft", "tracking_qp", "double_integrator"};
  return names;
}

namespace {

/// Uniform sampler over boxes for states, inputs, multipliers and the parameter.
PointSampler ocp_sampler(std::shared_ptr<const ParametricNLP> nlp, VariableLayout layout,
                         Vector state_scale, double input_scale, double multiplier_scale) {
  return [nlp, layout, state_scale, input_scale,
          multiplier_scale](std::mt19937_64& rng) -> std::pair<PrimalDualPoint, Vector> {
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    auto z = PrimalDualPoint::zeros(nlp->n, nlp->m, nlp->q);
    for (int i = 1; i <= layout.horizon; ++i)
      for (int j = 0; j < layout.n_x; ++j)
        z.w(layout.state_offset(i) + j) = state_scale(j) * unit(rng);
    for (int i = 0; i < layout.horizon; ++i)
      for (int j = 0; j < layout.n_u; ++j) z.w(layout.input_offset(i) + j) = input_scale * unit(rng);
    for (auto& l : z.lambda) l = multiplier_scale * unit(rng);
    for (auto& v : z.v) v = multiplier_scale * 0.5 * (1.0 + unit(rng));
    Vector p(layout.n_x);
    for (int j = 0; j < layout.n_x; ++j) p(j) = state_scale(j) * unit(rng);
    return {std::move(z), std::move(p)};
  };
}

}  // namespace

Problem make_problem(const std::string& name, const ProblemOptions& options) {
  Problem problem;
  problem.name = name;
  if (name == "tracking_qp") {
    problem.nlp = std::make_shared<const ParametricNLP>(make_tracking_qp());
    problem.default_x0 = Vector::Constant(1, 2.0);
    problem.sampler = [](std::mt19937_64& rng) -> std::pair<PrimalDualPoint, Vector> {
      std::uniform_real_distribution<double> unit(-3.0, 3.0);
      PrimalDualPoint z{Vector::Constant(1, unit(rng)), Vector(0), Vector::Constant(1, unit(rng))};
      return {z, Vector::Constant(1, unit(rng))};
    };
    return problem;
  }

  if (name == "spacecraft") {
    spacecraft::SpacecraftParams params;
    if (options.horizon) params.horizon = *options.horizon;
    if (options.tau) params.tau = *options.tau;
    auto ti = spacecraft::build_terminal_ingredients(params);
    problem.ocp = std::make_shared<const OcpSpec>(spacecraft::build_spacecraft_ocp(params, ti.set));
    problem.plant = spacecraft::make_spacecraft_plant(params);
    problem.default_x0 = params.x0;
    problem.angle_indices = {3, 4, 5};
    problem.terminal = std::move(ti);
    auto tr = transcribe(*problem.ocp);
    problem.nlp = tr.nlp;
    problem.layout = tr.layout;
    problem.sampler = ocp_sampler(tr.nlp, tr.layout,
                                  Vector{{0.05, 0.05, 0.05, 1.0, 1.0, 1.0}}, 3.0, 10.0);
    return problem;
  }

  if (name == "double_integrator") {
    const int horizon = options.horizon.value_or(20);
    const double h = options.tau.value_or(0.5);
    problem.ocp = std::make_shared<const OcpSpec>(make_double_integrator_ocp(horizon, h));
    problem.plant = make_double_integrator_plant(h);
    problem.default_x0 = Vector{{3.0, 0.0}};
    auto tr = transcribe(*problem.ocp);
    problem.nlp = tr.nlp;
    problem.layout = tr.layout;
    problem.sampler = ocp_sampler(tr.nlp, tr.layout, Vector{{5.0, 2.0}}, 2.0, 10.0);
    return problem;
  }

  throw ConfigError("unknown problem '" + name + "' (expected spacecraft, tracking_qp or "
                    "double_integrator)");
}

}  // namespace sspc
