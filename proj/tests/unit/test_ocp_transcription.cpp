#include "fixtures.hpp"

#include "sspc/errors.hpp"
#include "sspc/problems.hpp"
#include "sspc/sspc_solver.hpp"

#include <doctest.h>

#include <numeric>

using namespace sspc;

TEST_CASE("dimension bookkeeping") {
  const auto one = transcribe(testing::scalar_integrator_ocp(1));
  CHECK(one.nlp->n == 2);
  CHECK(one.nlp->m == 1);
  CHECK(one.nlp->q == 0);

  const auto sc = make_problem("spacecraft");
  CHECK(sc.nlp->n == 270);
  CHECK(sc.nlp->m == 180);
  // stage 0 keeps only the 6 input rows; stages 1..29 keep all 12; one terminal row
  CHECK(sc.nlp->q == 6 + 29 * 12 + 1);
  CHECK(sc.layout->terminal_row() == 354);
  CHECK(sc.layout->path_row(1) == 6);
  CHECK(sc.layout->path_row(2) == 18);
}

TEST_CASE("scalar integrator minimum at p = 0 is w = 0") {
  const auto tr = transcribe(testing::scalar_integrator_ocp(2));
  SspcConfig cfg;
  const auto sol = solve_to_convergence(*tr.nlp, cfg, PrimalDualPoint::zeros(4, 2, 0),
                                        Vector::Zero(1));
  CHECK(sol.iterations == 0);
  CHECK(sol.z.w.isZero(0.0));

  // from elsewhere the Newton iteration lands on the same point
  const auto moved = solve_to_convergence(
      *tr.nlp, cfg, PrimalDualPoint{Vector{{1.0, -2.0, 0.5, 3.0}}, Vector::Ones(2), Vector(0)},
      Vector::Zero(1));
  CHECK(moved.z.w.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("extract_control reads the u_0 slots") {
  const auto problem = make_problem("spacecraft");
  const auto& layout = *problem.layout;
  auto z = PrimalDualPoint::zeros(problem.nlp->n, problem.nlp->m, problem.nlp->q);
  CHECK(extract_control(layout, z).isZero(0.0));

  // tag every primal slot with its own index
  std::iota(z.w.begin(), z.w.end(), 0.0);
  const Vector u = extract_control(layout, z);
  CHECK(u == Vector{{180.0, 181.0, 182.0}});

  z.w.segment(layout.input_offset(0), 3) = Vector{{1.0, 2.0, 3.0}};
  CHECK(extract_control(layout, z) == Vector{{1.0, 2.0, 3.0}});
  CHECK_THROWS_AS(extract_control(layout, PrimalDualPoint::zeros(5, 0, 0)), DimensionMismatch);
}

TEST_CASE("plan_cost") {
  const auto ocp = testing::scalar_integrator_ocp(1);
  const auto tr = transcribe(ocp);
  CHECK(plan_cost(ocp, tr.layout, PrimalDualPoint::zeros(2, 1, 0), Vector::Zero(1)) == 0.0);
  // l(1, 1) + V_f(1) = 2 + 1
  const PrimalDualPoint z{Vector{{1.0, 1.0}}, Vector::Zero(1), Vector(0)};
  CHECK(plan_cost(ocp, tr.layout, z, Vector::Ones(1)) == doctest::Approx(3.0));

  const auto problem = make_problem("spacecraft");
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    const auto [zr, p] = problem.sampler(rng);
    CHECK(plan_cost(*problem.ocp, *problem.layout, zr, p) >= 0.0);
    CHECK(plan_cost(*problem.ocp, *problem.layout, zr, p) ==
          doctest::Approx(problem.nlp->objective(zr.w, p)));
  }
}

TEST_CASE("objective gradient matches finite differences") {
  const auto problem = make_problem("spacecraft");
  std::mt19937_64 rng(12);
  for (int i = 0; i < 50; ++i) {
    const auto [z, p] = problem.sampler(rng);
    const Vector g = problem.nlp->objective_gradient(z.w, p);
    const Matrix fd = fd_jacobian(
        [&](const Vector& w) -> Vector { return Vector::Constant(1, problem.nlp->objective(w, p)); },
        z.w);
    CHECK(error_ratio(g.transpose(), fd, {}) <= 1.0);
  }
}

TEST_CASE("consistent dynamics give a zero equality block") {
  const auto problem = make_problem("spacecraft");
  const auto& layout = *problem.layout;
  std::mt19937_64 rng(13);
  auto [z, p] = problem.sampler(rng);
  p *= 0.3;
  Vector x = p;
  for (int i = 0; i < layout.horizon; ++i) {
    x = problem.plant->step(x, z.w.segment(layout.input_offset(i), layout.n_u));
    z.w.segment(layout.state_offset(i + 1), layout.n_x) = x;
  }
  CHECK(residual(*problem.nlp, z, p).equality.isZero(0.0));
}

TEST_CASE("parameter enters through stage 0 only") {
  const auto problem = make_problem("double_integrator");
  const auto& layout = *problem.layout;
  std::mt19937_64 rng(14);
  const auto [z, p] = problem.sampler(rng);
  const Matrix Gp = problem.nlp->equality_param_jacobian(z.w, p);
  CHECK(!Gp.topRows(layout.n_x).isZero(0.0));
  CHECK(Gp.bottomRows(layout.m() - layout.n_x).isZero(0.0));
  const Matrix Hp = problem.nlp->inequality_param_jacobian(z.w, p);
  CHECK(Hp.bottomRows(layout.q() - layout.path_row_count(0)).isZero(0.0));

  // the spacecraft dynamics depend on x at stage 0
  const auto sc = make_problem("spacecraft");
  const auto [zs, ps] = sc.sampler(rng);
  const Matrix Gs = sc.nlp->equality_param_jacobian(zs.w, ps);
  CHECK(Gs.bottomRows(sc.layout->m() - 6).isZero(0.0));
  CHECK(sc.nlp->inequality_param_jacobian(zs.w, ps).isZero(0.0));
}

TEST_CASE("invalid OCP specifications") {
  auto ocp = testing::scalar_integrator_ocp(2);
  ocp.horizon = 0;
  CHECK_THROWS_AS(transcribe(ocp), DimensionMismatch);

  ocp = testing::scalar_integrator_ocp(2);
  ocp.dynamics = [](const Vector& x, const Vector&) -> Vector { return Vector::Zero(2 * x.size()); };
  CHECK_THROWS_AS(transcribe(ocp), DimensionMismatch);

  ocp = testing::scalar_integrator_ocp(2);
  ocp.stage_cost = [](const Vector&, const Vector&) { return 1.0; };
  CHECK_THROWS_AS(transcribe(ocp), DimensionMismatch);
}
