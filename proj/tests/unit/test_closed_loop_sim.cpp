#include "sspc/closed_loop_sim.hpp"
#include "sspc/errors.hpp"
#include "sspc/problems.hpp"
#include "sspc/trace_io.hpp"

#include <doctest.h>

#include <charconv>
#include <random>
#include <sstream>

using namespace sspc;

namespace {

struct Loop {
  Problem problem;
  CompensatorState state;
};

Loop make_loop(const std::string& name, const Vector& x0, int ell = 1) {
  Loop loop{make_problem(name), {}};
  SspcConfig cfg;
  cfg.ell = ell;
  loop.state = init_compensator(loop.problem.nlp, *loop.problem.layout, cfg, std::nullopt, x0);
  return loop;
}

}  // namespace

TEST_CASE("euler_discretize") {
  auto field = [](const Vector& x, const Vector& u) -> Vector { return -x + u; };
  const auto plant = euler_discretize(1, 1, field, 0.5);
  CHECK(plant.step(Vector::Constant(1, 2.0), Vector::Constant(1, 1.0))(0) == 1.5);
  CHECK(plant.tau == 0.5);
  CHECK_THROWS_AS(euler_discretize(1, 1, field, 0.0), ConfigError);

  auto drifting = [](const Vector& x, const Vector&) -> Vector {
    return x + Vector::Ones(x.size());
  };
  CHECK_THROWS_AS(euler_discretize(1, 1, drifting, 0.5), DimensionMismatch);
}

TEST_CASE("constraint_margins on the spacecraft") {
  const auto problem = make_problem("spacecraft");
  const auto& ocp = *problem.ocp;
  const Vector m0 = constraint_margins(ocp, Vector::Zero(6), Vector::Zero(3));
  REQUIRE(m0.size() == 12);
  CHECK((m0.head(6).array() == -0.02).all());
  CHECK((m0.tail(6).array() == -2.0).all());

  Vector x = Vector::Zero(6);
  x(0) = 0.03;
  const Vector m1 = constraint_margins(ocp, x, Vector::Zero(3));
  CHECK(m1.maxCoeff() == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(m1(0) == doctest::Approx(0.01).epsilon(1e-12));

  CHECK_THROWS_AS(constraint_margins(ocp, Vector::Zero(5), Vector::Zero(3)), DimensionMismatch);
}

TEST_CASE("the origin is a fixed point of the closed loop") {
  auto loop = make_loop("spacecraft", Vector::Zero(6));
  SimConfig cfg;
  cfg.steps = 3;
  const auto trace = simulate(*loop.problem.plant, *loop.problem.ocp, loop.state, cfg);
  REQUIRE_FALSE(trace.abort_reason);
  REQUIRE(trace.records.size() == 4);
  for (const auto& r : trace.records) {
    CHECK(r.x.isZero(0.0));
    CHECK(r.u.isZero(0.0));
    CHECK(r.residual == 0.0);
    CHECK(r.max_violation == 0.0);
  }
  CHECK(trace.records[2].t == 6.0);
}

TEST_CASE("trace records are consistent with the plant and solver") {
  auto loop = make_loop("double_integrator", make_problem("double_integrator").default_x0, 2);
  SimConfig cfg;
  cfg.steps = 25;
  cfg.record_suboptimality = true;
  const auto& plant = *loop.problem.plant;
  const auto trace = simulate(plant, *loop.problem.ocp, loop.state, cfg);
  REQUIRE_FALSE(trace.abort_reason);
  REQUIRE(trace.records.size() == 26);

  // replaying the compensator independently reproduces the logged residuals
  SspcConfig scfg;
  scfg.ell = 2;
  auto replay = init_compensator(loop.problem.nlp, *loop.problem.layout, scfg, std::nullopt,
                                 trace.records[0].x);
  for (std::size_t k = 0; k < trace.records.size(); ++k) {
    const auto& r = trace.records[k];
    CAPTURE(k);
    CHECK(r.k == int(k));
    CHECK(r.ell == 2);
    const Vector u = update(replay, r.x);
    CHECK(u == r.u);
    CHECK(residual(*loop.problem.nlp, replay.z, r.x).norm2 == r.residual);
    REQUIRE(r.subopt_err.has_value());
    CHECK(*r.subopt_err >= 0.0);
    if (k + 1 < trace.records.size()) CHECK(trace.records[k + 1].x == plant.step(r.x, r.u));
  }
}

TEST_CASE("input disturbance is added to the applied control") {
  const Vector x0 = make_problem("double_integrator").default_x0;
  auto clean = make_loop("double_integrator", x0);
  auto disturbed = make_loop("double_integrator", x0);
  SimConfig cfg;
  cfg.steps = 2;
  const auto a = simulate(*clean.problem.plant, *clean.problem.ocp, clean.state, cfg);
  cfg.input_disturbance = {Vector::Constant(1, 0.25)};
  const auto b = simulate(*disturbed.problem.plant, *disturbed.problem.ocp, disturbed.state, cfg);
  CHECK(a.records[0].u == b.records[0].u);
  const Vector expected = disturbed.problem.plant->step(x0, a.records[0].u + Vector::Constant(1, 0.25));
  CHECK(b.records[1].x == expected);

  cfg.input_disturbance = {Vector::Zero(2)};
  auto bad = make_loop("double_integrator", x0);
  CHECK_THROWS_AS(simulate(*bad.problem.plant, *bad.problem.ocp, bad.state, cfg),
                  DimensionMismatch);
  cfg.input_disturbance.clear();
  cfg.steps = 0;
  CHECK_THROWS_AS(simulate(*bad.problem.plant, *bad.problem.ocp, bad.state, cfg), ConfigError);
}

TEST_CASE("spacecraft run produces steps + 1 finite records") {
  auto loop = make_loop("spacecraft", make_problem("spacecraft").default_x0);
  SimConfig cfg;
  cfg.steps = 5;
  const auto trace = simulate(*loop.problem.plant, *loop.problem.ocp, loop.state, cfg);
  REQUIRE_FALSE(trace.abort_reason);
  CHECK(trace.records.size() == 6);
  for (const auto& r : trace.records) {
    CHECK(r.x.allFinite());
    CHECK(r.u.allFinite());
    CHECK(r.margins.size() == 12);
  }
}

TEST_CASE("format_double round-trips") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> exponent(-300.0, 300.0);
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double value = mantissa(rng) * std::pow(10.0, exponent(rng));
    const std::string s = format_double(value);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == value);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(3.0) == "3");
}

TEST_CASE("trace csv layout") {
  CHECK(trace_csv_header(2, 1) ==
        "k,t,x_0,x_1,u_0,residual,cost,max_violation,subopt_err,ell,step_wall_s");
  SimTrace trace;
  trace.n_x = 1;
  trace.n_u = 1;
  TraceRecord r;
  r.k = 0;
  r.t = 0.0;
  r.x = Vector::Constant(1, 0.25);
  r.u = Vector::Constant(1, -1.0);
  r.residual = 1e-10;
  r.cost = 2.0;
  r.ell = 3;
  r.step_wall_s = 0.125;
  trace.records.push_back(r);

  std::ostringstream plain;
  write_trace_csv(trace, plain);
  CHECK(plain.str() ==
        "k,t,x_0,u_0,residual,cost,max_violation,subopt_err,ell,step_wall_s\n"
        "0,0,0.25,-1,1e-10,2,0,,3,\n");
  std::ostringstream timed;
  write_trace_csv(trace, timed, true);
  CHECK(timed.str().ends_with(",,3,0.125\n"));
}

TEST_CASE("many correctors keep the logged suboptimality small") {
  auto loop = make_loop("spacecraft", make_problem("spacecraft").default_x0, 10);
  SimConfig cfg;
  cfg.steps = 8;
  cfg.record_suboptimality = true;
  const auto trace = simulate(*loop.problem.plant, *loop.problem.ocp, loop.state, cfg);
  REQUIRE_FALSE(trace.abort_reason);
  for (std::size_t k = 3; k < trace.records.size(); ++k) {
    CAPTURE(k);
    CHECK(*trace.records[k].subopt_err <= 1e-6);
  }
}
