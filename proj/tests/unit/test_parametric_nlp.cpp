#include "fixtures.hpp"

#include "sspc/errors.hpp"
#include "sspc/parametric_nlp.hpp"
#include "sspc/problems.hpp"

#include <doctest.h>

#include <cmath>

using namespace sspc;

TEST_CASE("fb values") {
  CHECK(fb(0.0, 0.0) == 0.0);
  CHECK(fb(1.0, 0.0) == 0.0);
  CHECK(fb(3.0, 4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(fb(-1.0, 0.0) == doctest::Approx(-2.0).epsilon(1e-15));
}

TEST_CASE("fb vanishes exactly on the complementarity set") {
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a = -2.0 + 0.04 * i;
      const double b = -2.0 + 0.04 * j;
      const bool complementary = a >= -1e-12 && b >= -1e-12 && std::abs(a * b) <= 1e-12;
      CAPTURE(a);
      CAPTURE(b);
      CHECK((std::abs(fb(a, b)) <= 1e-12) == complementary);
      CHECK(fb(a, b) == fb(b, a));
    }
  }
}

TEST_CASE("fb_pair_derivative") {
  auto d = fb_pair_derivative(-3.0, 4.0);
  CHECK(d.nu == doctest::Approx(0.4));
  CHECK(d.mu == doctest::Approx(0.2));

  d = fb_pair_derivative(0.0, 0.0);
  CHECK(d.nu == doctest::Approx(1.0 - std::sqrt(0.5)));
  CHECK(d.mu == doctest::Approx(1.0 - std::sqrt(0.5)));

  d = fb_pair_derivative(0.0, 1.0);
  CHECK(d.nu == 1.0);
  CHECK(d.mu == 0.0);

  d = fb_pair_derivative(0.0, 0.0, 0.6, 0.8);
  CHECK(d.nu == doctest::Approx(0.4));
  CHECK(d.mu == doctest::Approx(0.2));
}

namespace {

ParametricNLP unconstrained_quadratic() {
  ParametricNLP nlp;
  nlp.n = 2;
  nlp.n_p = 1;
  nlp.objective = [](const Vector& w, const Vector&) { return 0.5 * w.squaredNorm(); };
  nlp.objective_gradient = [](const Vector& w, const Vector&) -> Vector { return w; };
  nlp.lagrangian_hessian = [](const PrimalDualPoint&, const Vector&) -> Matrix {
    return Matrix::Identity(2, 2);
  };
  nlp.lagrangian_param_cross = [](const PrimalDualPoint&, const Vector&) -> Matrix {
    return Matrix::Zero(2, 1);
  };
  return nlp;
}

}  // namespace

TEST_CASE("residual") {
  const auto nlp = unconstrained_quadratic();
  const auto r = residual(nlp, PrimalDualPoint{Vector{{2.0, 0.0}}, Vector(0), Vector(0)},
                          Vector::Zero(1));
  CHECK(r.stationarity.isApprox(Vector{{2.0, 0.0}}));
  CHECK(r.norm2 == doctest::Approx(2.0));
  CHECK(r.stacked().norm() == doctest::Approx(r.norm2).epsilon(1e-15));

  // tracking QP at its KKT point for p = 0: w = 1, v = 1
  const auto qp = make_tracking_qp();
  const auto kkt = residual(qp, PrimalDualPoint{Vector::Ones(1), Vector(0), Vector::Ones(1)},
                            Vector::Zero(1));
  CHECK(kkt.norm2 <= 1e-12);

  const auto bad = PrimalDualPoint{Vector::Ones(3), Vector(0), Vector::Ones(1)};
  CHECK_THROWS_AS(residual(qp, bad, Vector::Zero(1)), DimensionMismatch);
}

TEST_CASE("residual of the spacecraft problem at z = 0 is the stage-0 dynamics defect") {
  const auto problem = make_problem("spacecraft");
  const auto z = PrimalDualPoint::zeros(problem.nlp->n, problem.nlp->m, problem.nlp->q);
  const auto r = residual(*problem.nlp, z, problem.default_x0);
  // xi_1 = 0 while f_d(x0, 0) = x0 (Euler step with zero rates and torques)
  CHECK(r.stationarity.norm() == 0.0);
  CHECK(r.complementarity.norm() == 0.0);
  CHECK(r.norm2 == doctest::Approx(problem.default_x0.norm()).epsilon(1e-14));
}

TEST_CASE("jacobian_z structure") {
  SUBCASE("q = 0 gives the smooth KKT matrix") {
    std::mt19937_64 rng(2);
    const auto qp = testing::random_dense_qp(rng, 4, 2, 0, 1);
    const auto z = PrimalDualPoint{testing::random_vector(rng, 4), testing::random_vector(rng, 2), Vector(0)};
    const Matrix J = jacobian_z(qp.nlp, z, Vector::Zero(1));
    Matrix expected = Matrix::Zero(6, 6);
    expected.topLeftCorner(4, 4) = qp.H;
    expected.topRightCorner(4, 2) = qp.A.transpose();
    expected.bottomLeftCorner(2, 4) = qp.A;
    CHECK(J == expected);
  }
  SUBCASE("single inactive inequality, no primal variables") {
    ParametricNLP nlp;
    nlp.q = 1;
    nlp.n_p = 1;
    nlp.objective = [](const Vector&, const Vector&) { return 0.0; };
    nlp.objective_gradient = [](const Vector&, const Vector&) -> Vector { return Vector(0); };
    nlp.inequality = [](const Vector&, const Vector&) -> Vector { return Vector::Constant(1, -1.0); };
    nlp.inequality_jacobian = [](const Vector&, const Vector&) -> Matrix { return Matrix(1, 0); };
    nlp.inequality_param_jacobian = [](const Vector&, const Vector&) -> Matrix {
      return Matrix::Zero(1, 1);
    };
    nlp.lagrangian_hessian = [](const PrimalDualPoint&, const Vector&) -> Matrix { return Matrix(0, 0); };
    nlp.lagrangian_param_cross = [](const PrimalDualPoint&, const Vector&) -> Matrix {
      return Matrix(0, 1);
    };
    const auto lin = linearize(nlp, PrimalDualPoint::zeros(0, 0, 1), Vector::Zero(1));
    CHECK(lin.nu(0) == 0.0);
    CHECK(lin.mu(0) == 1.0);
    CHECK(lin.jz == Matrix::Ones(1, 1));
  }
}

TEST_CASE("jacobian_p") {
  const auto qp = make_tracking_qp();
  const auto z = PrimalDualPoint{Vector::Constant(1, 2.0), Vector(0), Vector::Constant(1, 0.3)};
  CHECK(jacobian_p(qp, z, Vector::Constant(1, 0.7)) == Matrix{{-1.0}, {0.0}});

  // parameter-free problem
  const auto plain = unconstrained_quadratic();
  CHECK(jacobian_p(plain, PrimalDualPoint::zeros(2, 0, 0), Vector::Ones(1)).isZero(0.0));
}

TEST_CASE("jacobians agree with finite differences on random dense QPs") {
  std::mt19937_64 rng(2024);
  DerivativeTolerance tol;
  int checked_points = 0;
  while (checked_points < 100) {
    const auto qp = testing::random_dense_qp(rng, 6, 2, 4, 3);
    const auto& nlp = qp.nlp;
    PrimalDualPoint z{testing::random_vector(rng, 6), testing::random_vector(rng, 2),
                      testing::random_vector(rng, 4)};
    const Vector p = testing::random_vector(rng, 3);
    const Vector h = nlp.inequality(z.w, p);
    bool smooth = true;
    for (Eigen::Index i = 0; i < 4; ++i) smooth = smooth && std::hypot(h(i), z.v(i)) > 1e-3;
    if (!smooth) continue;
    ++checked_points;

    const auto lin = linearize(nlp, z, p);
    const Matrix fd_z = fd_jacobian(
        [&](const Vector& s) -> Vector {
          return residual(nlp, PrimalDualPoint::from_stacked(s, 6, 2, 4), p).stacked();
        },
        z.stacked());
    const Matrix fd_p = fd_jacobian(
        [&](const Vector& s) -> Vector { return residual(nlp, z, s).stacked(); }, p);
    CHECK(error_ratio(lin.jz, fd_z, tol) <= 1.0);
    CHECK(error_ratio(lin.jp, fd_p, tol) <= 1.0);
    CHECK(lin.jz == jacobian_z(nlp, z, p));
    CHECK(lin.jp == jacobian_p(nlp, z, p));
  }
}

TEST_CASE("jacobian_z and jacobian_p share C") {
  std::mt19937_64 rng(9);
  const auto qp = testing::random_dense_qp(rng, 3, 1, 3, 2);
  // make one pair sit exactly on the kink so the tie selection is exercised
  PrimalDualPoint z{Vector::Zero(3), Vector::Zero(1), Vector{{0.5, 0.0, 2.0}}};
  const Vector p = -qp.d(1) * qp.L.row(1).transpose() / qp.L.row(1).squaredNorm();
  const Vector h = qp.nlp.inequality(z.w, p);
  REQUIRE(std::hypot(h(1), z.v(1)) <= kFbTieThreshold);
  const auto lin = linearize(qp.nlp, z, p);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const auto d = fb_pair_derivative(h(i), z.v(i));
    CHECK(lin.nu(i) == d.nu);
    const Vector expected_row = -d.nu * qp.G.row(i).transpose();
    CHECK(lin.jz.block(4 + i, 0, 1, 3).transpose() == expected_row);
    CHECK(lin.jp.row(4 + i).transpose() == (d.nu * qp.L.row(i)).transpose());
  }
}

TEST_CASE("callback output validation") {
  auto nlp = make_tracking_qp();
  nlp.objective_gradient = [](const Vector&, const Vector&) -> Vector {
    return Vector::Constant(1, std::nan(""));
  };
  CHECK_THROWS_AS(residual(nlp, PrimalDualPoint::zeros(1, 0, 1), Vector::Zero(1)),
                  NonFiniteEvaluation);
  nlp = make_tracking_qp();
  nlp.inequality_jacobian = [](const Vector&, const Vector&) -> Matrix { return Matrix::Ones(2, 1); };
  CHECK_THROWS_AS(jacobian_z(nlp, PrimalDualPoint::zeros(1, 0, 1), Vector::Zero(1)),
                  DimensionMismatch);
}
