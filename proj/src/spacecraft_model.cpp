#include "sspc/spacecraft_model.hpp"

#include "sspc/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

namespace sspc::spacecraft {

namespace {

Eigen::Matrix3d skew(const Eigen::Vector3d& a) {
  Eigen::Matrix3d s;
  s << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return s;
}

/// S(theta) of the 3-2-1 Euler kinematics with its first and second
/// partial derivatives in (theta_1, theta_2); theta_3 does not appear.
struct Kinematics {
  Eigen::Matrix3d S;
  std::array<Eigen::Matrix3d, 2> dS;
  std::array<std::array<Eigen::Matrix3d, 2>, 2> d2S;
};

Kinematics kinematics(const Eigen::Vector3d& theta) {
  const double c2 = std::cos(theta(1));
  if (std::abs(c2) <= 1e-9) {
    throw GimbalLock("attitude kinematics: |cos(pitch)| <= 1e-9");
  }
  const double s1 = std::sin(theta(0)), c1 = std::cos(theta(0));
  const double t2 = std::tan(theta(1)), sec = 1.0 / c2;
  const double sec2 = sec * sec;
  const double dsec_tan = sec * t2 * t2 + sec * sec2;  // d/dtheta2 (sec tan)

  Kinematics k;
  k.S << 1.0, s1 * t2, c1 * t2,
         0.0, c1, -s1,
         0.0, s1 * sec, c1 * sec;
  k.dS[0] << 0.0, c1 * t2, -s1 * t2,
             0.0, -s1, -c1,
             0.0, c1 * sec, -s1 * sec;
  k.dS[1] << 0.0, s1 * sec2, c1 * sec2,
             0.0, 0.0, 0.0,
             0.0, s1 * sec * t2, c1 * sec * t2;
  k.d2S[0][0] << 0.0, -s1 * t2, -c1 * t2,
                 0.0, -c1, s1,
                 0.0, -s1 * sec, -c1 * sec;
  k.d2S[0][1] << 0.0, c1 * sec2, -s1 * sec2,
                 0.0, 0.0, 0.0,
                 0.0, c1 * sec * t2, -s1 * sec * t2;
  k.d2S[1][0] = k.d2S[0][1];
  k.d2S[1][1] << 0.0, 2.0 * s1 * sec2 * t2, 2.0 * c1 * sec2 * t2,
                 0.0, 0.0, 0.0,
                 0.0, s1 * dsec_tan, c1 * dsec_tan;
  return k;
}

void check_sizes(const Vector& x, const Vector& u) {
  if (x.size() != 6 || u.size() != 3) {
    throw DimensionMismatch("spacecraft: expected x in R^6 and u in R^3");
  }
}

}  // namespace

Vector attitude_field(const SpacecraftParams& params, const Vector& x, const Vector& u) {
  check_sizes(x, u);
  const Eigen::Vector3d omega = x.head<3>(), theta = x.tail<3>();
  const auto& J = params.inertia;
  const Kinematics k = kinematics(theta);
  Vector f(6);
  f.head<3>() = J.ldlt().solve(Eigen::Vector3d(u.head<3>()) - omega.cross(J * omega));
  f.tail<3>() = k.S * omega;
  return f;
}

Matrix attitude_field_jacobian(const SpacecraftParams& params, const Vector& x, const Vector& u) {
  check_sizes(x, u);
  const Eigen::Vector3d omega = x.head<3>(), theta = x.tail<3>();
  const auto& J = params.inertia;
  const Eigen::Matrix3d Jinv = J.inverse();
  const Kinematics k = kinematics(theta);

  Matrix D = Matrix::Zero(6, 9);
  // d/domega of -(omega x J omega) = -([omega]x J - [J omega]x)
  D.block<3, 3>(0, 0) = -Jinv * (skew(omega) * J - skew(J * omega));
  D.block<3, 3>(0, 6) = Jinv;
  D.block<3, 3>(3, 0) = k.S;
  D.block<3, 1>(3, 3) = k.dS[0] * omega;
  D.block<3, 1>(3, 4) = k.dS[1] * omega;
  return D;
}

Matrix attitude_field_hessian(const SpacecraftParams& params, const Vector& x, const Vector& u,
                              const Vector& mult) {
  check_sizes(x, u);
  if (mult.size() != 6) throw DimensionMismatch("spacecraft: multiplier must be in R^6");
  const Eigen::Vector3d omega = x.head<3>(), theta = x.tail<3>();
  const Eigen::Vector3d mu_rate = mult.head<3>(), mu_angle = mult.tail<3>();
  const auto& J = params.inertia;
  const Kinematics k = kinematics(theta);

  Matrix H = Matrix::Zero(9, 9);
  // mu' J^-1 (u - omega x J omega) = -a'(omega x J omega) + ..., a = J^-T mu.
  const Eigen::Vector3d a = J.transpose().ldlt().solve(mu_rate);
  H.block<3, 3>(0, 0) = skew(a) * J - J * skew(a);

  // mu' S(theta) omega: mixed omega/theta and theta/theta blocks.
  for (int j = 0; j < 2; ++j) {
    const Eigen::Vector3d col = k.dS[j].transpose() * mu_angle;
    H.block<3, 1>(0, 3 + j) = col;
    H.block<1, 3>(3 + j, 0) = col.transpose();
    for (int l = 0; l < 2; ++l) H(3 + j, 3 + l) = mu_angle.dot(k.d2S[j][l] * omega);
  }
  return H;
}

Linearization linearize_origin(const SpacecraftParams& params) {
  const Matrix D = attitude_field_jacobian(params, Vector::Zero(6), Vector::Zero(3));
  Linearization lin;
  lin.A = Matrix::Identity(6, 6) + params.tau * D.leftCols(6);
  lin.B = params.tau * D.rightCols(3);
  return lin;
}

double terminal_decrease(const SpacecraftParams& params, const TerminalIngredients& ti,
                         const Vector& x) {
  const Vector u = -ti.K * x;
  const Vector xp = x + params.tau * attitude_field(params, x, u);
  return xp.dot(ti.P * xp) - x.dot(ti.P * x) + x.dot(params.Q * x) + u.dot(params.R * u);
}

Vector sample_ellipsoid(const Matrix& P, double alpha, const Vector& direction, double radius) {
  // x = sqrt(alpha) * radius * L^-T d / |d| with P = L L' gives x'Px = alpha radius^2.
  const Eigen::LLT<Matrix> llt(P);
  const Vector d = direction.normalized();
  return std::sqrt(alpha) * radius * llt.matrixU().solve(d);
}

TerminalIngredients build_terminal_ingredients(const SpacecraftParams& params,
                                               std::uint64_t seed) {
  const auto lin = linearize_origin(params);
  const auto dare = solve_dare(lin.A, lin.B, params.Q, params.R);

  TerminalIngredients ti;
  ti.P = dare.P;
  ti.K = dare.K;

  // max c'x over {x'Px <= alpha} is sqrt(alpha c'P^-1 c); require it <= bound.
  const Matrix Pinv = ti.P.inverse();
  double alpha = INFINITY;
  for (int i = 0; i < 3; ++i) {
    const Vector k = ti.K.row(i).transpose();
    alpha = std::min(alpha, params.u_bound * params.u_bound / k.dot(Pinv * k));
    alpha = std::min(alpha, params.omega_bound * params.omega_bound / Pinv(i, i));
  }
  ti.admissible_alpha = 0.99 * alpha;

  // Certify decrease and invariance on the nonlinear model by sampling;
  // the violation grows like alpha^(3/2), so halving converges quickly.
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  constexpr int kSamples = 4096;
  std::vector<std::pair<Vector, double>> samples;
  samples.reserve(kSamples);
  for (int s = 0; s < kSamples; ++s) {
    Vector d(6);
    for (auto& e : d) e = normal(rng);
    const double radius = (s % 2 == 0) ? 1.0 : std::pow(unit(rng), 1.0 / 6.0);
    samples.emplace_back(std::move(d), radius);
  }

  ti.set = {ti.P, ti.admissible_alpha};
  auto certified = [&](double level) {
    for (const auto& [d, radius] : samples) {
      const Vector x = sample_ellipsoid(ti.P, level, d, radius);
      ti.set.alpha = level;
      if (terminal_decrease(params, ti, x) > 1e-6) return false;
      const Vector xp = x + params.tau * attitude_field(params, x, -ti.K * x);
      if (!ti.set.contains(xp)) return false;
    }
    return true;
  };
  double level = ti.admissible_alpha;
  while (!certified(level)) level *= 0.5;
  ti.set.alpha = 0.5 * level;
  return ti;
}

PlantModel make_spacecraft_plant(const SpacecraftParams& params) {
  return euler_discretize(
      6, 3, [params](const Vector& x, const Vector& u) { return attitude_field(params, x, u); },
      params.tau);
}

OcpSpec build_spacecraft_ocp(const SpacecraftParams& params, const TerminalSet& ts) {
  OcpSpec ocp;
  ocp.horizon = params.horizon;
  ocp.n_x = 6;
  ocp.n_u = 3;
  ocp.n_c = 12;
  ocp.n_cf = 1;

  const double tau = params.tau;
  ocp.dynamics = [params, tau](const Vector& x, const Vector& u) -> Vector {
    return x + tau * attitude_field(params, x, u);
  };
  ocp.dynamics_jacobian = [params, tau](const Vector& x, const Vector& u) -> Matrix {
    Matrix D = tau * attitude_field_jacobian(params, x, u);
    D.leftCols(6).diagonal().array() += 1.0;
    return D;
  };
  ocp.dynamics_hessian = [params, tau](const Vector& x, const Vector& u,
                                       const Vector& mult) -> Matrix {
    return tau * attitude_field_hessian(params, x, u, mult);
  };

  Matrix W = Matrix::Zero(9, 9);
  W.topLeftCorner(6, 6) = params.Q;
  W.bottomRightCorner(3, 3) = params.R;
  ocp.stage_cost = [Q = params.Q, R = params.R](const Vector& x, const Vector& u) {
    return x.dot(Q * x) + u.dot(R * u);
  };
  ocp.stage_cost_gradient = [W](const Vector& x, const Vector& u) -> Vector {
    Vector y(9);
    y << x, u;
    return 2.0 * W * y;
  };
  ocp.stage_cost_hessian = [W](const Vector&, const Vector&) -> Matrix { return 2.0 * W; };

  const Matrix P = ts.P;
  ocp.terminal_cost = [P](const Vector& x) { return x.dot(P * x); };
  ocp.terminal_cost_gradient = [P](const Vector& x) -> Vector { return 2.0 * P * x; };
  ocp.terminal_cost_hessian = [P](const Vector&) -> Matrix { return 2.0 * P; };

  // Rows: omega - b (3), -omega - b (3), u - b (3), -u - b (3).
  Matrix C = Matrix::Zero(12, 9);
  for (int i = 0; i < 3; ++i) {
    C(i, i) = 1.0;
    C(3 + i, i) = -1.0;
    C(6 + i, 6 + i) = 1.0;
    C(9 + i, 6 + i) = -1.0;
  }
  Vector bounds(12);
  bounds << Vector::Constant(6, params.omega_bound), Vector::Constant(6, params.u_bound);
  ocp.path_constraint = [C, bounds](const Vector& x, const Vector& u) -> Vector {
    Vector y(9);
    y << x, u;
    return C * y - bounds;
  };
  ocp.path_constraint_jacobian = [C](const Vector&, const Vector&) -> Matrix { return C; };
  ocp.path_row_state_only.assign(12, false);
  std::fill(ocp.path_row_state_only.begin(), ocp.path_row_state_only.begin() + 6, true);

  const double alpha = ts.alpha;
  ocp.terminal_constraint = [P, alpha](const Vector& x) -> Vector {
    return Vector::Constant(1, x.dot(P * x) - alpha);
  };
  ocp.terminal_constraint_jacobian = [P](const Vector& x) -> Matrix {
    return (2.0 * P * x).transpose();
  };
  ocp.terminal_constraint_hessian = [P](const Vector&, const Vector& mult) -> Matrix {
    return 2.0 * mult(0) * P;
  };
  return ocp;
}

}  // namespace sspc::spacecraft
