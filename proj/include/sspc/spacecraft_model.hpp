#pragma once

#include "sspc/closed_loop_sim.hpp"
#include "sspc/numerics.hpp"
#include "sspc/ocp_transcription.hpp"

#include <cstdint>

namespace sspc::spacecraft {

inline constexpr double kPi = 3.14159265358979323846;
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Rigid spacecraft attitude benchmark. State x = (omega, theta): body
/// rates [rad/s] and 3-2-1 Euler angles [rad]; input u: body torques [N m].
struct SpacecraftParams {
  Eigen::Matrix3d inertia = Eigen::Vector3d(918.0, 920.0, 1365.0).asDiagonal();  // kg m^2
  double tau = 3.0;  // s
  int horizon = 30;
  Matrix Q = 50.0 * Vector{{10.0, 10.0, 10.0, 1.0, 1.0, 1.0}}.asDiagonal().toDenseMatrix();
  Matrix R = 0.1 * Matrix::Identity(3, 3);
  double omega_bound = 0.02;  // rad/s
  double u_bound = 2.0;       // N m
  Vector x0 = Vector{{0.0, 0.0, 0.0, deg_to_rad(15.0), deg_to_rad(30.0), deg_to_rad(-20.0)}};
};

/// {x : x' P x <= alpha}, exposed as the single row c_N(x) = x' P x - alpha.
struct TerminalSet {
  Matrix P;
  double alpha = 0.0;

  double value(const Vector& x) const { return x.dot(P * x) - alpha; }
  bool contains(const Vector& x) const { return value(x) <= 0.0; }
};

struct TerminalIngredients {
  Matrix P;
  Matrix K;  ///< LQR gain, u = -K x
  TerminalSet set;
  double admissible_alpha = 0.0;  ///< 0.99 x largest level keeping bounds satisfied
};

/// Continuous attitude dynamics (J^-1 (u - omega x J omega), S(theta) omega).
/// Throws GimbalLock when |cos(theta_2)| <= 1e-9.
Vector attitude_field(const SpacecraftParams& params, const Vector& x, const Vector& u);
/// 6 x 9 Jacobian of attitude_field in (x, u).
Matrix attitude_field_jacobian(const SpacecraftParams& params, const Vector& x, const Vector& u);
/// sum_k mult_k * Hessian of component k, 9 x 9 in (x, u).
Matrix attitude_field_hessian(const SpacecraftParams& params, const Vector& x, const Vector& u,
                              const Vector& mult);

struct Linearization {
  Matrix A;
  Matrix B;
};

/// Jacobians of the Euler-discretized map at the origin.
Linearization linearize_origin(const SpacecraftParams& params);

/// One-step decrease V_f(x+) - V_f(x) + l(x, -Kx) on the nonlinear discrete model.
double terminal_decrease(const SpacecraftParams& params, const TerminalIngredients& ti,
                         const Vector& x);

/// Samples a point of {x' P x <= alpha}: uniform direction, radius
/// fraction `radius` (1 = boundary).
Vector sample_ellipsoid(const Matrix& P, double alpha, const Vector& direction, double radius);

/// DARE terminal cost, LQR gain and a certified ellipsoidal terminal set.
TerminalIngredients build_terminal_ingredients(const SpacecraftParams& params,
                                               std::uint64_t seed = 20181);

PlantModel make_spacecraft_plant(const SpacecraftParams& params);

/// Stage cost |x|_Q^2 + |u|_R^2, terminal cost |x|_P^2, box constraints
/// |omega| <= omega_bound (state-only rows) and |u| <= u_bound, terminal
/// ellipsoid row. Path rows: omega - b, -omega - b, u - b, -u - b.
OcpSpec build_spacecraft_ocp(const SpacecraftParams& params, const TerminalSet& ts);

}  // namespace sspc::spacecraft
