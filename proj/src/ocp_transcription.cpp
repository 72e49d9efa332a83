#include "sspc/ocp_transcription.hpp"

#include "sspc/errors.hpp"

#include <cmath>
#include <string>

namespace sspc {

namespace {

void expect_shape(const Matrix& value, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (value.rows() != rows || value.cols() != cols) {
    throw DimensionMismatch(std::string("OcpSpec::") + name + ": got " +
                            std::to_string(value.rows()) + "x" + std::to_string(value.cols()) +
                            ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

void OcpSpec::validate() const {
  if (horizon < 1) throw DimensionMismatch("OcpSpec: horizon must be >= 1");
  if (n_x < 1 || n_u < 0 || n_c < 0 || n_cf < 0) {
    throw DimensionMismatch("OcpSpec: invalid dimensions");
  }
  if (!dynamics || !dynamics_jacobian || !dynamics_hessian || !stage_cost ||
      !stage_cost_gradient || !stage_cost_hessian || !terminal_cost || !terminal_cost_gradient ||
      !terminal_cost_hessian) {
    throw DimensionMismatch("OcpSpec: missing dynamics or cost callback");
  }
  if (n_c > 0 && (!path_constraint || !path_constraint_jacobian)) {
    throw DimensionMismatch("OcpSpec: missing path constraint callback");
  }
  if (n_cf > 0 && (!terminal_constraint || !terminal_constraint_jacobian)) {
    throw DimensionMismatch("OcpSpec: missing terminal constraint callback");
  }
  if (!path_row_state_only.empty() && int(path_row_state_only.size()) != n_c) {
    throw DimensionMismatch("OcpSpec: path_row_state_only must have n_c entries");
  }

  const Vector x0 = Vector::Zero(n_x), u0 = Vector::Zero(n_u);
  const int ny = n_x + n_u;
  expect_shape(dynamics(x0, u0), n_x, 1, "dynamics");
  expect_shape(dynamics_jacobian(x0, u0), n_x, ny, "dynamics_jacobian");
  expect_shape(dynamics_hessian(x0, u0, Vector::Zero(n_x)), ny, ny, "dynamics_hessian");
  expect_shape(stage_cost_gradient(x0, u0), ny, 1, "stage_cost_gradient");
  expect_shape(stage_cost_hessian(x0, u0), ny, ny, "stage_cost_hessian");
  expect_shape(terminal_cost_gradient(x0), n_x, 1, "terminal_cost_gradient");
  expect_shape(terminal_cost_hessian(x0), n_x, n_x, "terminal_cost_hessian");
  if (n_c > 0) {
    expect_shape(path_constraint(x0, u0), n_c, 1, "path_constraint");
    expect_shape(path_constraint_jacobian(x0, u0), n_c, ny, "path_constraint_jacobian");
  }
  if (n_cf > 0) {
    expect_shape(terminal_constraint(x0), n_cf, 1, "terminal_constraint");
    expect_shape(terminal_constraint_jacobian(x0), n_cf, n_x, "terminal_constraint_jacobian");
  }
  const double l00 = stage_cost(x0, u0);
  if (std::abs(l00) > 1e-12) {
    throw DimensionMismatch("OcpSpec: stage cost must vanish at the origin, l(0,0) = " +
                            std::to_string(l00));
  }
}

Eigen::Index VariableLayout::q() const {
  return Eigen::Index(stage0_rows.size()) + Eigen::Index(horizon - 1) * n_c + n_cf;
}

Eigen::Index VariableLayout::path_row(int i) const {
  if (i == 0) return 0;
  return Eigen::Index(stage0_rows.size()) + Eigen::Index(i - 1) * n_c;
}

Eigen::Index VariableLayout::path_row_count(int i) const {
  return i == 0 ? Eigen::Index(stage0_rows.size()) : n_c;
}

namespace {

/// Evaluates the transcribed NLP. Owns copies of the OCP and its layout so
/// the callbacks stay valid independently of the caller.
class TranscribedOcp {
 public:
  TranscribedOcp(OcpSpec ocp, VariableLayout layout)
      : ocp_(std::move(ocp)), layout_(std::move(layout)) {}

  double objective(const Vector& w, const Vector& p) const {
    double J = ocp_.terminal_cost(state(w, p, N()));
    for (int i = 0; i < N(); ++i) J += ocp_.stage_cost(state(w, p, i), input(w, i));
    return J;
  }

  Vector objective_gradient(const Vector& w, const Vector& p) const {
    Vector g = Vector::Zero(layout_.n());
    for (int i = 0; i < N(); ++i) {
      const Vector gi = ocp_.stage_cost_gradient(state(w, p, i), input(w, i));
      if (i > 0) g.segment(layout_.state_offset(i), nx()) += gi.head(nx());
      g.segment(layout_.input_offset(i), nu()) += gi.tail(nu());
    }
    g.segment(layout_.state_offset(N()), nx()) += ocp_.terminal_cost_gradient(state(w, p, N()));
    return g;
  }

  Vector equality(const Vector& w, const Vector& p) const {
    Vector g(layout_.m());
    for (int i = 0; i < N(); ++i) {
      g.segment(layout_.dynamics_row(i), nx()) =
          state(w, p, i + 1) - ocp_.dynamics(state(w, p, i), input(w, i));
    }
    return g;
  }

  Matrix equality_jacobian(const Vector& w, const Vector& p) const {
    Matrix J = Matrix::Zero(layout_.m(), layout_.n());
    for (int i = 0; i < N(); ++i) {
      const auto row = layout_.dynamics_row(i);
      const Matrix D = ocp_.dynamics_jacobian(state(w, p, i), input(w, i));
      J.block(row, layout_.state_offset(i + 1), nx(), nx()).diagonal().setOnes();
      if (i > 0) J.block(row, layout_.state_offset(i), nx(), nx()) = -D.leftCols(nx());
      J.block(row, layout_.input_offset(i), nx(), nu()) = -D.rightCols(nu());
    }
    return J;
  }

  Matrix equality_param_jacobian(const Vector& w, const Vector& p) const {
    Matrix J = Matrix::Zero(layout_.m(), nx());
    const Matrix D = ocp_.dynamics_jacobian(p, input(w, 0));
    J.topRows(nx()) = -D.leftCols(nx());
    return J;
  }

  Vector inequality(const Vector& w, const Vector& p) const {
    Vector h(layout_.q());
    for (int i = 0; i < N(); ++i) {
      if (layout_.n_c == 0) break;
      const Vector c = ocp_.path_constraint(state(w, p, i), input(w, i));
      if (i == 0) {
        for (std::size_t k = 0; k < layout_.stage0_rows.size(); ++k)
          h(Eigen::Index(k)) = c(layout_.stage0_rows[k]);
      } else {
        h.segment(layout_.path_row(i), layout_.n_c) = c;
      }
    }
    if (layout_.n_cf > 0) {
      h.tail(layout_.n_cf) = ocp_.terminal_constraint(state(w, p, N()));
    }
    return h;
  }

  Matrix inequality_jacobian(const Vector& w, const Vector& p) const {
    Matrix J = Matrix::Zero(layout_.q(), layout_.n());
    for (int i = 0; i < N(); ++i) {
      if (layout_.n_c == 0) break;
      const Matrix C = ocp_.path_constraint_jacobian(state(w, p, i), input(w, i));
      if (i == 0) {
        for (std::size_t k = 0; k < layout_.stage0_rows.size(); ++k) {
          J.row(Eigen::Index(k)).segment(layout_.input_offset(0), nu()) =
              C.row(layout_.stage0_rows[k]).tail(nu());
        }
      } else {
        const auto row = layout_.path_row(i);
        J.block(row, layout_.state_offset(i), layout_.n_c, nx()) = C.leftCols(nx());
        J.block(row, layout_.input_offset(i), layout_.n_c, nu()) = C.rightCols(nu());
      }
    }
    if (layout_.n_cf > 0) {
      J.block(layout_.terminal_row(), layout_.state_offset(N()), layout_.n_cf, nx()) =
          ocp_.terminal_constraint_jacobian(state(w, p, N()));
    }
    return J;
  }

  Matrix inequality_param_jacobian(const Vector& w, const Vector& p) const {
    Matrix J = Matrix::Zero(layout_.q(), nx());
    if (layout_.n_c == 0) return J;
    const Matrix C = ocp_.path_constraint_jacobian(p, input(w, 0));
    for (std::size_t k = 0; k < layout_.stage0_rows.size(); ++k)
      J.row(Eigen::Index(k)) = C.row(layout_.stage0_rows[k]).head(nx());
    return J;
  }

  /// Hessian of the Lagrangian restricted to stage i, in y = (x_i, u_i).
  Matrix stage_hessian(const PrimalDualPoint& z, const Vector& p, int i) const {
    const Vector x = state(z.w, p, i), u = input(z.w, i);
    Matrix H = ocp_.stage_cost_hessian(x, u);
    H -= ocp_.dynamics_hessian(x, u, z.lambda.segment(layout_.dynamics_row(i), nx()));
    if (layout_.n_c > 0 && ocp_.path_constraint_hessian) {
      H += ocp_.path_constraint_hessian(x, u, path_multipliers(z.v, i));
    }
    return H;
  }

  Matrix lagrangian_hessian(const PrimalDualPoint& z, const Vector& p) const {
    Matrix H = Matrix::Zero(layout_.n(), layout_.n());
    for (int i = 0; i < N(); ++i) {
      const Matrix Hi = stage_hessian(z, p, i);
      const auto uo = layout_.input_offset(i);
      H.block(uo, uo, nu(), nu()) += Hi.bottomRightCorner(nu(), nu());
      if (i > 0) {
        const auto xo = layout_.state_offset(i);
        H.block(xo, xo, nx(), nx()) += Hi.topLeftCorner(nx(), nx());
        H.block(xo, uo, nx(), nu()) += Hi.topRightCorner(nx(), nu());
        H.block(uo, xo, nu(), nx()) += Hi.bottomLeftCorner(nu(), nx());
      }
    }
    const Vector xN = state(z.w, p, N());
    const auto xo = layout_.state_offset(N());
    H.block(xo, xo, nx(), nx()) += ocp_.terminal_cost_hessian(xN);
    if (layout_.n_cf > 0 && ocp_.terminal_constraint_hessian) {
      H.block(xo, xo, nx(), nx()) +=
          ocp_.terminal_constraint_hessian(xN, z.v.tail(layout_.n_cf));
    }
    return H;
  }

  Matrix lagrangian_param_cross(const PrimalDualPoint& z, const Vector& p) const {
    Matrix X = Matrix::Zero(layout_.n(), nx());
    const Matrix H0 = stage_hessian(z, p, 0);
    X.middleRows(layout_.input_offset(0), nu()) = H0.bottomLeftCorner(nu(), nx());
    return X;
  }

 private:
  int N() const { return layout_.horizon; }
  int nx() const { return layout_.n_x; }
  int nu() const { return layout_.n_u; }

  Vector state(const Vector& w, const Vector& p, int i) const {
    return i == 0 ? p : Vector(w.segment(layout_.state_offset(i), nx()));
  }
  Vector input(const Vector& w, int i) const {
    return w.segment(layout_.input_offset(i), nu());
  }
  Vector path_multipliers(const Vector& v, int i) const {
    if (i > 0) return v.segment(layout_.path_row(i), layout_.n_c);
    Vector full = Vector::Zero(layout_.n_c);
    for (std::size_t k = 0; k < layout_.stage0_rows.size(); ++k)
      full(layout_.stage0_rows[k]) = v(Eigen::Index(k));
    return full;
  }

  OcpSpec ocp_;
  VariableLayout layout_;
};

}  // namespace

Transcription transcribe(const OcpSpec& ocp) {
  ocp.validate();
  VariableLayout layout;
  layout.horizon = ocp.horizon;
  layout.n_x = ocp.n_x;
  layout.n_u = ocp.n_u;
  layout.n_c = ocp.n_c;
  layout.n_cf = ocp.n_cf;
  for (int r = 0; r < ocp.n_c; ++r) {
    const bool state_only = !ocp.path_row_state_only.empty() && ocp.path_row_state_only[r];
    if (!state_only) layout.stage0_rows.push_back(r);
  }

  auto impl = std::make_shared<const TranscribedOcp>(ocp, layout);
  auto nlp = std::make_shared<ParametricNLP>();
  nlp->n = layout.n();
  nlp->m = layout.m();
  nlp->q = layout.q();
  nlp->n_p = ocp.n_x;
  nlp->objective = [impl](const Vector& w, const Vector& p) { return impl->objective(w, p); };
  nlp->objective_gradient = [impl](const Vector& w, const Vector& p) {
    return impl->objective_gradient(w, p);
  };
  nlp->equality = [impl](const Vector& w, const Vector& p) { return impl->equality(w, p); };
  nlp->equality_jacobian = [impl](const Vector& w, const Vector& p) {
    return impl->equality_jacobian(w, p);
  };
  nlp->equality_param_jacobian = [impl](const Vector& w, const Vector& p) {
    return impl->equality_param_jacobian(w, p);
  };
  nlp->inequality = [impl](const Vector& w, const Vector& p) { return impl->inequality(w, p); };
  nlp->inequality_jacobian = [impl](const Vector& w, const Vector& p) {
    return impl->inequality_jacobian(w, p);
  };
  nlp->inequality_param_jacobian = [impl](const Vector& w, const Vector& p) {
    return impl->inequality_param_jacobian(w, p);
  };
  nlp->lagrangian_hessian = [impl](const PrimalDualPoint& z, const Vector& p) {
    return impl->lagrangian_hessian(z, p);
  };
  nlp->lagrangian_param_cross = [impl](const PrimalDualPoint& z, const Vector& p) {
    return impl->lagrangian_param_cross(z, p);
  };
  nlp->validate();
  return {std::move(nlp), std::move(layout)};
}

Vector extract_control(const VariableLayout& layout, const PrimalDualPoint& z) {
  if (z.w.size() != layout.n()) {
    throw DimensionMismatch("extract_control: primal length does not match layout");
  }
  return z.w.segment(layout.input_offset(0), layout.n_u);
}

double plan_cost(const OcpSpec& ocp, const VariableLayout& layout, const PrimalDualPoint& z,
                 const Vector& p) {
  if (z.w.size() != layout.n() || p.size() != layout.n_x) {
    throw DimensionMismatch("plan_cost: point does not match layout");
  }
  auto state = [&](int i) -> Vector {
    return i == 0 ? p : Vector(z.w.segment(layout.state_offset(i), layout.n_x));
  };
  double J = ocp.terminal_cost(state(layout.horizon));
  for (int i = 0; i < layout.horizon; ++i) {
    J += ocp.stage_cost(state(i), z.w.segment(layout.input_offset(i), layout.n_u));
  }
  if (!std::isfinite(J)) throw NonFiniteEvaluation("plan_cost: non-finite cost");
  return J;
}

}  // namespace sspc
