#include "hllg/dynamics.hpp"

#include <cmath>

namespace hllg {

VectorField sample_transport(const TransportSpec& spec, const Grid& grid) {
  switch (spec.kind) {
    case TransportSpec::Kind::none:
      return VectorField(grid);
    case TransportSpec::Kind::rigid:
      return sample(RigidRotationSpec{spec.offset, spec.omega}, grid);
    case TransportSpec::Kind::stream2d:
      return sample(StreamFunction2dSpec{spec.amplitude}, grid);
    case TransportSpec::Kind::custom:
      return VectorField(grid, spec.custom_values);
  }
  return VectorField(grid);
}

namespace {

/// Velocity at a face midpoint: analytic when the spec has a formula, linear
/// extrapolation from the two nearest nodes otherwise.
Vec3 face_velocity(const TransportSpec& spec, const Grid& grid, const VectorField& v,
                   Eigen::Index node, int axis, int side) {
  Vec3 x = grid.position(node);
  x[axis] = side == 0 ? 0.0 : grid.extent(axis);
  switch (spec.kind) {
    case TransportSpec::Kind::none:
      return Vec3::Zero();
    case TransportSpec::Kind::rigid:
      return spec.offset + spec.omega.cross(x);
    case TransportSpec::Kind::stream2d:
      return evaluate(StreamFunction2dSpec{spec.amplitude}, grid, x);
    case TransportSpec::Kind::custom: {
      const Eigen::Index s = grid.stride(axis);
      const Eigen::Index inner = side == 0 ? node + s : node - s;
      return 1.5 * Vec3(v[node]) - 0.5 * Vec3(v[inner]);
    }
  }
  return Vec3::Zero();
}

}  // namespace

TransportReport check_transport_condition(const TransportSpec& spec, const Grid& grid,
                                          char which) {
  TransportReport r;
  r.condition = which;
  const VectorField v = sample_transport(spec, grid);
  std::array<VectorField, 3> grad{VectorField(grid), VectorField(grid), VectorField(grid)};
  for (int k = 0; k < grid.dim(); ++k) grad[k] = one_sided_derivative(v, k);

  // Third-derivative estimate: second differences of the first derivatives.
  double third = 0.0;
  for (int k = 0; k < grid.dim(); ++k) {
    for (int l = 0; l < grid.dim(); ++l) {
      const Eigen::Index s = grid.stride(l);
      const double h = grid.h(l);
      for (Eigen::Index p = 0; p < v.size(); ++p) {
        const int c = grid.coords(p)[l];
        if (c == 0 || c == grid.n(l) - 1) continue;
        const Vec3 d2 = (Vec3(grad[k][p + s]) - 2.0 * Vec3(grad[k][p]) + Vec3(grad[k][p - s])) /
                        (h * h);
        third = std::max(third, d2.cwiseAbs().maxCoeff());
      }
    }
  }

  for (Eigen::Index p = 0; p < v.size(); ++p) {
    Eigen::Matrix3d g = Eigen::Matrix3d::Zero();  // g(i, k) = d_k v_i
    for (int k = 0; k < 3; ++k) g.col(k) = grad[k][p];
    r.antisymmetry_defect = std::max(r.antisymmetry_defect, (g + g.transpose()).norm());
    r.divergence_defect = std::max(r.divergence_defect, std::abs(g.trace()));
    r.grad_max = std::max(r.grad_max, g.norm());
    r.v_max = std::max(r.v_max, Vec3(v[p]).norm());
  }
  for (int axis = 0; axis < grid.dim(); ++axis) {
    for (int side = 0; side < 2; ++side) {
      for (const Eigen::Index p : face_nodes(grid, axis, side)) {
        const Vec3 vf = face_velocity(spec, grid, v, p, axis, side);
        r.tangency_defect = std::max(r.tangency_defect, std::abs(vf[axis]));
      }
    }
  }
  r.tolerance = 1e-8 * std::max(r.v_max, 1.0);
  r.truncation_allowance = grid.max_spacing() * grid.max_spacing() * third;
  const double diff_tol = r.tolerance + r.truncation_allowance;
  r.antisymmetry_ok = r.antisymmetry_defect <= diff_tol;
  r.divergence_ok = r.divergence_defect <= diff_tol;
  r.tangency_ok = r.tangency_defect <= r.tolerance;
  switch (which) {
    case 'a':
    case 'b':
      r.pass = r.antisymmetry_ok && r.tangency_ok;
      break;
    case 'c':
      r.pass = r.divergence_ok && r.tangency_ok;
      break;
    default:
      r.pass = true;
  }
  return r;
}

VectorField j_map(const VectorField& m) {
  VectorField out = m;
  for (Eigen::Index p = 0; p < m.size(); ++p) {
    const double n = m[p].stableNorm();
    if (n > 1.0) out[p] /= n;
  }
  return out;
}

LlgModel::LlgModel(std::shared_ptr<const Operators> ops, MaterialParams params, SystemKind kind,
                   LowerOrderOperator pi, AppliedFieldSpec applied,
                   std::optional<VectorField> velocity)
    : ops_(std::move(ops)),
      params_(params),
      kind_(kind),
      pi_(std::move(pi)),
      applied_(applied),
      velocity_(std::move(velocity)) {
  if (kind_ == SystemKind::schrodinger && params_.beta != 0.0) {
    throw ConfigError("material.beta must be 0 for the schrodinger system");
  }
  if (params_.alpha * params_.alpha + params_.beta * params_.beta <= 0.0) {
    throw ConfigError("material.alpha^2 + material.beta^2 must be positive");
  }
  if (velocity_ && !(velocity_->grid() == ops_->grid())) {
    throw ConfigError("transport field lives on a different grid");
  }
}

VectorField LlgModel::applied_field(double t) const { return hllg::applied_field(applied_, grid(), t); }

VectorField LlgModel::effective_field(const VectorField& m, double t) const {
  VectorField h = ops_->apply_laplacian(m);
  h += pi_(m);
  if (applied_.kind != AppliedFieldSpec::Kind::none) h += applied_field(t);
  return h;
}

VectorField LlgModel::transport_term(const VectorField& m) const {
  VectorField out(grid());
  if (!velocity_) return out;
  const VectorField& v = *velocity_;
  for (int k = 0; k < 3; ++k) {
    if (v.values().row(k).isZero(0.0)) continue;
    const VectorField d = ops_->partial(m, k);
    out.values().array() += d.values().array().rowwise() * v.values().row(k).array();
  }
  out += cross(v, m);
  return out;
}

VectorField LlgModel::explicit_rhs(const VectorField& m, double t) const {
  const VectorField j = j_map(m);
  const VectorField h = effective_field(m, t);
  const VectorField jxh = cross(j, h);
  VectorField out = -params_.alpha * jxh;
  if (params_.beta != 0.0) out -= params_.beta * cross(j, jxh);
  if (velocity_ && params_.gamma != 0.0) {
    if (kind_ == SystemKind::type_one) {
      // gamma J x (J x (v . grad_h m + v x J))
      VectorField w(grid());
      const VectorField& v = *velocity_;
      for (int k = 0; k < 3; ++k) {
        if (v.values().row(k).isZero(0.0)) continue;
        const VectorField d = ops_->partial(m, k);
        w.values().array() += d.values().array().rowwise() * v.values().row(k).array();
      }
      w += cross(v, j);
      out += params_.gamma * cross(j, cross(j, w));
    } else {
      out -= params_.gamma * transport_term(m);
    }
  }
  return out;
}

VectorField LlgModel::rhs(const VectorField& m, double t) const {
  VectorField out = explicit_rhs(m, t);
  if (params_.epsilon != 0.0) out += params_.epsilon * ops_->apply_laplacian(m);
  return out;
}

double laplacian_spectral_bound(const Grid& grid) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = grid.active(i) ? 1.0 / grid.h(i) : 0.0;
    s += (d + 1.0) * (d + 1.0);
  }
  return s;
}

double stable_dt(const Grid& grid, const MaterialParams& p, Scheme scheme, double v_max) {
  const double s = laplacian_spectral_bound(grid) + p.anisotropy;
  double first_order = 0.0;
  for (int i = 0; i < 3; ++i) first_order += (grid.active(i) ? 1.0 / grid.h(i) : 0.0) + 1.0;
  const double transport_rate = std::abs(p.gamma) * v_max * first_order;
  if (scheme == Scheme::explicit_rk4) {
    const double rate =
        (std::abs(p.alpha) + std::abs(p.beta) + p.epsilon) * s + transport_rate;
    return rate > 0.0 ? 2.78 / rate : std::numeric_limits<double>::infinity();
  }
  // Forward Euler on the precession/damping part, backward Euler on the
  // viscosity: per mode |1 - dt (beta - i alpha) mu| <= 1 + dt eps mu.
  const double a2b2 = p.alpha * p.alpha + p.beta * p.beta;
  double dt = a2b2 > 0.0 ? 2.0 * (p.beta + p.epsilon) / (a2b2 * s)
                         : std::numeric_limits<double>::infinity();
  if (transport_rate > 0.0) dt = std::min(dt, 1.0 / transport_rate);
  return dt;
}

VectorField rk4_step(const LlgModel& model, const VectorField& m, double t, double dt) {
  const VectorField k1 = model.rhs(m, t);
  const VectorField k2 = model.rhs(m + (0.5 * dt) * k1, t + 0.5 * dt);
  const VectorField k3 = model.rhs(m + (0.5 * dt) * k2, t + 0.5 * dt);
  const VectorField k4 = model.rhs(m + dt * k3, t + dt);
  VectorField out = m;
  out.values() += (dt / 6.0) * (k1.values() + 2.0 * k2.values() + 2.0 * k3.values() + k4.values());
  return out;
}

ImexEulerStepper::ImexEulerStepper(const LlgModel& model, double dt) : model_(model), dt_(dt) {
  const Eigen::Index dof = 3 * model.grid().node_count();
  SparseCol eye(dof, dof);
  eye.setIdentity();
  system_ = eye - (dt * model.params().epsilon) * SparseCol(model.ops().laplacian());
  system_.makeCompressed();
  cg_.setTolerance(1e-10);
  cg_.setMaxIterations(std::max<Eigen::Index>(10, Eigen::Index(10.0 * std::sqrt(double(dof)))));
  cg_.compute(system_);
}

VectorField ImexEulerStepper::step(const VectorField& m, double t) const {
  VectorField b = m;
  b.values() += dt_ * model_.explicit_rhs(m, t).values();
  if (model_.params().epsilon == 0.0) return b;
  if (b.flat().squaredNorm() == 0.0) return b;
  Eigen::VectorXd x = cg_.solveWithGuess(b.flat(), b.flat());
  last_iterations_ = int(cg_.iterations());
  if (cg_.info() != Eigen::Success) {
    throw NumericalError("conjugate gradient did not converge in " +
                         std::to_string(cg_.maxIterations()) + " iterations (residual " +
                         std::to_string(cg_.error()) + ")");
  }
  return VectorField::from_flat(m.grid(), x);
}

}  // namespace hllg
