#include "hllg/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "json.hpp"

namespace hllg {

std::string to_json_line(const CheckResult& c) {
  nlohmann::json j;
  j["name"] = c.name;
  j["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
  j["tolerance"] = c.tolerance;
  j["pass"] = c.pass;
  j["gate"] = c.gate;
  if (!c.detail.empty()) j["detail"] = c.detail;
  return j.dump();
}

namespace {

VectorField random_field(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  VectorField u(grid);
  for (Eigen::Index i = 0; i < u.values().size(); ++i) u.values().data()[i] = normal(rng);
  return u;
}

CheckResult below(std::string name, double value, double tol, std::string detail = {}) {
  return CheckResult{std::move(name), value, tol, value <= tol, true, std::move(detail)};
}

double max_norm(const VectorField& u) {
  return u.size() ? u.values().colwise().norm().maxCoeff() : 0.0;
}

}  // namespace

std::vector<CheckResult> operator_identity_suite(const Operators& ops, std::uint64_t seed) {
  const Grid& grid = ops.grid();
  std::mt19937_64 rng(seed);
  const VectorField u = random_field(grid, rng);
  const VectorField w = random_field(grid, rng);
  std::vector<CheckResult> out;
  constexpr double tol = 1e-12;

  // Skew matrices against their explicit entries and the cross product.
  {
    Eigen::Matrix3d m1, m2, m3;
    m1 << 0, 0, 0, 0, 0, -1, 0, 1, 0;
    m2 << 0, 0, 1, 0, 0, 0, -1, 0, 0;
    m3 << 0, -1, 0, 1, 0, 0, 0, 0, 0;
    const Eigen::Matrix3d explicit_m[3] = {m1, m2, m3};
    double err = 0.0;
    Eigen::Matrix3d sum_sq = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) {
      const Eigen::Matrix3d m = skew_matrix(i);
      err = std::max(err, (m - explicit_m[i]).cwiseAbs().maxCoeff());
      err = std::max(err, (m + m.transpose()).cwiseAbs().maxCoeff());
      Vec3 e = Vec3::Zero();
      e[i] = 1.0;
      for (Eigen::Index p = 0; p < std::min<Eigen::Index>(u.size(), 64); ++p) {
        err = std::max(err, (m * Vec3(u[p]) - e.cross(Vec3(u[p]))).norm() / Vec3(u[p]).norm());
      }
      sum_sq += m * m;
    }
    err = std::max(err, (sum_sq + 2.0 * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff());
    out.push_back(below("skew_matrix_algebra", err, tol));
  }

  // G_i u = D_i u - M_i u.
  {
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      VectorField expected = ops.derivative(u, i);
      expected.values() -= skew_matrix(i) * u.values();
      const VectorField got = ops.partial(u, i);
      err = std::max(err, max_norm(got - expected) / std::max(max_norm(expected), 1e-300));
    }
    out.push_back(below("helical_partial_assembly", err, tol));
  }

  // Commutators on nodes whose stencils stay off the boundary rows.
  {
    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int k = i + 1; k < 3; ++k) {
        const VectorField got = commutator(ops, u, i, k);
        const VectorField expected = commutator_expected(u, i, k);
        double diff = 0.0, scale = 0.0;
        for (Eigen::Index p = 0; p < u.size(); ++p) {
          if (grid.boundary_distance(p) < 1) continue;
          diff = std::max(diff, (Vec3(got[p]) - Vec3(expected[p])).norm());
          scale = std::max(scale, Vec3(expected[p]).norm());
        }
        // Scale by the size of the individual second differences, which is
        // what roundoff is relative to.
        const double second = max_norm(ops.partial(ops.partial(u, k), i));
        err = std::max(err, diff / std::max({scale, second, 1e-300}));
      }
    }
    out.push_back(below("commutator_interior", err, tol));
  }

  // 1/2 |grad_h u|^2 = 1/2 |D u|^2 + u . curl u + |u|^2 at every node.
  {
    const auto g = ops.gradient(u);
    const VectorField curl_u = ops.curl(u);
    Eigen::ArrayXd lhs = Eigen::ArrayXd::Zero(u.size());
    Eigen::ArrayXd rhs = Eigen::ArrayXd::Zero(u.size());
    Eigen::ArrayXd scale = Eigen::ArrayXd::Zero(u.size());
    for (int i = 0; i < 3; ++i) {
      lhs += 0.5 * g[i].values().colwise().squaredNorm().transpose().array();
      const VectorField d = ops.derivative(u, i);
      const Eigen::ArrayXd dsq = 0.5 * d.values().colwise().squaredNorm().transpose().array();
      rhs += dsq;
      scale += dsq;
    }
    const Eigen::ArrayXd udc = dot(u, curl_u).array();
    const Eigen::ArrayXd usq = u.values().colwise().squaredNorm().transpose().array();
    rhs += udc + usq;
    scale += udc.abs() + usq;
    const double err = ((lhs - rhs).abs() / scale.max(1e-300)).maxCoeff();
    out.push_back(below("energy_decomposition_pointwise", err, tol));
  }

  // <grad_h u, grad_h w> + <u, Lap_h w> = 0.
  {
    const auto gu = ops.gradient(u);
    const auto gw = ops.gradient(w);
    double a = 0.0;
    for (int i = 0; i < 3; ++i) a += inner_product(gu[i], gw[i]);
    const double b = inner_product(u, ops.apply_laplacian(w));
    const double scale = std::sqrt(ops.gradient_norm_sq(u) * ops.gradient_norm_sq(w));
    out.push_back(below("integration_by_parts", std::abs(a + b) / scale, tol));
  }

  // Lap_h symmetric (exactly) and negative semidefinite on u.
  {
    const Operators::SparseMatrix& l = ops.laplacian();
    const Operators::SparseMatrix lt = l.transpose();
    const double asym = Operators::SparseMatrix(l - lt).coeffs().cwiseAbs().maxCoeff();
    out.push_back(below("laplacian_symmetry", asym, 0.0));
    const double q = inner_product(u, ops.apply_laplacian(u));
    const double g2 = ops.gradient_norm_sq(u);
    out.push_back(below("laplacian_quadratic_form", std::abs(q + g2) / g2, tol));
  }

  // Ghost values satisfy (g - u)/h = n x (g + u)/2 at face midpoints.
  {
    const double res = chiral_bc_residual(u) / std::max(max_norm(u) / grid.min_spacing(), 1.0);
    out.push_back(below("chiral_ghost_condition", res, tol));
  }
  return out;
}

ExpansionStudy laplacian_expansion_study(const std::vector<int>& resolutions, int dim,
                                         double extent) {
  ExpansionStudy s;
  s.resolutions = resolutions;
  // Errors are compared on one physical interior region: nodes at least
  // 2.5 coarse cells from every face, so each grid sees the wide stencil's
  // ghost-free rows and the sup is taken over the same set of points.
  const int coarsest = *std::min_element(resolutions.begin(), resolutions.end());
  const double margin = 2.5 * extent / coarsest;
  for (int n : resolutions) {
    GridSpec spec{dim, {extent, extent, dim == 3 ? extent : 0.0}, {n, n, dim == 3 ? n : 1}};
    const Grid grid(spec);
    const Operators ops(grid);
    VectorField u(grid);
    const double k = std::numbers::pi / extent;
    for (Eigen::Index p = 0; p < grid.node_count(); ++p) {
      const Vec3 x = grid.position(p);
      u[p] = Vec3(std::sin(k * x[0]) * std::cos(0.5 * k * x[1]) + std::cos(k * x[2]),
                  std::cos(0.5 * k * x[0] + k * x[1]) * std::sin(0.5 * k * x[2] + 0.3),
                  std::sin(0.5 * k * (x[0] + x[1] + x[2])));
    }
    const VectorField a = ops.apply_laplacian(u);
    const VectorField b = laplacian_expanded(u);
    double err = 0.0;
    for (Eigen::Index p = 0; p < grid.node_count(); ++p) {
      const Vec3 x = grid.position(p);
      bool inside = true;
      for (int d = 0; d < dim; ++d) {
        inside = inside && x[d] >= margin - 1e-12 && x[d] <= extent - margin + 1e-12;
      }
      if (!inside) continue;
      err = std::max(err, (Vec3(a[p]) - Vec3(b[p])).norm());
    }
    s.errors.push_back(err);
  }
  for (std::size_t i = 1; i < s.errors.size(); ++i) {
    const double ratio = double(s.resolutions[i]) / double(s.resolutions[i - 1]);
    s.orders.push_back(std::log(s.errors[i - 1] / s.errors[i]) / std::log(ratio));
  }
  return s;
}

// ---------------------------------------------------------------------------

namespace {

int scheme_order(Scheme s) { return s == Scheme::explicit_rk4 ? 4 : 1; }

void identities_suite(const RunData& run, const LlgModel& model, std::vector<CheckResult>& out) {
  for (auto c : operator_identity_suite(model.ops(), run.config.seed)) {
    c.name = "ops." + c.name;
    out.push_back(std::move(c));
  }
  const RunConfig& cfg = run.config;
  const DiagnosticSeries& s = run.series;
  if (s.empty()) return;
  const long steps = step_count(cfg.stepper.t_end, cfg.stepper.dt);
  const double dt = cfg.stepper.t_end / double(steps);
  const double t_end = s.records.back().t;
  const double m0 = s.records.front().l2_sq;
  const bool transport = model.velocity() && cfg.material.gamma != 0.0;

  // The L2 identity is structural for type-I; type-II needs a divergence-free,
  // tangential transport field and then holds up to the O(h^2) defect of the
  // discrete advection.
  const bool type_one = cfg.system == SystemKind::type_one;
  bool applicable = type_one || !transport;
  if (!type_one && transport) {
    const TransportReport tr = check_transport_condition(cfg.transport, model.grid(), 'c');
    applicable = tr.pass;
  }
  if (applicable) {
    const double dt_rec = t_end / double(s.records.size() - 1);
    const double h = model.grid().max_spacing();
    const double consistency = std::pow(dt, scheme_order(cfg.stepper.scheme)) + dt_rec * dt_rec +
                               (transport && !type_one ? h * h : 0.0);
    const double tol = m0 * std::max(1e-6, consistency * t_end);
    const double r = l2_identity_residual(s, cfg.material.epsilon);
    out.push_back(CheckResult{"l2_identity", std::abs(r), tol, std::abs(r) <= tol, true,
                              "||m(T)||^2 + 2 eps int ||grad_h m||^2 - ||m0||^2"});
  }

  if (cfg.transport.kind != TransportSpec::Kind::none) {
    const char which = cfg.transport.declared_condition == '-' ? 'a' : cfg.transport.declared_condition;
    const TransportReport tr = check_transport_condition(cfg.transport, model.grid(), which);
    const bool structural = which == 'c' ? tr.divergence_ok : tr.antisymmetry_ok;
    const double value = which == 'c' ? tr.divergence_defect : tr.antisymmetry_defect;
    out.push_back(CheckResult{std::string("transport.condition_") + which + ".structure", value,
                              tr.tolerance + tr.truncation_allowance, structural,
                              cfg.transport.declared_condition != '-', ""});
    // Rigid rotation is never tangential on a box: reported, not fatal.
    out.push_back(CheckResult{"transport.tangency", tr.tangency_defect, tr.tolerance,
                              tr.tangency_ok, false, tr.tangency_ok ? "" : "v.n != 0 on faces"});
  }
}

void estimates_suite(const RunData& run, const LlgModel& model, std::vector<CheckResult>& out) {
  const RunConfig& cfg = run.config;
  const DiagnosticSeries& s = run.series;
  if (s.empty()) return;
  const long steps = step_count(cfg.stepper.t_end, cfg.stepper.dt);
  const double dt = cfg.stepper.t_end / double(steps);
  const double t_end = s.records.back().t;
  const MaterialParams& p = cfg.material;

  if (p.epsilon > 0.0 && is_unit_kind(cfg.initial)) {
    double max_abs = 0.0, rise = 0.0;
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      max_abs = std::max(max_abs, s.records[i].max_abs_m);
      if (i) rise = std::max(rise, s.records[i].phi - s.records[i - 1].phi);
    }
    out.push_back(below("max_principle.max_abs_m", max_abs, 1.0 + 1e-6));
    out.push_back(below("max_principle.phi_increase", rise, 1e-6));
  }

  if (p.gamma == 0.0 && !cfg.applied.time_dependent()) {
    const double e0 = s.records.front().energy.helical_total;
    const double tol = energy_tolerance(e0, dt, scheme_order(cfg.stepper.scheme),
                                        model.grid().max_spacing(), t_end);
    const EnergyInequalityReport r = energy_inequality_residual(s, p, cfg.applied, tol);
    out.push_back(CheckResult{r.conservative ? "energy_conservation" : "energy_inequality",
                              r.conservative ? std::abs(r.residual) : r.residual, tol, r.pass,
                              true, "E(T) + beta/(a^2+b^2) int ||dm/dt||^2 - E(0)"});
  } else if (p.gamma != 0.0 && p.beta > 0.0 && !run.snapshots.empty()) {
    // Transport pairing only at snapshot times; reported, not gated.
    DiagnosticSeries at_snaps;
    std::vector<double> tsq;
    for (const Snapshot& snap : run.snapshots) {
      DiagnosticRecord rec = record_diagnostics(model, snap.m, snap.t);
      at_snaps.records.push_back(rec);
      const VectorField w = model.transport_term(snap.m);
      tsq.push_back(inner_product(w, w));
    }
    const double v = general_energy_inequality(at_snaps, p, tsq);
    out.push_back(CheckResult{"energy_inequality.general_delta", v, 0.0, v <= 0.0, false,
                              "delta = beta / (2 gamma), snapshot quadrature"});
  }

  double v_max = 0.0;
  if (model.velocity()) v_max = model.velocity()->values().colwise().norm().maxCoeff();
  const H1BoundReport h1 = h1_bound_monitor(s, v_max, applied_l2l2_sq(model, s));
  out.push_back(CheckResult{"h1_bound", h1.sup_h1, h1.envelope, h1.pass, true,
                            "sup ||m||^2_H1h against the Gronwall envelope"});

  const double dtm = trapezoid(s.column(&DiagnosticRecord::t), s.column(&DiagnosticRecord::dt_m_l2_sq));
  out.push_back(CheckResult{"time_derivative_l2l2_sq", dtm, 0.0, std::isfinite(dtm), false,
                            cfg.system == SystemKind::type_one
                                ? "type-I: bounded independently of eps"
                                : "type-II: only eps * ||dm/dt|| is controlled"});
}

void weak_suite(const RunData& run, const LlgModel& model, bool requested,
                std::vector<CheckResult>& out) {
  const bool type_one = run.config.system == SystemKind::type_one;
  if (run.snapshots.size() < (type_one ? 3u : 2u)) {
    // Only an error when the weak suite was asked for by name.
    out.push_back(CheckResult{"weak_residual", 0.0, 0.0, false, requested,
                              "too few snapshots for the time quadrature"});
    return;
  }
  const WeakResidualReport r =
      type_one ? weak_residual_type1(run.snapshots, model, 16, run.config.seed + 1)
               : weak_residual_type2(run.snapshots, model, 16, run.config.seed + 1);
  out.push_back(CheckResult{type_one ? "weak_residual.type1" : "weak_residual.type2",
                            r.max_residual, 0.0, std::isfinite(r.max_residual), false,
                            r.family + "; h = " + format_double(r.h) +
                                ", snapshot dt = " + format_double(r.dt)});
}

}  // namespace

std::vector<CheckResult> verify_run(const RunData& run, const std::string& suite) {
  if (suite != "identities" && suite != "estimates" && suite != "weak" && suite != "all") {
    throw ConfigError("--suite must be identities, estimates, weak or all");
  }
  std::vector<CheckResult> out;
  if (run.status != "ok") {
    out.push_back(CheckResult{"run_status", 0.0, 0.0, false, true, run.status});
  }
  try {
    run.series.validate();
  } catch (const NumericalError& e) {
    out.push_back(CheckResult{"series_finite", 0.0, 0.0, false, true, e.what()});
    return out;
  }
  const LlgModel model = build_model(run.config);
  if (suite == "identities" || suite == "all") identities_suite(run, model, out);
  if (suite == "estimates" || suite == "all") estimates_suite(run, model, out);
  if (suite == "weak" || suite == "all") weak_suite(run, model, suite == "weak", out);
  return out;
}

}  // namespace hllg
