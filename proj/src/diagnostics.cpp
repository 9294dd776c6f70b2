#include "hllg/diagnostics.hpp"

#include <cmath>
#include <numbers>

namespace hllg {

void DiagnosticSeries::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const DiagnosticRecord& r = records[i];
    const double values[] = {r.t,
                             r.l2_sq,
                             r.h1h_sq,
                             r.max_abs_m,
                             r.phi,
                             r.energy.exchange,
                             r.energy.dmi,
                             r.energy.anisotropy,
                             r.energy.zeeman,
                             r.energy.applied,
                             r.energy.classical_total,
                             r.energy.helical_total,
                             r.dt_m_l2_sq};
    for (double v : values) {
      if (!std::isfinite(v)) throw NumericalError("non-finite diagnostic at record " + std::to_string(i));
    }
    if (i > 0 && !(r.t > records[i - 1].t)) {
      throw NumericalError("diagnostic time stamps are not increasing at record " + std::to_string(i));
    }
  }
}

std::vector<double> DiagnosticSeries::column(double DiagnosticRecord::*field) const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.*field);
  return out;
}

MaxPrinciple max_principle_monitor(const VectorField& m) {
  MaxPrinciple out;
  const Eigen::ArrayXd norm = m.values().colwise().norm().transpose().array();
  if (norm.size() == 0) return out;
  out.max_abs = norm.maxCoeff();
  out.phi = 0.5 * m.grid().cell_volume() * (norm - 1.0).max(0.0).square().sum();
  return out;
}

DiagnosticRecord record_diagnostics(const LlgModel& model, const VectorField& m, double t) {
  DiagnosticRecord r;
  r.t = t;
  r.l2_sq = inner_product(m, m);
  r.h1h_sq = model.ops().gradient_norm_sq(m);
  const MaxPrinciple mp = max_principle_monitor(m);
  r.max_abs_m = mp.max_abs;
  r.phi = mp.phi;
  const AppliedFieldSpec& applied = model.applied();
  const double zeeman = applied.kind == AppliedFieldSpec::Kind::zeeman ? applied.strength : 0.0;
  r.energy = energy_breakdown(model.ops(), m, model.pi(), model.applied_field(t), zeeman);
  const VectorField dm = model.rhs(m, t);
  r.dt_m_l2_sq = inner_product(dm, dm);
  return r;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size()) throw ConfigError("trapezoid: sample count mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

double l2_identity_residual(const DiagnosticSeries& series, double eps) {
  if (series.empty()) throw ConfigError("l2_identity_residual: empty diagnostic series");
  const auto t = series.column(&DiagnosticRecord::t);
  const auto g = series.column(&DiagnosticRecord::h1h_sq);
  return series.records.back().l2_sq + 2.0 * eps * trapezoid(t, g) - series.records.front().l2_sq;
}

double energy_tolerance(double e0, double dt, int order, double h, double t_end, double c) {
  return std::max(1e-6 * std::abs(e0), c * (std::pow(dt, order) + h * h) * t_end * std::abs(e0));
}

EnergyInequalityReport energy_inequality_residual(const DiagnosticSeries& series,
                                                  const MaterialParams& params,
                                                  const AppliedFieldSpec& applied,
                                                  double tolerance) {
  if (params.gamma != 0.0) {
    throw ConfigError("energy inequality gate requires gamma = 0 (use the general form)");
  }
  if (applied.time_dependent()) {
    throw ConfigError("energy inequality gate requires a time-independent applied field");
  }
  if (series.empty()) throw ConfigError("energy_inequality_residual: empty diagnostic series");
  EnergyInequalityReport r;
  const auto t = series.column(&DiagnosticRecord::t);
  const auto dtm = series.column(&DiagnosticRecord::dt_m_l2_sq);
  const double a2b2 = params.alpha * params.alpha + params.beta * params.beta;
  r.e_initial = series.records.front().energy.helical_total;
  r.e_final = series.records.back().energy.helical_total;
  r.dissipation = params.beta / a2b2 * trapezoid(t, dtm);
  r.residual = r.e_final + r.dissipation - r.e_initial;
  r.tolerance = tolerance;
  r.conservative = params.beta == 0.0;
  r.pass = r.conservative ? std::abs(r.residual) <= tolerance : r.residual <= tolerance;
  return r;
}

double general_energy_inequality(const DiagnosticSeries& series, const MaterialParams& p,
                                 const std::vector<double>& transport_sq) {
  if (p.gamma == 0.0 || p.beta <= 0.0) {
    throw ConfigError("general energy inequality needs gamma != 0 and beta > 0");
  }
  if (series.empty()) throw ConfigError("general_energy_inequality: empty diagnostic series");
  const double delta = p.beta / (2.0 * p.gamma);
  const double a2b2 = p.alpha * p.alpha + p.beta * p.beta;
  const auto t = series.column(&DiagnosticRecord::t);
  const auto dtm = series.column(&DiagnosticRecord::dt_m_l2_sq);
  const double lhs = series.records.back().energy.helical_total +
                     (p.beta - p.gamma * delta) / (a2b2 * (1.0 + p.gamma * delta)) * trapezoid(t, dtm);
  const double rhs = series.records.front().energy.helical_total +
                     (p.gamma * p.gamma + p.gamma / delta) * (1.0 + p.beta - p.gamma * delta) *
                         trapezoid(t, transport_sq);
  return lhs - rhs;
}

H1BoundReport h1_bound_monitor(const DiagnosticSeries& series, double v_max, double f_l2l2_sq,
                               double c) {
  if (series.empty()) throw ConfigError("h1_bound_monitor: empty diagnostic series");
  H1BoundReport r;
  for (const auto& rec : series.records) {
    const double v = rec.l2_sq + rec.h1h_sq;
    if (!std::isfinite(v)) {
      r.finite = false;
      r.sup_h1 = std::numeric_limits<double>::infinity();
      break;
    }
    r.sup_h1 = std::max(r.sup_h1, v);
  }
  const DiagnosticRecord& first = series.records.front();
  const double t_end = series.records.back().t - first.t;
  r.envelope = c * std::exp(c * t_end * (1.0 + v_max * v_max)) *
               (first.l2_sq + first.h1h_sq + f_l2l2_sq + 1.0);
  r.pass = r.finite && r.sup_h1 <= r.envelope;
  return r;
}

double applied_l2l2_sq(const LlgModel& model, const DiagnosticSeries& series) {
  if (model.applied().kind == AppliedFieldSpec::Kind::none) return 0.0;
  std::vector<double> f2;
  for (const auto& r : series.records) {
    const VectorField f = model.applied_field(r.t);
    f2.push_back(inner_product(f, f));
  }
  return trapezoid(series.column(&DiagnosticRecord::t), f2);
}

// ---------------------------------------------------------------------------
// Test functions.

namespace {

struct Factor {
  double value;
  double derivative;  // with respect to x_d
};

Factor axis_factor(const TestFunction& tf, int c, int d, double x, double length) {
  const double s = x / length;
  const double poly = 1.0 + tf.p[c][d] * s + tf.q[c][d] * s * s;
  const double dpoly = (tf.p[c][d] + 2.0 * tf.q[c][d] * s) / length;
  const double w = tf.k[c][d] * std::numbers::pi;
  const double arg = w * s + tf.theta[c][d];
  return {poly * std::cos(arg), dpoly * std::cos(arg) - poly * std::sin(arg) * w / length};
}

}  // namespace

Vec3 TestFunction::value(const Vec3& x, const Grid& grid) const {
  Vec3 out;
  for (int c = 0; c < 3; ++c) {
    double v = amplitude[c];
    for (int d = 0; d < dim; ++d) v *= axis_factor(*this, c, d, x[d], grid.extent(d)).value;
    out[c] = v;
  }
  return out;
}

Eigen::Matrix3d TestFunction::gradient(const Vec3& x, const Grid& grid) const {
  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  for (int c = 0; c < 3; ++c) {
    std::array<Factor, 3> f{};
    for (int d = 0; d < dim; ++d) f[d] = axis_factor(*this, c, d, x[d], grid.extent(d));
    for (int j = 0; j < dim; ++j) {
      double v = amplitude[c];
      for (int d = 0; d < dim; ++d) v *= d == j ? f[d].derivative : f[d].value;
      g(c, j) = v;
    }
  }
  return g;
}

double TestFunction::time_factor(double t) const { return std::cos(omega * t + time_phase); }

double TestFunction::time_factor_derivative(double t) const {
  return -omega * std::sin(omega * t + time_phase);
}

TestFunction random_test_function(std::mt19937_64& rng, int dim) {
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> wave(0.5, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  TestFunction tf;
  tf.dim = dim;
  for (int c = 0; c < 3; ++c) {
    tf.amplitude[c] = sym(rng);
    for (int d = 0; d < 3; ++d) {
      tf.p[c][d] = sym(rng);
      tf.q[c][d] = sym(rng);
      tf.k[c][d] = wave(rng);
      tf.theta[c][d] = angle(rng);
    }
  }
  tf.omega = wave(rng);
  tf.time_phase = angle(rng);
  return tf;
}

namespace {

/// phi on the nodes, its helical partials (analytic gradient minus e_i x phi)
/// and the normalising H1 norm.
struct SampledTest {
  VectorField phi;
  std::array<VectorField, 3> hpartial;
  double h1_norm;
};

SampledTest sample_test(const TestFunction& tf, const Grid& grid) {
  SampledTest s{VectorField(grid), {VectorField(grid), VectorField(grid), VectorField(grid)}, 0.0};
  double grad_sq = 0.0;
  for (Eigen::Index p = 0; p < grid.node_count(); ++p) {
    const Vec3 x = grid.position(p);
    const Vec3 v = tf.value(x, grid);
    const Eigen::Matrix3d g = tf.gradient(x, grid);
    s.phi[p] = v;
    grad_sq += g.squaredNorm();
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e[i] = 1.0;
      s.hpartial[i][p] = g.col(i) - e.cross(v);
    }
  }
  s.h1_norm = std::sqrt(inner_product(s.phi, s.phi) + grid.cell_volume() * grad_sq);
  return s;
}

std::vector<SampledTest> sample_family(const Grid& grid, int n_test, std::uint64_t seed,
                                       std::vector<TestFunction>& functions) {
  std::mt19937_64 rng(seed);
  std::vector<SampledTest> out;
  for (int i = 0; i < n_test; ++i) {
    functions.push_back(random_test_function(rng, grid.dim()));
    out.push_back(sample_test(functions.back(), grid));
  }
  return out;
}

/// Derivative at t[i] of the quadratic through three neighbouring samples.
VectorField time_derivative(const Trajectory& tr, std::size_t i) {
  const std::size_t n = tr.size();
  const std::size_t j = i == 0 ? 1 : (i == n - 1 ? n - 2 : i);
  const double t0 = tr[j - 1].t, t1 = tr[j].t, t2 = tr[j + 1].t, t = tr[i].t;
  const double w0 = ((t - t1) + (t - t2)) / ((t0 - t1) * (t0 - t2));
  const double w1 = ((t - t0) + (t - t2)) / ((t1 - t0) * (t1 - t2));
  const double w2 = ((t - t0) + (t - t1)) / ((t2 - t0) * (t2 - t1));
  return w0 * tr[j - 1].m + w1 * tr[j].m + w2 * tr[j + 1].m;
}

WeakResidualReport make_report(const std::string& family, const Trajectory& tr, int n_test,
                               std::uint64_t seed) {
  WeakResidualReport r;
  r.family = family;
  r.n_test = n_test;
  r.seed = seed;
  r.h = tr.front().m.grid().max_spacing();
  r.dt = (tr.back().t - tr.front().t) / double(tr.size() - 1);
  return r;
}

void finish_report(WeakResidualReport& r, const std::vector<std::vector<double>>& integrand,
                   const std::vector<double>& times, const std::vector<double>& boundary_terms,
                   const std::vector<SampledTest>& tests) {
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const double value = trapezoid(times, integrand[k]) + boundary_terms[k];
    const double res = tests[k].h1_norm > 0.0 ? std::abs(value) / tests[k].h1_norm : 0.0;
    r.residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
}

}  // namespace

WeakResidualReport weak_residual_type1(const Trajectory& tr, const LlgModel& model, int n_test,
                                       std::uint64_t seed) {
  if (tr.size() < 3) throw ConfigError("type-I weak residual needs at least 3 snapshots");
  const Grid& grid = model.grid();
  std::vector<TestFunction> functions;
  const auto tests = sample_family(grid, n_test, seed, functions);
  const MaterialParams& p = model.params();
  const double a2b2 = p.alpha * p.alpha + p.beta * p.beta;

  std::vector<std::vector<double>> integrand(n_test);
  std::vector<double> times;
  for (std::size_t n = 0; n < tr.size(); ++n) {
    const VectorField& m = tr[n].m;
    const double t = tr[n].t;
    times.push_back(t);
    VectorField dtm = time_derivative(tr, n);
    if (p.gamma != 0.0) dtm += p.gamma * model.transport_term(m);
    const VectorField a = p.alpha * dtm - p.beta * cross(m, dtm);
    VectorField lower = model.pi()(m);
    if (model.applied().kind != AppliedFieldSpec::Kind::none) lower += model.applied_field(t);
    const VectorField c = a2b2 * cross(m, lower);
    std::array<VectorField, 3> b{VectorField(grid), VectorField(grid), VectorField(grid)};
    for (int i = 0; i < 3; ++i) b[i] = a2b2 * cross(m, model.ops().partial(m, i));
    for (int k = 0; k < n_test; ++k) {
      double v = inner_product(a, tests[k].phi) + inner_product(c, tests[k].phi);
      for (int i = 0; i < 3; ++i) v -= inner_product(b[i], tests[k].hpartial[i]);
      integrand[k].push_back(functions[k].time_factor(t) * v);
    }
  }
  WeakResidualReport r = make_report("type-I poly x trig, cos(omega t) time factor", tr, n_test, seed);
  finish_report(r, integrand, times, std::vector<double>(n_test, 0.0), tests);
  return r;
}

WeakResidualReport weak_residual_type2(const Trajectory& tr, const LlgModel& model, int n_test,
                                       std::uint64_t seed) {
  if (tr.size() < 2) throw ConfigError("type-II weak residual needs at least 2 snapshots");
  const Grid& grid = model.grid();
  std::vector<TestFunction> functions;
  const auto tests = sample_family(grid, n_test, seed, functions);
  const MaterialParams& p = model.params();

  std::vector<std::vector<double>> integrand(n_test);
  std::vector<double> times;
  for (const Snapshot& s : tr) {
    const VectorField& m = s.m;
    times.push_back(s.t);
    VectorField lower = model.pi()(m);
    if (model.applied().kind != AppliedFieldSpec::Kind::none) lower += model.applied_field(s.t);
    const auto grad = model.ops().gradient(m);
    // Terms paired with phi itself.
    VectorField c = -p.alpha * cross(m, lower) - p.beta * cross(m, cross(m, lower));
    if (p.gamma != 0.0) c -= p.gamma * model.transport_term(m);
    if (p.beta != 0.0) {
      Eigen::RowVectorXd g2 = Eigen::RowVectorXd::Zero(m.size());
      for (int i = 0; i < 3; ++i) g2 += grad[i].values().colwise().squaredNorm();
      VectorField w = m;
      w.values().array().rowwise() *= g2.array();
      c += p.beta * w;
    }
    // Terms paired with grad_h phi.
    std::array<VectorField, 3> b{VectorField(grid), VectorField(grid), VectorField(grid)};
    for (int i = 0; i < 3; ++i) b[i] = p.alpha * cross(m, grad[i]) - p.beta * grad[i];
    for (int k = 0; k < n_test; ++k) {
      double rhs = inner_product(c, tests[k].phi);
      for (int i = 0; i < 3; ++i) rhs += inner_product(b[i], tests[k].hpartial[i]);
      const double lhs = functions[k].time_factor_derivative(s.t) * inner_product(m, tests[k].phi);
      // Integrand of -int <m, d_t phi> - int RHS.
      integrand[k].push_back(-lhs - functions[k].time_factor(s.t) * rhs);
    }
  }
  std::vector<double> boundary(n_test);
  for (int k = 0; k < n_test; ++k) {
    boundary[k] = functions[k].time_factor(tr.back().t) * inner_product(tr.back().m, tests[k].phi) -
                  functions[k].time_factor(tr.front().t) * inner_product(tr.front().m, tests[k].phi);
  }
  WeakResidualReport r = make_report("type-II poly x trig, cos(omega t) time factor", tr, n_test, seed);
  finish_report(r, integrand, times, boundary, tests);
  return r;
}

// ---------------------------------------------------------------------------
// Norm equivalence and elliptic ratio.

NormEquivalenceReport norm_equivalence_check(const Operators& ops, const VectorField& u) {
  NormEquivalenceReport r;
  const double l2 = inner_product(u, u);
  r.h1h_sq = l2;
  r.h1_sq = l2;
  r.h2h_sq = l2;
  r.h2_sq = l2;
  const auto hgrad = ops.gradient(u);
  for (int i = 0; i < 3; ++i) {
    const double g = inner_product(hgrad[i], hgrad[i]);
    r.h1h_sq += g;
    r.h2h_sq += g;
    for (int j = 0; j < 3; ++j) {
      const VectorField gg = ops.partial(hgrad[i], j);
      r.h2h_sq += inner_product(gg, gg);
    }
  }
  const Grid& grid = ops.grid();
  for (int i = 0; i < grid.dim(); ++i) {
    const VectorField d = ops.derivative(u, i);
    const double g = inner_product(d, d);
    r.h1_sq += g;
    r.h2_sq += g;
    for (int j = 0; j < grid.dim(); ++j) {
      const VectorField dd = ops.derivative(d, j);
      r.h2_sq += inner_product(dd, dd);
    }
  }
  r.ratio_h1 = r.h1h_sq / r.h1_sq;
  r.ratio_h2 = r.h2h_sq / r.h2_sq;
  r.pass = r.ratio_h1 >= 0.2 && r.ratio_h1 <= 5.0 && std::isfinite(r.ratio_h2);
  return r;
}

double elliptic_ratio(const Operators& ops, const VectorField& u) {
  const NormEquivalenceReport n = norm_equivalence_check(ops, u);
  const VectorField lap = ops.apply_laplacian(u);
  return std::sqrt(n.h2h_sq) / (std::sqrt(inner_product(lap, lap)) + std::sqrt(inner_product(u, u)));
}

VectorField random_smooth_field(const Grid& grid, std::mt19937_64& rng, int modes) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> wave(0, 3);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  struct Mode {
    int c;
    std::array<int, 3> k;
    double phase, amp;
  };
  std::vector<Mode> list;
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < modes; ++i) {
      Mode m{c, {0, 0, 0}, angle(rng), normal(rng)};
      for (int d = 0; d < grid.dim(); ++d) m.k[d] = wave(rng);
      list.push_back(m);
    }
  }
  VectorField u(grid);
  for (Eigen::Index p = 0; p < grid.node_count(); ++p) {
    const Vec3 x = grid.position(p);
    for (const Mode& m : list) {
      double arg = m.phase;
      for (int d = 0; d < grid.dim(); ++d) arg += m.k[d] * std::numbers::pi * x[d] / grid.extent(d);
      u[p][m.c] += m.amp * std::cos(arg);
    }
  }
  return u;
}

}  // namespace hllg
