#include <memory>

#include "doctest.h"
#include "hllg/diagnostics.hpp"
#include "support.hpp"

using namespace hllg;
using namespace hllg::test;

namespace {

DiagnosticSeries series_of(const std::vector<double>& t, const std::vector<double>& l2,
                           const std::vector<double>& h1) {
  DiagnosticSeries s;
  for (std::size_t i = 0; i < t.size(); ++i) {
    DiagnosticRecord r;
    r.t = t[i];
    r.l2_sq = l2[i];
    r.h1h_sq = h1[i];
    s.records.push_back(r);
  }
  return s;
}

LlgModel plain_model(const Grid& g, MaterialParams p, SystemKind kind = SystemKind::type_one) {
  return LlgModel(std::make_shared<const Operators>(g), p, kind, LowerOrderOperator::uniaxial(0.0),
                  AppliedFieldSpec{}, std::nullopt);
}

}  // namespace

TEST_CASE("maximum principle monitor") {
  const Grid g = cube(6, 1.0);
  const MaxPrinciple unit = max_principle_monitor(sample(HelixSpec{}, g));
  CHECK(unit.phi == 0.0);
  CHECK(unit.max_abs == doctest::Approx(1.0));
  const MaxPrinciple big = max_principle_monitor(1.1 * sample(UniformSpec{}, g));
  CHECK(big.max_abs == doctest::Approx(1.1));
  CHECK(big.phi == doctest::Approx(0.5 * 0.01).epsilon(1e-12));
  CHECK(max_principle_monitor(0.5 * sample(UniformSpec{}, g)).phi == 0.0);
}

TEST_CASE("trapezoid rule") {
  CHECK(trapezoid({0, 1, 3}, {1, 3, 7}) == doctest::Approx(2.0 + 10.0));
  CHECK(trapezoid({0.0}, {5.0}) == 0.0);
}

TEST_CASE("L2 identity residual") {
  CHECK_THROWS_AS(l2_identity_residual(DiagnosticSeries{}, 0.1), ConfigError);
  // Exponential decay of a single mode: ||m||^2 = exp(-2 eps mu t), ||grad_h m||^2 = mu ||m||^2.
  const double eps = 0.1, mu = 3.0;
  double res[2];
  for (int r = 0; r < 2; ++r) {
    const int n = r ? 40 : 20;
    std::vector<double> t, l2, h1;
    for (int i = 0; i <= n; ++i) {
      t.push_back(i * 1.0 / n);
      l2.push_back(std::exp(-2 * eps * mu * t.back()));
      h1.push_back(mu * l2.back());
    }
    res[r] = std::abs(l2_identity_residual(series_of(t, l2, h1), eps));
  }
  CHECK(res[0] < 1e-3);
  CHECK(res[0] / res[1] == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("series validation") {
  CHECK_THROWS_AS(series_of({0, 0}, {1, 1}, {0, 0}).validate(), NumericalError);
  CHECK_THROWS_AS(series_of({0, 1}, {1, NAN}, {0, 0}).validate(), NumericalError);
  CHECK_NOTHROW(series_of({0, 1}, {1, 1}, {0, 0}).validate());
}

TEST_CASE("energy inequality on an equilibrium and its guards") {
  DiagnosticSeries s = series_of({0, 0.5, 1}, {1, 1, 1}, {0, 0, 0});
  for (auto& r : s.records) r.energy.helical_total = 2.5;
  MaterialParams p;
  p.beta = 0.5;
  const EnergyInequalityReport r = energy_inequality_residual(s, p, AppliedFieldSpec{}, 1e-9);
  CHECK(r.residual == 0.0);
  CHECK(r.pass);
  CHECK_FALSE(r.conservative);
  MaterialParams sch;
  sch.beta = 0.0;
  s.records.back().energy.helical_total = 2.5 - 1e-3;
  const EnergyInequalityReport c = energy_inequality_residual(s, sch, AppliedFieldSpec{}, 1e-4);
  CHECK(c.conservative);
  CHECK_FALSE(c.pass);  // a drop is a failure when nothing may dissipate
  MaterialParams moving = p;
  moving.gamma = 1.0;
  CHECK_THROWS_AS(energy_inequality_residual(s, moving, AppliedFieldSpec{}, 1e-4), ConfigError);
  CHECK_THROWS_AS(energy_inequality_residual(
                      s, p, AppliedFieldSpec{AppliedFieldSpec::Kind::ramp, Vec3(1, 0, 0), 0}, 1e-4),
                  ConfigError);
  CHECK(energy_tolerance(10.0, 0.0, 4, 0.0, 1.0) == doctest::Approx(1e-5));
}

TEST_CASE("H1 envelope") {
  const DiagnosticSeries calm = series_of({0, 1}, {1, 1}, {0, 0});
  CHECK(h1_bound_monitor(calm, 0.0, 0.0).pass);
  const DiagnosticSeries wild = series_of({0, 0.1}, {1, 1e30}, {0, 1e30});
  CHECK_FALSE(h1_bound_monitor(wild, 0.0, 0.0).pass);
  const DiagnosticSeries broken = series_of({0, 0.1}, {1, INFINITY}, {0, 0});
  const H1BoundReport b = h1_bound_monitor(broken, 0.0, 0.0);
  CHECK_FALSE(b.finite);
  CHECK_FALSE(b.pass);
}

TEST_CASE("property: test function gradients match finite differences") {
  std::mt19937_64 rng(7);
  for (int dim : {2, 3}) {
    const Grid g = dim == 3 ? cube(8, 2.0) : square(8, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
      const TestFunction f = random_test_function(rng, dim);
      const Vec3 x(0.37, 1.21, dim == 3 ? 0.83 : 0.0);
      const Eigen::Matrix3d grad = f.gradient(x, g);
      const double d = 1e-6;
      for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = d;
        const Vec3 fd = j < dim ? Vec3((f.value(x + e, g) - f.value(x - e, g)) / (2 * d)) : Vec3::Zero();
        CHECK((grad.col(j) - fd).norm() <= 1e-6 * (1.0 + fd.norm()));
      }
      const double t = 0.3;
      CHECK(f.time_factor_derivative(t) ==
            doctest::Approx((f.time_factor(t + d) - f.time_factor(t - d)) / (2 * d)).epsilon(1e-6));
    }
  }
}

TEST_CASE("weak residuals vanish on the trivial equilibrium") {
  const Grid g = square(8);
  MaterialParams p;
  p.beta = 0.5;
  const Trajectory traj{{0.0, VectorField(g)}, {0.1, VectorField(g)}, {0.2, VectorField(g)}};
  const WeakResidualReport r1 = weak_residual_type1(traj, plain_model(g, p), 8, 3);
  CHECK(r1.max_residual == 0.0);
  CHECK(r1.n_test == 8);
  const WeakResidualReport r2 =
      weak_residual_type2(traj, plain_model(g, p, SystemKind::type_two), 8, 3);
  CHECK(r2.max_residual == 0.0);
  const Trajectory two{traj[0], traj[1]};
  CHECK_THROWS_AS(weak_residual_type1(two, plain_model(g, p), 8, 3), ConfigError);
}

TEST_CASE("norm equivalence and elliptic ratio") {
  const Grid g = cube(16);
  const Operators ops(g);
  const NormEquivalenceReport h = norm_equivalence_check(ops, sample(HelixSpec{2, 1.0}, g));
  CHECK(h.ratio_h1 == doctest::Approx(1.0).epsilon(0.1));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const VectorField u = random_smooth_field(g, rng);
    const NormEquivalenceReport r = norm_equivalence_check(ops, u);
    CHECK(r.pass);
    CHECK(r.ratio_h1 >= 0.2);
    CHECK(r.ratio_h1 <= 5.0);
    const double e = elliptic_ratio(ops, u);
    CHECK(e > 0.0);
    CHECK(std::isfinite(e));
  }
}

TEST_CASE("diagnostic record of a helix") {
  const Grid g = cube(8);
  MaterialParams p;
  p.beta = 0.5;
  const LlgModel model = plain_model(g, p);
  const VectorField m = sample(HelixSpec{}, g);
  const DiagnosticRecord r = record_diagnostics(model, m, 0.25);
  CHECK(r.t == 0.25);
  CHECK(r.l2_sq == doctest::Approx(inner_product(m, m)));
  CHECK(r.h1h_sq == doctest::Approx(model.ops().gradient_norm_sq(m)));
  CHECK(r.phi == 0.0);
  const VectorField rhs = model.rhs(m, 0.25);
  CHECK(r.dt_m_l2_sq == doctest::Approx(inner_product(rhs, rhs)));
}
