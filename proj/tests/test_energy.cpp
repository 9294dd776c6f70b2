#include "doctest.h"
#include "hllg/energy.hpp"
#include "support.hpp"

using namespace hllg;
using namespace hllg::test;

namespace {

const double kVolume = std::pow(kTwoPi, 3);

/// |value - target| / |target| on a coarse and a fine cube.
template <typename F>
std::array<double, 2> refinement_errors(F energy, double target) {
  std::array<double, 2> e{};
  for (int r = 0; r < 2; ++r) {
    const Grid g = cube(r ? 32 : 16);
    const Operators ops(g);
    e[r] = std::abs(energy(ops, g) - target) / std::abs(target);
  }
  return e;
}

}  // namespace

TEST_CASE("exchange energy") {
  // A constant field is not chiral-compatible: the ghost rotation leaves an
  // O(h) boundary-layer energy that vanishes under refinement.
  for (int dim : {2, 3}) {
    double e[2];
    for (int r = 0; r < 2; ++r) {
      const Grid g = dim == 3 ? cube(r ? 32 : 16) : square(r ? 64 : 32);
      e[r] = exchange_energy(Operators(g), sample(UniformSpec{}, g));
    }
    CHECK(e[0] / e[1] == doctest::Approx(2.0).epsilon(0.1));
  }
  const Grid g = cube(8);
  const Operators ops(g);
  const VectorField e3 = sample(UniformSpec{}, g);
  for (int i = 0; i < 3; ++i) {
    const VectorField d = ops.derivative(e3, i);
    for (Eigen::Index p = 0; p < g.node_count(); ++p) {
      if (g.boundary_distance(p) >= 1) CHECK(d[p].norm() == 0.0);
    }
  }

  const auto e = refinement_errors(
      [](const Operators& ops, const Grid& gr) {
        return exchange_energy(ops, sample(HelixSpec{2, 1.0}, gr));
      },
      0.5 * kVolume);
  CHECK(e[1] < e[0]);
  CHECK(e[1] < 0.05);
}

TEST_CASE("DMI energy of a helix and its mirror image") {
  const auto e = refinement_errors(
      [](const Operators& ops, const Grid& g) { return dmi_energy(ops, sample(HelixSpec{2, 1.0}, g)); },
      -kVolume);
  CHECK(e[1] < e[0]);
  CHECK(e[1] < 0.05);
  const auto r = refinement_errors(
      [](const Operators& ops, const Grid& g) { return dmi_energy(ops, sample(HelixSpec{2, -1.0}, g)); },
      kVolume);
  // Opposite chirality to the boundary condition: first-order boundary layer.
  CHECK(r[0] / r[1] > 1.8);
  CHECK(r[1] < 0.15);
}

TEST_CASE("uniaxial operator") {
  std::mt19937_64 rng(3);
  const Grid g = cube(6);
  const VectorField e1 = sample(UniformSpec{Vec3(1, 0, 0)}, g);
  CHECK(pi_op(e1, 0.7).values().isZero(0.0));
  const LowerOrderOperator pi = LowerOrderOperator::uniaxial(0.3);
  CHECK(pi.bound() == 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    const VectorField u = gaussian_field(g, rng), w = gaussian_field(g, rng);
    CHECK(inner_product(pi(u), w) == doctest::Approx(inner_product(u, pi(w))).epsilon(1e-13));
    CHECK(norms(pi(u)).l2 <= 0.3 * norms(u).l2 * (1 + 1e-14));
  }
  CHECK_THROWS_AS(LowerOrderOperator::uniaxial(-1.0), ConfigError);
}

TEST_CASE("applied fields") {
  const Grid g = cube(4);
  const VectorField z = applied_field(AppliedFieldSpec{AppliedFieldSpec::Kind::zeeman, {}, 1.0}, g, 0.0);
  for (Eigen::Index p = 0; p < z.size(); ++p) CHECK(Vec3(z[p]) == Vec3(0, 0, 1));
  CHECK(applied_field(AppliedFieldSpec{}, g, 3.0).values().isZero(0.0));
  const VectorField r = applied_field(
      AppliedFieldSpec{AppliedFieldSpec::Kind::ramp, Vec3(1, 0, 0), 0.0}, g, 2.0);
  CHECK(Vec3(r[0]) == Vec3(2, 0, 0));
  CHECK(zeeman_energy(sample(UniformSpec{}, g), 1.0) == 0.0);
}

TEST_CASE("helical energy of the helix") {
  const auto e = refinement_errors(
      [](const Operators& ops, const Grid& g) {
        return helical_energy(ops, sample(HelixSpec{2, 1.0}, g), LowerOrderOperator::uniaxial(0.0),
                              VectorField(g));
      },
      0.5 * kVolume);
  CHECK(e[1] < e[0]);
  CHECK(e[1] < 0.1);
}

TEST_CASE("property: helical = classical + ||m||^2 for any field") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 12; ++trial) {
    const Grid g = random_grid(rng, trial % 2 ? 2 : 3);
    const Operators ops(g);
    const VectorField m = gaussian_field(g, rng);
    const VectorField f = gaussian_field(g, rng);
    const EnergyBreakdown b = energy_breakdown(ops, m, LowerOrderOperator::uniaxial(0.25), f, 0.0);
    const double scale = std::abs(b.exchange) + std::abs(b.dmi) + inner_product(m, m);
    CHECK(std::abs(b.helical_total - b.classical_total - inner_product(m, m)) <= 1e-12 * scale);
  }
}

TEST_CASE("property: exchange energy is invariant under a global rotation of values") {
  std::mt19937_64 rng(19);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 10; ++trial) {
    const Grid g = random_grid(rng, 3, 7);
    const Operators ops(g);
    // Interior central differences commute with rotations; the ghost rule does not,
    // so the invariant is stated for the ghost-free interior sum.
    const VectorField m = gaussian_field(g, rng);
    const Eigen::Matrix3d q =
        Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized().toRotationMatrix();
    VectorField rm = m;
    rm.values() = q * m.values();
    double a = 0.0, b = 0.0;
    for (int i = 0; i < 3; ++i) {
      const VectorField d = ops.derivative(m, i), dr = ops.derivative(rm, i);
      for (Eigen::Index p = 0; p < g.node_count(); ++p) {
        if (g.boundary_distance(p) < 1) continue;
        a += d[p].squaredNorm();
        b += dr[p].squaredNorm();
      }
    }
    CHECK(b == doctest::Approx(a).epsilon(1e-12));
  }
}
