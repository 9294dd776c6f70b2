#include "doctest.h"
#include "support.hpp"

using namespace hllg;
using namespace hllg::test;

namespace {

VectorField helix3(const Grid& g) { return sample(HelixSpec{2, 1.0}, g); }

double interior_max(const Grid& g, const Eigen::Matrix3Xd& v, int min_distance) {
  double m = 0.0;
  for (Eigen::Index p = 0; p < g.node_count(); ++p) {
    if (g.boundary_distance(p) >= min_distance) m = std::max(m, v.col(p).norm());
  }
  return m;
}

}  // namespace

TEST_CASE("skew matrices act as cross products") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 u(n(rng), n(rng), n(rng));
    for (int i = 0; i < 3; ++i) {
      Vec3 e = Vec3::Zero();
      e[i] = 1.0;
      CHECK((skew_matrix(i) * u - e.cross(u)).norm() <= 1e-15 * u.norm());
    }
  }
  const auto m = skew_matrices();
  Eigen::Matrix3d sum = m[0] * m[0] + m[1] * m[1] + m[2] * m[2];
  CHECK((sum + 2.0 * Eigen::Matrix3d::Identity()).norm() == 0.0);
  for (int i = 0; i < 3; ++i) CHECK((m[i] + m[i].transpose()).norm() == 0.0);
}

TEST_CASE("ghost rotation satisfies the face-midpoint condition") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  for (int trial = 0; trial < 20; ++trial) {
    Vec3 normal(n(rng), n(rng), n(rng));
    normal.normalize();
    const double h = 0.05 + std::abs(n(rng));
    const Vec3 u(n(rng), n(rng), n(rng));
    const Vec3 g = chiral_ghost(u, normal, h);
    CHECK(((g - u) / h - normal.cross(g + u) / 2.0).norm() <= 1e-14 * (1.0 + u.norm() / h));
    const Eigen::Matrix3d r = chiral_ghost_rotation(normal, h);
    CHECK((r.transpose() * r - Eigen::Matrix3d::Identity()).norm() <= 1e-14);
  }
}

TEST_CASE("helical partial of the helix along its axis vanishes to second order") {
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const Grid g = cube(r ? 32 : 16);
    const Operators ops(g);
    err[r] = partial_helical(ops, helix3(g), 2).values().cwiseAbs().maxCoeff();
  }
  CHECK(err[0] < 0.05);
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("helix has unit helical gradient density away from the side faces") {
  const Grid g = cube(24);
  const Operators ops(g);
  const auto grad = helical_gradient(ops, helix3(g));
  Eigen::Matrix3Xd defect(3, g.node_count());
  defect.setZero();
  for (Eigen::Index p = 0; p < g.node_count(); ++p) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += grad[i][p].squaredNorm();
    defect(0, p) = s - 1.0;
  }
  CHECK(interior_max(g, defect, 1) < 0.01);
}

TEST_CASE("SBP Laplacian: zero, symmetric, quadratic form") {
  const Grid g = cube(6, 1.7);
  const Operators ops(g);
  CHECK(helical_laplacian(ops, VectorField(g)).values().isZero(0.0));
  const auto& l = ops.laplacian();
  CHECK(Operators::SparseMatrix(l - Operators::SparseMatrix(l.transpose())).norm() == 0.0);

  std::mt19937_64 rng(8);
  const VectorField u = gaussian_field(g, rng);
  CHECK(rel(inner_product(helical_laplacian(ops, u), u), -ops.gradient_norm_sq(u)) < 1e-12);
}

TEST_CASE("expanded Laplacian oracle on simple fields") {
  const Grid g = cube(16);
  const VectorField e3 = sample(UniformSpec{Vec3(0, 0, 1)}, g);
  const VectorField le = laplacian_expanded(e3);
  for (Eigen::Index p = 0; p < g.node_count(); ++p) {
    if (g.boundary_distance(p) >= 1) CHECK((le[p] - Vec3(0, 0, -2)).norm() <= 1e-13);
  }
  // helix: Lap m = -m, curl m = -m, so Lap m - 2 curl m - 2 m = -m.
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const Grid gr = cube(r ? 32 : 16);
    const VectorField m = helix3(gr);
    err[r] = interior_max(gr, laplacian_expanded(m).values() + m.values(), 1);
  }
  CHECK(err[0] < 0.05);
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("independent curl oracle") {
  const Grid g = cube(16);
  CHECK(curl(sample(UniformSpec{Vec3(1, 2, 3)}, g)).values().cwiseAbs().maxCoeff() <= 1e-13);
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const Grid gr = cube(r ? 32 : 16);
    const VectorField m = helix3(gr);
    err[r] = (curl(m).values() + m.values()).cwiseAbs().maxCoeff();
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("helical Laplacian of the helix matches the expansion in the interior") {
  double err[2];
  for (int r = 0; r < 2; ++r) {
    const Grid g = cube(r ? 32 : 16);
    const Operators ops(g);
    const VectorField m = sample(HelixSpec{2, 1.0}, g);
    err[r] = interior_max(g, (helical_laplacian(ops, m) - laplacian_expanded(m)).values(), 2);
  }
  CHECK(std::log2(err[0] / err[1]) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("ghost-extended fields satisfy the chiral condition at face midpoints") {
  std::mt19937_64 rng(12);
  for (int dim : {2, 3}) {
    const Grid g = random_grid(rng, dim);
    const VectorField u = gaussian_field(g, rng);
    CHECK(chiral_bc_residual(u) <= 1e-12 * (1.0 / g.min_spacing()) * u.values().cwiseAbs().maxCoeff());
    const auto ghosts = chiral_ghost_extend(u, 0, 1);
    CHECK(ghosts.cols() == Eigen::Index(face_nodes(g, 0, 1).size()));
  }
}

TEST_CASE("commutator equals the curvature term away from the boundary") {
  std::mt19937_64 rng(21);
  const Grid g = cube(9, 3.0);
  const Operators ops(g);
  const VectorField u = gaussian_field(g, rng);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      if (i == k) {
        CHECK_THROWS_AS(commutator(ops, u, i, k), ConfigError);
        continue;
      }
      const VectorField c = commutator(ops, u, i, k);
      const VectorField e = commutator_expected(u, i, k);
      const double scale = u.values().cwiseAbs().maxCoeff();
      CHECK(interior_max(g, (c - e).values(), 2) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("property: summation by parts, symmetry and sign on random grids") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 16; ++trial) {
    const Grid g = random_grid(rng, trial % 2 ? 2 : 3, 8);
    const Operators ops(g);
    const VectorField u = gaussian_field(g, rng), w = gaussian_field(g, rng);
    const auto gu = ops.gradient(u), gw = ops.gradient(w);
    double grad_pair = 0.0;
    for (int i = 0; i < 3; ++i) grad_pair += inner_product(gu[i], gw[i]);
    const double lap_pair = inner_product(u, helical_laplacian(ops, w));
    const double scale = std::sqrt(ops.gradient_norm_sq(u) * ops.gradient_norm_sq(w));
    CHECK(std::abs(grad_pair + lap_pair) <= 1e-12 * scale);
    CHECK(inner_product(helical_laplacian(ops, u), w) ==
          doctest::Approx(inner_product(u, helical_laplacian(ops, w))).epsilon(1e-12));
    CHECK(inner_product(helical_laplacian(ops, u), u) <= 0.0);
  }
}

TEST_CASE("property: pointwise energy decomposition with the same discrete partials") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    const Grid g = random_grid(rng, trial % 2 ? 2 : 3, 8);
    const Operators ops(g);
    const VectorField u = gaussian_field(g, rng);
    const auto gu = ops.gradient(u);
    const VectorField c = ops.curl(u);
    std::array<VectorField, 3> d{ops.derivative(u, 0), ops.derivative(u, 1), ops.derivative(u, 2)};
    for (Eigen::Index p = 0; p < g.node_count(); ++p) {
      double lhs = 0.0, grad = 0.0;
      for (int i = 0; i < 3; ++i) {
        lhs += 0.5 * gu[i][p].squaredNorm();
        grad += 0.5 * d[i][p].squaredNorm();
      }
      const double rhs = grad + Vec3(u[p]).dot(Vec3(c[p])) + u[p].squaredNorm();
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (lhs + grad + u[p].squaredNorm()));
    }
  }
}

TEST_CASE("in 2D the out-of-plane helical partial is -M_3") {
  std::mt19937_64 rng(6);
  const Grid g = square(8);
  const Operators ops(g);
  const VectorField u = gaussian_field(g, rng);
  const VectorField p3 = ops.partial(u, 2);
  for (Eigen::Index p = 0; p < g.node_count(); ++p) {
    CHECK((Vec3(p3[p]) + Vec3(0, 0, 1).cross(Vec3(u[p]))).norm() <= 1e-15);
  }
}

TEST_CASE("divergence structure holds to second order") {
  // <m x Lap_h m, phi> + <m x grad_h m, grad_h phi> with smooth m, phi.
  double defect[2];
  for (int r = 0; r < 2; ++r) {
    const Grid g = cube(r ? 24 : 12, 3.0);
    const Operators ops(g);
    VectorField m(g), phi(g);
    for (Eigen::Index p = 0; p < g.node_count(); ++p) {
      const Vec3 x = g.position(p);
      m[p] = Vec3(std::cos(x[0]), std::sin(x[1]) * x[2], 1.0 + 0.1 * x[0] * x[1]);
      phi[p] = Vec3(x[1], std::cos(x[2]), x[0] * x[2]);
    }
    const auto gm = ops.gradient(m), gp = ops.gradient(phi);
    double s = inner_product(cross(m, helical_laplacian(ops, m)), phi);
    for (int i = 0; i < 3; ++i) s += inner_product(cross(m, gm[i]), gp[i]);
    defect[r] = std::abs(s);
  }
  CHECK(defect[1] < defect[0]);
  CHECK(std::log2(defect[0] / defect[1]) > 1.5);
}
