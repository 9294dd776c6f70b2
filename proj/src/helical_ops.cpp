#include "hllg/helical_ops.hpp"

#include <iomanip>
#include <ostream>

namespace hllg {

template class HelicalOperators<double>;

VectorField commutator(const Operators& ops, const VectorField& u, int i, int k) {
  if (i == k) throw ConfigError("commutator needs two distinct axes");
  return ops.partial(ops.partial(u, k), i) - ops.partial(ops.partial(u, i), k);
}

VectorField commutator_expected(const VectorField& u, int i, int k) {
  VectorField out(u.grid());
  for (Eigen::Index p = 0; p < u.size(); ++p) {
    Vec3 v = Vec3::Zero();
    v[k] += u[p][i];
    v[i] -= u[p][k];
    out[p] = v;
  }
  return out;
}

VectorField one_sided_derivative(const VectorField& u, int axis) {
  const Grid& g = u.grid();
  VectorField out(g);
  if (!g.active(axis)) return out;
  const double h = g.h(axis);
  const Eigen::Index s = g.stride(axis);
  const int n = g.n(axis);
  for (Eigen::Index p = 0; p < u.size(); ++p) {
    const int c = g.coords(p)[axis];
    if (c == 0) {
      out[p] = (-3.0 * u[p] + 4.0 * u[p + s] - u[p + 2 * s]) / (2.0 * h);
    } else if (c == n - 1) {
      out[p] = (3.0 * u[p] - 4.0 * u[p - s] + u[p - 2 * s]) / (2.0 * h);
    } else {
      out[p] = (u[p + s] - u[p - s]) / (2.0 * h);
    }
  }
  return out;
}

VectorField curl(const VectorField& u) {
  VectorField out(u.grid());
  for (int i = 0; i < 3; ++i) {
    if (!u.grid().active(i)) continue;
    out.values().noalias() += skew_matrix(i) * one_sided_derivative(u, i).values();
  }
  return out;
}

VectorField laplacian_expanded(const VectorField& u) {
  const Grid& g = u.grid();
  VectorField out(g);
  for (Eigen::Index p = 0; p < u.size(); ++p) {
    if (g.boundary_distance(p) < 1) continue;
    Vec3 lap = Vec3::Zero();
    Vec3 rot = Vec3::Zero();
    for (int i = 0; i < g.dim(); ++i) {
      const Eigen::Index s = g.stride(i);
      const double h = g.h(i);
      const Vec3 up = u[p + s], um = u[p - s], u0 = u[p];
      lap += (up - 2.0 * u0 + um) / (h * h);
      rot += skew_matrix(i) * ((up - um) / (2.0 * h));
    }
    out[p] = lap - 2.0 * rot - 2.0 * Vec3(u[p]);
  }
  return out;
}

std::vector<Eigen::Index> face_nodes(const Grid& grid, int axis, int side) {
  std::vector<Eigen::Index> nodes;
  const int target = side == 0 ? 0 : grid.n(axis) - 1;
  for (Eigen::Index p = 0; p < grid.node_count(); ++p) {
    if (grid.coords(p)[axis] == target) nodes.push_back(p);
  }
  return nodes;
}

Eigen::Matrix3Xd chiral_ghost_extend(const VectorField& u, int axis, int side) {
  const Grid& g = u.grid();
  if (!g.active(axis)) throw ConfigError("ghost extension requested along an inactive axis");
  Vec3 n = Vec3::Zero();
  n[axis] = side == 0 ? -1.0 : 1.0;
  const Eigen::Matrix3d r = chiral_ghost_rotation<double>(n, g.h(axis));
  const auto nodes = face_nodes(g, axis, side);
  Eigen::Matrix3Xd ghosts(3, Eigen::Index(nodes.size()));
  for (std::size_t q = 0; q < nodes.size(); ++q) ghosts.col(Eigen::Index(q)) = r * u[nodes[q]];
  return ghosts;
}

double chiral_bc_residual(const VectorField& u) {
  const Grid& g = u.grid();
  double worst = 0.0;
  for (int axis = 0; axis < g.dim(); ++axis) {
    for (int side = 0; side < 2; ++side) {
      Vec3 n = Vec3::Zero();
      n[axis] = side == 0 ? -1.0 : 1.0;
      const auto nodes = face_nodes(g, axis, side);
      const Eigen::Matrix3Xd ghosts = chiral_ghost_extend(u, axis, side);
      const double h = g.h(axis);
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const Vec3 gq = ghosts.col(Eigen::Index(q));
        const Vec3 uq = u[nodes[q]];
        const Vec3 res = (gq - uq) / h - n.cross(0.5 * (gq + uq));
        worst = std::max(worst, res.norm());
      }
    }
  }
  return worst;
}

void write_coordinate_format(std::ostream& os, const Operators::SparseMatrix& m) {
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
    for (Operators::SparseMatrix::InnerIterator it(m, r); it; ++it) {
      os << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

}  // namespace hllg
