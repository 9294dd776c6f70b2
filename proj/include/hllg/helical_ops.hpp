#pragma once

#include <Eigen/Sparse>

#include <array>
#include <iosfwd>
#include <vector>

#include "hllg/grid_field.hpp"

namespace hllg {

/// M_i with M_i u = e_i x u (axis is 0-based).
template <typename Scalar = double>
Eigen::Matrix<Scalar, 3, 3> skew_matrix(int axis) {
  Eigen::Matrix<Scalar, 3, 3> m = Eigen::Matrix<Scalar, 3, 3>::Zero();
  const int b = (axis + 1) % 3, c = (axis + 2) % 3;
  m(c, b) = Scalar(1);
  m(b, c) = Scalar(-1);
  return m;
}

template <typename Scalar = double>
std::array<Eigen::Matrix<Scalar, 3, 3>, 3> skew_matrices() {
  return {skew_matrix<Scalar>(0), skew_matrix<Scalar>(1), skew_matrix<Scalar>(2)};
}

/// Ghost rotation for the chiral condition d_n u = n x u, imposed at the face
/// midpoint between a boundary node and its ghost (spacing h):
///   (g - u) / h = n x (g + u) / 2.
/// The solution g = R u is the Cayley transform of (h/2)[n]x, a rotation about n.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> chiral_ghost_rotation(const Vec3T<Scalar>& normal, Scalar h) {
  Eigen::Matrix<Scalar, 3, 3> n;
  n << 0, -normal[2], normal[1], normal[2], 0, -normal[0], -normal[1], normal[0], 0;
  const Scalar c = h / Scalar(2);
  const Scalar denom = Scalar(1) + c * c;
  return Eigen::Matrix<Scalar, 3, 3>::Identity() + (Scalar(2) * c / denom) * n +
         (Scalar(2) * c * c / denom) * (n * n);
}

template <typename Scalar>
Vec3T<Scalar> chiral_ghost(const Vec3T<Scalar>& mirror, const Vec3T<Scalar>& normal, Scalar h) {
  return chiral_ghost_rotation(normal, h) * mirror;
}

/// Discrete helical calculus on a cell-centred grid.
///
/// D_i is the second-order central difference along axis i, with the chiral
/// ghost rotation folded into the boundary rows, so it maps node values to node
/// values. The helical partial is G_i = D_i - M_i and the helical Laplacian is
/// defined through summation by parts,
///   Lap_h = -sum_i G_i^T G_i,
/// which makes <grad_h u, grad_h w> + <u, Lap_h w> = 0 an algebraic identity.
/// In 2D, D_3 = 0 and G_3 = -M_3.
template <typename Scalar = double>
class HelicalOperators {
 public:
  using SparseMatrix = Eigen::SparseMatrix<Scalar, Eigen::RowMajor>;
  using FieldType = Field<Scalar>;

  explicit HelicalOperators(Grid grid) : grid_(std::move(grid)) { assemble(); }

  const Grid& grid() const { return grid_; }

  const SparseMatrix& difference(int axis) const { return difference_[axis]; }
  const SparseMatrix& helical_partial(int axis) const { return partial_[axis]; }
  const SparseMatrix& laplacian() const { return laplacian_; }

  FieldType derivative(const FieldType& u, int axis) const { return apply(difference_[axis], u); }
  FieldType partial(const FieldType& u, int axis) const { return apply(partial_[axis], u); }

  std::array<FieldType, 3> gradient(const FieldType& u) const {
    return {partial(u, 0), partial(u, 1), partial(u, 2)};
  }

  FieldType apply_laplacian(const FieldType& u) const { return apply(laplacian_, u); }

  /// Curl built from the ghost-extended D_i, so that the pointwise identity
  /// 1/2 |grad_h u|^2 = 1/2 |D u|^2 + u . curl u + |u|^2 holds exactly.
  FieldType curl(const FieldType& u) const {
    FieldType out(grid_);
    for (int i = 0; i < 3; ++i) {
      if (!grid_.active(i)) continue;
      const FieldType d = derivative(u, i);
      const auto m = skew_matrix<Scalar>(i);
      out.values().noalias() += m * d.values();
    }
    return out;
  }

  /// ||grad_h u||^2 under the quadrature inner product.
  Scalar gradient_norm_sq(const FieldType& u) const {
    Scalar s = 0;
    for (int i = 0; i < 3; ++i) {
      const FieldType g = partial(u, i);
      s += inner_product(g, g);
    }
    return s;
  }

  FieldType apply(const SparseMatrix& op, const FieldType& u) const {
    if (!(u.grid() == grid_)) throw ConfigError("field and operators live on different grids");
    typename FieldType::Flat out = op * u.flat();
    return FieldType::from_flat(grid_, out);
  }

 private:
  using Triplet = Eigen::Triplet<Scalar>;

  static void add_block(std::vector<Triplet>& t, Eigen::Index row_node, Eigen::Index col_node,
                        const Eigen::Matrix<Scalar, 3, 3>& block) {
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (block(r, c) != Scalar(0)) t.emplace_back(3 * row_node + r, 3 * col_node + c, block(r, c));
      }
    }
  }

  void assemble() {
    const Eigen::Index n = grid_.node_count();
    const Eigen::Index dof = 3 * n;
    using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
    const Mat3 eye = Mat3::Identity();

    SparseMatrix lap(dof, dof);
    for (int axis = 0; axis < 3; ++axis) {
      std::vector<Triplet> diff;
      if (grid_.active(axis)) {
        const Scalar h = Scalar(grid_.h(axis));
        const Scalar inv2h = Scalar(1) / (Scalar(2) * h);
        Vec3T<Scalar> e = Vec3T<Scalar>::Zero();
        e[axis] = Scalar(1);
        const Mat3 r_hi = chiral_ghost_rotation<Scalar>(e, h);
        const Mat3 r_lo = chiral_ghost_rotation<Scalar>(Vec3T<Scalar>(-e), h);
        const Eigen::Index s = grid_.stride(axis);
        const int nax = grid_.n(axis);
        diff.reserve(std::size_t(n) * 12);
        for (Eigen::Index p = 0; p < n; ++p) {
          const int c = grid_.coords(p)[axis];
          if (c + 1 < nax) {
            add_block(diff, p, p + s, inv2h * eye);
          } else {
            add_block(diff, p, p, inv2h * r_hi);
          }
          if (c > 0) {
            add_block(diff, p, p - s, -inv2h * eye);
          } else {
            add_block(diff, p, p, -inv2h * r_lo);
          }
        }
      }
      SparseMatrix d(dof, dof);
      d.setFromTriplets(diff.begin(), diff.end());
      difference_[axis] = d;

      std::vector<Triplet> skew;
      skew.reserve(std::size_t(n) * 2);
      const Mat3 m = -skew_matrix<Scalar>(axis);
      for (Eigen::Index p = 0; p < n; ++p) add_block(skew, p, p, m);
      SparseMatrix minus_m(dof, dof);
      minus_m.setFromTriplets(skew.begin(), skew.end());
      partial_[axis] = d + minus_m;

      SparseMatrix gt = partial_[axis].transpose();
      lap -= SparseMatrix(gt * partial_[axis]);
    }
    // Exact symmetry: (a + b) / 2 == (b + a) / 2 bitwise.
    SparseMatrix lt = lap.transpose();
    laplacian_ = Scalar(0.5) * (lap + lt);
    laplacian_.makeCompressed();
  }

  Grid grid_;
  std::array<SparseMatrix, 3> difference_;
  std::array<SparseMatrix, 3> partial_;
  SparseMatrix laplacian_;
};

extern template class HelicalOperators<double>;

using Operators = HelicalOperators<double>;

// Free-function forms of the operator set.

inline VectorField partial_helical(const Operators& ops, const VectorField& u, int axis) {
  return ops.partial(u, axis);
}
inline std::array<VectorField, 3> helical_gradient(const Operators& ops, const VectorField& u) {
  return ops.gradient(u);
}
inline VectorField helical_laplacian(const Operators& ops, const VectorField& u) {
  return ops.apply_laplacian(u);
}

/// d_i^h d_k^h u - d_k^h d_i^h u. Throws for i == k.
VectorField commutator(const Operators& ops, const VectorField& u, int i, int k);

/// Pointwise (e_i . u) e_k - (e_k . u) e_i.
VectorField commutator_expected(const VectorField& u, int i, int k);

/// Central-difference curl with second-order one-sided differences on boundary
/// layers. Independent of the chiral ghost rule.
VectorField curl(const VectorField& u);

/// Second-order derivative along an axis: central inside, one-sided at the ends.
VectorField one_sided_derivative(const VectorField& u, int axis);

/// Interior oracle for the helical Laplacian: Lap u - 2 curl u - 2 u with the
/// compact 3-point Laplacian and central curl. Boundary-layer nodes are zero.
VectorField laplacian_expanded(const VectorField& u);

/// Ghost values across one face (side 0 = low, 1 = high) of `axis`, ordered like
/// the boundary layer nodes in node-major order.
Eigen::Matrix3Xd chiral_ghost_extend(const VectorField& u, int axis, int side);

/// Max over all boundary faces of |(g - u)/h - n x (g + u)/2|, the discrete
/// grad_h u . n evaluated at face midpoints.
double chiral_bc_residual(const VectorField& u);

/// Node indices of the boundary layer on one face.
std::vector<Eigen::Index> face_nodes(const Grid& grid, int axis, int side);

/// Nonzeros of a sparse operator as "row col value" lines.
void write_coordinate_format(std::ostream& os, const Operators::SparseMatrix& m);

}  // namespace hllg
