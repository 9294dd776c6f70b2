#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <variant>

#include "hllg/errors.hpp"

namespace hllg {

template <typename Scalar>
using Vec3T = Eigen::Matrix<Scalar, 3, 1>;
using Vec3 = Vec3T<double>;

/// Box domain [0, L_1] x [0, L_2] (x [0, L_3]) split into N_i cells per axis.
/// Nodes sit at cell centres ((j + 1/2) h_1, (k + 1/2) h_2, (l + 1/2) h_3).
/// In 2D the third axis is collapsed to a single layer of zero thickness.
struct GridSpec {
  int dim = 3;
  std::array<double, 3> extents{1.0, 1.0, 1.0};
  std::array<int, 3> resolution{8, 8, 8};

  bool operator==(const GridSpec&) const = default;
};

class Grid {
 public:
  using Index = Eigen::Index;

  explicit Grid(const GridSpec& spec) : spec_(spec) {
    if (spec.dim != 2 && spec.dim != 3) {
      throw ConfigError("grid.dim must be 2 or 3");
    }
    for (int a = 0; a < spec.dim; ++a) {
      if (!(spec.extents[a] > 0.0) || !std::isfinite(spec.extents[a])) {
        throw ConfigError("grid.extents must be positive");
      }
      if (spec.resolution[a] < 4) {
        throw ConfigError("grid.resolution must be at least 4 cells per axis");
      }
    }
    if (spec.dim == 2) {
      spec_.resolution[2] = 1;
      spec_.extents[2] = 0.0;
    }
    for (int a = 0; a < 3; ++a) {
      n_[a] = spec_.resolution[a];
      h_[a] = a < spec_.dim ? spec_.extents[a] / spec_.resolution[a] : 0.0;
    }
  }

  const GridSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int n(int axis) const { return n_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double extent(int axis) const { return spec_.extents[axis]; }
  bool active(int axis) const { return axis < spec_.dim; }

  Index node_count() const { return Index(n_[0]) * n_[1] * n_[2]; }

  /// Midpoint quadrature weight: the measure of one cell.
  double cell_volume() const {
    double w = 1.0;
    for (int a = 0; a < spec_.dim; ++a) w *= h_[a];
    return w;
  }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < spec_.dim; ++a) v *= spec_.extents[a];
    return v;
  }

  double min_spacing() const {
    double m = h_[0];
    for (int a = 1; a < spec_.dim; ++a) m = std::min(m, h_[a]);
    return m;
  }
  double max_spacing() const {
    double m = h_[0];
    for (int a = 1; a < spec_.dim; ++a) m = std::max(m, h_[a]);
    return m;
  }

  Index index(int i, int j, int k) const { return i + Index(n_[0]) * (j + Index(n_[1]) * k); }

  std::array<int, 3> coords(Index p) const {
    const int i = int(p % n_[0]);
    const Index r = p / n_[0];
    return {i, int(r % n_[1]), int(r / n_[1])};
  }

  /// Stride of a unit step along `axis` in the node-major index.
  Index stride(int axis) const {
    return axis == 0 ? 1 : axis == 1 ? Index(n_[0]) : Index(n_[0]) * n_[1];
  }

  Vec3 position(Index p) const {
    const auto c = coords(p);
    Vec3 x = Vec3::Zero();
    for (int a = 0; a < spec_.dim; ++a) x[a] = (c[a] + 0.5) * h_[a];
    return x;
  }

  /// Distance (in nodes) from p to the nearest boundary layer of the active axes.
  int boundary_distance(Index p) const {
    const auto c = coords(p);
    int d = n_[0];
    for (int a = 0; a < spec_.dim; ++a) d = std::min({d, c[a], n_[a] - 1 - c[a]});
    return d;
  }

  bool operator==(const Grid& o) const { return spec_ == o.spec_; }

 private:
  GridSpec spec_;
  std::array<int, 3> n_{};
  std::array<double, 3> h_{};
};

inline Grid make_grid(const GridSpec& spec) { return Grid(spec); }

/// Grid-sampled map from the domain into R^3. Values are stored as a 3 x N
/// column-major matrix, so the raw buffer is the node-major triple layout used
/// by the sparse operators and the snapshot format.
template <typename Scalar>
class Field {
 public:
  using Values = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;
  using Flat = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Field(Grid grid) : grid_(std::move(grid)), values_(Values::Zero(3, grid_.node_count())) {}

  Field(Grid grid, Values values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.cols() != grid_.node_count()) {
      throw ConfigError("field value count does not match the grid node count");
    }
  }

  static Field from_flat(Grid grid, const Flat& flat) {
    if (flat.size() != 3 * grid.node_count()) {
      throw ConfigError("flat field length does not match 3 x node count");
    }
    Values v = Eigen::Map<const Values>(flat.data(), 3, grid.node_count());
    return Field(std::move(grid), std::move(v));
  }

  const Grid& grid() const { return grid_; }
  Eigen::Index size() const { return values_.cols(); }

  const Values& values() const { return values_; }
  Values& values() { return values_; }

  auto operator[](Eigen::Index p) { return values_.col(p); }
  auto operator[](Eigen::Index p) const { return values_.col(p); }

  Eigen::Map<const Flat> flat() const { return {values_.data(), values_.size()}; }
  Eigen::Map<Flat> flat() { return {values_.data(), values_.size()}; }

  bool all_finite() const { return values_.allFinite(); }

  Field& operator+=(const Field& o) {
    check_same_grid(o);
    values_ += o.values_;
    return *this;
  }
  Field& operator-=(const Field& o) {
    check_same_grid(o);
    values_ -= o.values_;
    return *this;
  }
  Field& operator*=(Scalar s) {
    values_ *= s;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Scalar s, Field a) { return a *= s; }
  friend Field operator*(Field a, Scalar s) { return a *= s; }
  friend Field operator-(Field a) {
    a.values_ = -a.values_;
    return a;
  }

  void check_same_grid(const Field& o) const {
    if (!(grid_ == o.grid_)) throw ConfigError("fields live on different grids");
  }

 private:
  Grid grid_;
  Values values_;
};

using VectorField = Field<double>;

/// Quadrature-weighted L2 pairing: w * sum_nodes u . v.
template <typename Scalar>
Scalar inner_product(const Field<Scalar>& u, const Field<Scalar>& v) {
  u.check_same_grid(v);
  return Scalar(u.grid().cell_volume()) * u.values().cwiseProduct(v.values()).sum();
}

struct FieldNorms {
  double l2 = 0.0;
  double max_pointwise = 0.0;
};

template <typename Scalar>
FieldNorms norms(const Field<Scalar>& u) {
  FieldNorms n;
  n.l2 = std::sqrt(double(inner_product(u, u)));
  n.max_pointwise = u.size() ? double(u.values().colwise().norm().maxCoeff()) : 0.0;
  return n;
}

/// Nodewise cross product a x b.
template <typename Scalar>
Field<Scalar> cross(const Field<Scalar>& a, const Field<Scalar>& b) {
  a.check_same_grid(b);
  Field<Scalar> out(a.grid());
  for (Eigen::Index p = 0; p < a.size(); ++p) {
    out[p] = Vec3T<Scalar>(a[p]).cross(Vec3T<Scalar>(b[p]));
  }
  return out;
}

/// Nodewise dot product, returned as a plain array over nodes.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dot(const Field<Scalar>& a, const Field<Scalar>& b) {
  a.check_same_grid(b);
  return a.values().cwiseProduct(b.values()).colwise().sum().transpose();
}

// ---------------------------------------------------------------------------
// Analytic field descriptions.

struct UniformSpec {
  Vec3 direction{0, 0, 1};
  bool operator==(const UniformSpec&) const = default;
};
/// cos(k x_a) e_b + sin(k x_a) e_c with (a, b, c) cyclic; axis is 0-based.
/// An optional smooth bump A w(|x - c| / R) e_a, with w the compactly supported
/// C-infinity bump exp(1 - 1 / (1 - s^2)), is added before normalisation; away
/// from the bump the field is the exact helix.
struct HelixSpec {
  int axis = 2;
  double wavenumber = 1.0;
  double bump_amplitude = 0.0;
  Vec3 bump_center = Vec3::Zero();
  double bump_radius = 1.0;
  bool operator==(const HelixSpec&) const = default;
};
/// Bloch-type skyrmion in the x1-x2 plane: polar angle theta(r) = 2 atan(R / r),
/// so the core (r = 0) points along -e3 and the far field along +e3.
struct SkyrmionSeedSpec {
  Vec3 center{0.5, 0.5, 0.5};
  double radius = 0.2;
  bool operator==(const SkyrmionSeedSpec&) const = default;
};
struct RandomUnitSpec {
  std::uint64_t seed = 0;
  bool operator==(const RandomUnitSpec&) const = default;
};
/// v = A (d psi / dx2, -d psi / dx1, 0), psi = sin(pi x1 / L1) sin(pi x2 / L2).
struct StreamFunction2dSpec {
  double amplitude = 1.0;
  bool operator==(const StreamFunction2dSpec&) const = default;
};
/// v = a + omega x x.
struct RigidRotationSpec {
  Vec3 offset = Vec3::Zero();
  Vec3 omega{0, 0, 1};
  bool operator==(const RigidRotationSpec&) const = default;
};
struct CustomSpec {
  Eigen::Matrix3Xd values;
  bool operator==(const CustomSpec& o) const {
    return values.cols() == o.values.cols() && values == o.values;
  }
};

using FieldSpec = std::variant<UniformSpec, HelixSpec, SkyrmionSeedSpec, RandomUnitSpec,
                               StreamFunction2dSpec, RigidRotationSpec, CustomSpec>;

/// Point evaluation of the deterministic kinds (everything except random and custom).
Vec3 evaluate(const FieldSpec& spec, const Grid& grid, const Vec3& x);

/// Populates a field node-wise. Unit-sphere kinds are normalised exactly.
VectorField sample(const FieldSpec& spec, const Grid& grid);

/// True for the kinds whose samples take values on the unit sphere.
bool is_unit_kind(const FieldSpec& spec);

}  // namespace hllg
