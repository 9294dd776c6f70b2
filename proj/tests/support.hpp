#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "hllg/helical_ops.hpp"

namespace hllg::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline Grid cube(int n, double extent = kTwoPi) {
  return Grid(GridSpec{3, {extent, extent, extent}, {n, n, n}});
}

inline Grid square(int n, double extent = kTwoPi) {
  return Grid(GridSpec{2, {extent, extent, 0.0}, {n, n, 1}});
}

/// Independent N(0, 1) components at every node.
inline VectorField gaussian_field(const Grid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  VectorField u(grid);
  for (Eigen::Index p = 0; p < u.size(); ++p) u[p] = Vec3(n(rng), n(rng), n(rng));
  return u;
}

inline double rel(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

/// Max over nodes of |a - b|.
inline double max_diff(const VectorField& a, const VectorField& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

/// A grid with random resolution (4..max_n per axis) and random extents.
inline Grid random_grid(std::mt19937_64& rng, int dim, int max_n = 9) {
  std::uniform_int_distribution<int> n(4, max_n);
  std::uniform_real_distribution<double> l(0.5, 8.0);
  GridSpec s{dim, {l(rng), l(rng), dim == 3 ? l(rng) : 0.0}, {n(rng), n(rng), dim == 3 ? n(rng) : 1}};
  return Grid(s);
}

}  // namespace hllg::test
