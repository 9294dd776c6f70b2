#include "hllg/grid_field.hpp"

#include <numbers>

namespace hllg {

namespace {

Vec3 helix_value(const HelixSpec& s, const Vec3& x) {
  const int a = s.axis, b = (s.axis + 1) % 3, c = (s.axis + 2) % 3;
  const double phase = s.wavenumber * x[a];
  Vec3 v = Vec3::Zero();
  v[b] = std::cos(phase);
  v[c] = std::sin(phase);
  if (s.bump_amplitude != 0.0) {
    const double r = (x - s.bump_center).norm() / s.bump_radius;
    if (r < 1.0) v[a] += s.bump_amplitude * std::exp(1.0 - 1.0 / (1.0 - r * r));
  }
  return v;
}

Vec3 skyrmion_value(const SkyrmionSeedSpec& s, const Vec3& x) {
  const double dx = x[0] - s.center[0];
  const double dy = x[1] - s.center[1];
  const double r = std::hypot(dx, dy);
  const double theta = 2.0 * std::atan2(s.radius, r);
  // Bloch winding: the in-plane part circulates around the core.
  const double phi = std::atan2(dy, dx) + 0.5 * std::numbers::pi;
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

Vec3 stream_value(const StreamFunction2dSpec& s, const Grid& g, const Vec3& x) {
  const double k1 = std::numbers::pi / g.extent(0);
  const double k2 = std::numbers::pi / g.extent(1);
  const double dpsi1 = k1 * std::cos(k1 * x[0]) * std::sin(k2 * x[1]);
  const double dpsi2 = k2 * std::sin(k1 * x[0]) * std::cos(k2 * x[1]);
  return s.amplitude * Vec3(dpsi2, -dpsi1, 0.0);
}

}  // namespace

bool is_unit_kind(const FieldSpec& spec) {
  return std::holds_alternative<UniformSpec>(spec) || std::holds_alternative<HelixSpec>(spec) ||
         std::holds_alternative<SkyrmionSeedSpec>(spec) ||
         std::holds_alternative<RandomUnitSpec>(spec);
}

Vec3 evaluate(const FieldSpec& spec, const Grid& grid, const Vec3& x) {
  struct Visitor {
    const Grid& grid;
    const Vec3& x;
    Vec3 operator()(const UniformSpec& s) const {
      const double n = s.direction.norm();
      if (!(n > 0.0)) throw ConfigError("uniform direction must be nonzero");
      return s.direction / n;
    }
    Vec3 operator()(const HelixSpec& s) const { return helix_value(s, x); }
    Vec3 operator()(const SkyrmionSeedSpec& s) const { return skyrmion_value(s, x); }
    Vec3 operator()(const RandomUnitSpec&) const {
      throw ConfigError("random_unit fields have no point evaluation");
    }
    Vec3 operator()(const StreamFunction2dSpec& s) const { return stream_value(s, grid, x); }
    Vec3 operator()(const RigidRotationSpec& s) const { return s.offset + s.omega.cross(x); }
    Vec3 operator()(const CustomSpec&) const {
      throw ConfigError("custom fields have no point evaluation");
    }
  };
  return std::visit(Visitor{grid, x}, spec);
}

VectorField sample(const FieldSpec& spec, const Grid& grid) {
  VectorField out(grid);
  if (const auto* c = std::get_if<CustomSpec>(&spec)) {
    return VectorField(grid, c->values);
  }
  if (const auto* r = std::get_if<RandomUnitSpec>(&spec)) {
    std::mt19937_64 rng(r->seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index p = 0; p < out.size(); ++p) {
      Vec3 v;
      do {
        v = Vec3(normal(rng), normal(rng), normal(rng));
      } while (v.norm() < 1e-12);
      out[p] = v.normalized();
    }
    return out;
  }
  const bool unit = is_unit_kind(spec);
  for (Eigen::Index p = 0; p < out.size(); ++p) {
    Vec3 v = evaluate(spec, grid, grid.position(p));
    out[p] = unit ? Vec3(v.normalized()) : v;
  }
  return out;
}

}  // namespace hllg
