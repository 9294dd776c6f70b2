#include "hllg/energy.hpp"

namespace hllg {

VectorField pi_op(const VectorField& m, double anisotropy) {
  VectorField out(m.grid());
  out.values().row(1) = -anisotropy * m.values().row(1);
  out.values().row(2) = -anisotropy * m.values().row(2);
  return out;
}

LowerOrderOperator LowerOrderOperator::uniaxial(double a) {
  if (a < 0.0) throw ConfigError("anisotropy strength must be non-negative");
  return LowerOrderOperator([a](const VectorField& m) { return pi_op(m, a); }, a);
}

LowerOrderOperator LowerOrderOperator::custom(Fn fn, double bound) {
  if (!fn) throw ConfigError("custom lower-order operator is empty");
  return LowerOrderOperator(std::move(fn), bound);
}

VectorField applied_field(const AppliedFieldSpec& spec, const Grid& grid, double t) {
  VectorField f(grid);
  switch (spec.kind) {
    case AppliedFieldSpec::Kind::none:
      break;
    case AppliedFieldSpec::Kind::constant:
      f.values().colwise() = spec.value;
      break;
    case AppliedFieldSpec::Kind::zeeman:
      f.values().row(2).setConstant(spec.strength);
      break;
    case AppliedFieldSpec::Kind::ramp:
      f.values().colwise() = Vec3(t * spec.value);
      break;
  }
  return f;
}

double exchange_energy(const Operators& ops, const VectorField& m) {
  double e = 0.0;
  for (int i = 0; i < ops.grid().dim(); ++i) {
    const VectorField d = ops.derivative(m, i);
    e += inner_product(d, d);
  }
  return 0.5 * e;
}

double dmi_energy(const Operators& ops, const VectorField& m) {
  return inner_product(m, ops.curl(m));
}

double lower_order_energy(const VectorField& m, const LowerOrderOperator& pi) {
  return -0.5 * inner_product(m, pi(m));
}

double zeeman_energy(const VectorField& m, double strength) {
  if (strength == 0.0) return 0.0;
  const double w = m.grid().cell_volume();
  return strength * w * (1.0 - m.values().row(2).array()).sum();
}

double applied_energy(const VectorField& m, const VectorField& f) { return -inner_product(m, f); }

double helical_energy(const Operators& ops, const VectorField& m, const LowerOrderOperator& pi,
                      const VectorField& f) {
  return 0.5 * ops.gradient_norm_sq(m) + lower_order_energy(m, pi) + applied_energy(m, f);
}

EnergyBreakdown energy_breakdown(const Operators& ops, const VectorField& m,
                                 const LowerOrderOperator& pi, const VectorField& f,
                                 double zeeman_strength) {
  EnergyBreakdown e;
  e.exchange = exchange_energy(ops, m);
  e.dmi = dmi_energy(ops, m);
  e.lower_order = lower_order_energy(m, pi);
  e.anisotropy = e.lower_order;
  e.zeeman = zeeman_energy(m, zeeman_strength);
  e.applied = applied_energy(m, f);
  e.classical_total = e.exchange + e.dmi + e.lower_order + e.applied;
  e.helical_total = helical_energy(ops, m, pi, f);
  return e;
}

}  // namespace hllg
