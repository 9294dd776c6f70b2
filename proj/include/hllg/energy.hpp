#pragma once

#include <functional>

#include "hllg/helical_ops.hpp"

namespace hllg {

struct MaterialParams {
  double alpha = 1.0;       ///< gyroscopic coefficient
  double beta = 0.0;        ///< Gilbert damping
  double gamma = 0.0;       ///< transport coupling
  double epsilon = 0.0;     ///< regularising viscosity
  double anisotropy = 0.0;  ///< uniaxial strength a
  double zeeman = 0.0;      ///< Zeeman strength h
  double c_pi = 0.0;        ///< declared bound on ||pi||

  bool operator==(const MaterialParams&) const = default;
};

/// Bounded self-adjoint lower-order operator pi. The built-in kind is the
/// uniaxial operator pi(m) = -a (0, m2, m3) with easy axis e1, for which
/// -1/2 <m, pi(m)> = a/2 int (m2^2 + m3^2).
class LowerOrderOperator {
 public:
  using Fn = std::function<VectorField(const VectorField&)>;

  static LowerOrderOperator uniaxial(double a);
  /// A user-supplied linear operator with its declared L2 bound.
  static LowerOrderOperator custom(Fn fn, double bound);

  VectorField operator()(const VectorField& m) const { return fn_(m); }
  double bound() const { return bound_; }

 private:
  LowerOrderOperator(Fn fn, double bound) : fn_(std::move(fn)), bound_(bound) {}
  Fn fn_;
  double bound_ = 0.0;
};

VectorField pi_op(const VectorField& m, double anisotropy);

/// Prescribed external field f(t), independent of m.
struct AppliedFieldSpec {
  enum class Kind { none, constant, zeeman, ramp };
  Kind kind = Kind::none;
  Vec3 value = Vec3::Zero();  ///< constant: f = value; ramp: f(t) = t * value
  double strength = 0.0;      ///< zeeman: f = strength * e3

  bool time_dependent() const { return kind == Kind::ramp; }
  bool operator==(const AppliedFieldSpec&) const = default;
};

VectorField applied_field(const AppliedFieldSpec& spec, const Grid& grid, double t);

struct EnergyBreakdown {
  double exchange = 0.0;
  double dmi = 0.0;
  double anisotropy = 0.0;
  double zeeman = 0.0;
  double applied = 0.0;
  double lower_order = 0.0;
  double classical_total = 0.0;
  double helical_total = 0.0;
};

/// 1/2 sum_i ||D_i m||^2 with the chiral-ghost central differences.
double exchange_energy(const Operators& ops, const VectorField& m);
/// <m, curl m> with the same discrete partials as the exchange term.
double dmi_energy(const Operators& ops, const VectorField& m);
/// -1/2 <m, pi(m)>.
double lower_order_energy(const VectorField& m, const LowerOrderOperator& pi);
/// h int (1 - m3): zero on the e3 ground state.
double zeeman_energy(const VectorField& m, double strength);
/// -<m, f>.
double applied_energy(const VectorField& m, const VectorField& f);

/// 1/2 ||grad_h m||^2 - 1/2 <m, pi(m)> - <m, f>.
double helical_energy(const Operators& ops, const VectorField& m, const LowerOrderOperator& pi,
                      const VectorField& f);

EnergyBreakdown energy_breakdown(const Operators& ops, const VectorField& m,
                                 const LowerOrderOperator& pi, const VectorField& f,
                                 double zeeman_strength);

}  // namespace hllg
