#pragma once

#include <Eigen/IterativeLinearSolvers>

#include <memory>
#include <optional>

#include "hllg/energy.hpp"

namespace hllg {

/// Which regularised evolution law the right-hand side implements.
enum class SystemKind { type_one, type_two, schrodinger };

/// Advecting velocity field v (time independent).
struct TransportSpec {
  enum class Kind { none, rigid, stream2d, custom };
  Kind kind = Kind::none;
  Vec3 offset = Vec3::Zero();         ///< rigid: a
  Vec3 omega = Vec3::Zero();          ///< rigid: angular velocity
  double amplitude = 0.0;             ///< stream2d
  Eigen::Matrix3Xd custom_values;     ///< custom: node samples
  char declared_condition = '-';      ///< 'a', 'b', 'c' or '-' for none

  bool operator==(const TransportSpec& o) const {
    return kind == o.kind && offset == o.offset && omega == o.omega && amplitude == o.amplitude &&
           declared_condition == o.declared_condition &&
           custom_values.cols() == o.custom_values.cols() &&
           (custom_values.cols() == 0 || custom_values == o.custom_values);
  }
};

VectorField sample_transport(const TransportSpec& spec, const Grid& grid);

struct TransportReport {
  char condition = '-';
  double antisymmetry_defect = 0.0;  ///< max_x |grad v + grad v^T|_F
  double divergence_defect = 0.0;    ///< max_x |div v|
  double tangency_defect = 0.0;      ///< max over face midpoints |v . n|
  double grad_max = 0.0;             ///< max_x |grad v|_F
  double v_max = 0.0;
  double tolerance = 0.0;            ///< machine-level tolerance 1e-8 * max(|v|, 1)
  double truncation_allowance = 0.0; ///< h^2 * max|d^3 v| for the differenced clauses
  bool antisymmetry_ok = false;
  bool divergence_ok = false;
  bool tangency_ok = false;
  bool pass = false;                 ///< all clauses of the requested condition
};

/// Checks the structural clauses of conditions (a)/(b) (antisymmetric gradient
/// plus tangency) or (c) (divergence free plus tangency). Gradients use central
/// differences inside and second-order one-sided differences on boundary layers.
TransportReport check_transport_condition(const TransportSpec& spec, const Grid& grid, char which);

/// Nodewise m / max(|m|, 1).
VectorField j_map(const VectorField& m);

/// Right-hand sides of the three regularised LLG systems with helical
/// derivatives, sharing one set of assembled operators.
class LlgModel {
 public:
  LlgModel(std::shared_ptr<const Operators> ops, MaterialParams params, SystemKind kind,
           LowerOrderOperator pi, AppliedFieldSpec applied, std::optional<VectorField> velocity);

  const Operators& ops() const { return *ops_; }
  std::shared_ptr<const Operators> shared_ops() const { return ops_; }
  const Grid& grid() const { return ops_->grid(); }
  const MaterialParams& params() const { return params_; }
  SystemKind kind() const { return kind_; }
  const LowerOrderOperator& pi() const { return pi_; }
  const AppliedFieldSpec& applied() const { return applied_; }
  const std::optional<VectorField>& velocity() const { return velocity_; }

  VectorField applied_field(double t) const;

  /// H(m) = Lap_h m + pi(m) + f(t).
  VectorField effective_field(const VectorField& m, double t) const;

  /// v . grad_h m + v x m (without the gamma factor); zero field when v is absent.
  VectorField transport_term(const VectorField& m) const;

  /// Full right-hand side dm/dt.
  VectorField rhs(const VectorField& m, double t) const;

  /// rhs(m, t) - epsilon Lap_h m: the part an IMEX scheme treats explicitly.
  VectorField explicit_rhs(const VectorField& m, double t) const;

 private:
  std::shared_ptr<const Operators> ops_;
  MaterialParams params_;
  SystemKind kind_;
  LowerOrderOperator pi_;
  AppliedFieldSpec applied_;
  std::optional<VectorField> velocity_;
};

enum class Scheme { explicit_rk4, imex_euler };

struct StepperConfig {
  Scheme scheme = Scheme::explicit_rk4;
  double dt = 1e-3;
  double t_end = 1.0;
  double cfl_safety = 0.9;
  int output_every = 1;
  bool allow_unstable = false;

  bool operator==(const StepperConfig&) const = default;
};

/// Upper bound of the spectral radius of -Lap_h: sum_i (1/h_i + 1)^2, using
/// ||D_i|| <= 1/h_i and ||M_i|| = 1 (inactive axes contribute 1).
double laplacian_spectral_bound(const Grid& grid);

/// Linear-stability step bound for a scheme; `v_max` is max |v| over nodes.
double stable_dt(const Grid& grid, const MaterialParams& params, Scheme scheme, double v_max);

/// One classical RK4 step of dm/dt = rhs(m, t).
VectorField rk4_step(const LlgModel& model, const VectorField& m, double t, double dt);

/// (I - dt eps Lap_h) m' = m + dt (rhs - eps Lap_h m), solved by conjugate
/// gradients to 1e-10 relative residual; the matrix is assembled once per dt.
class ImexEulerStepper {
 public:
  ImexEulerStepper(const LlgModel& model, double dt);
  VectorField step(const VectorField& m, double t) const;
  int last_iterations() const { return last_iterations_; }

 private:
  using SparseCol = Eigen::SparseMatrix<double>;
  const LlgModel& model_;
  double dt_;
  SparseCol system_;
  Eigen::ConjugateGradient<SparseCol, Eigen::Lower | Eigen::Upper> cg_;
  mutable int last_iterations_ = 0;
};

}  // namespace hllg
