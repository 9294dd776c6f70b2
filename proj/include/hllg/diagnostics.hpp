#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hllg/dynamics.hpp"

namespace hllg {

struct Snapshot {
  double t = 0.0;
  VectorField m;
};
using Trajectory = std::vector<Snapshot>;

struct DiagnosticRecord {
  double t = 0.0;
  double l2_sq = 0.0;
  double h1h_sq = 0.0;     ///< ||grad_h m||^2
  double max_abs_m = 0.0;
  double phi = 0.0;
  EnergyBreakdown energy;
  double dt_m_l2_sq = 0.0; ///< ||dm/dt||^2 of the semidiscrete right-hand side
};

struct DiagnosticSeries {
  std::vector<DiagnosticRecord> records;

  bool empty() const { return records.empty(); }
  /// Throws NumericalError unless time stamps increase and every entry is finite.
  void validate() const;
  std::vector<double> column(double DiagnosticRecord::*field) const;
};

struct MaxPrinciple {
  double max_abs = 0.0;
  double phi = 0.0;  ///< 1/2 int ((|m| - 1)_+)^2
};

MaxPrinciple max_principle_monitor(const VectorField& m);

DiagnosticRecord record_diagnostics(const LlgModel& model, const VectorField& m, double t);

/// Composite trapezoid rule on (possibly non-uniform) samples.
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

/// ||m(T)||^2 + 2 eps int ||grad_h m||^2 dt - ||m_0||^2. Throws on an empty series.
double l2_identity_residual(const DiagnosticSeries& series, double eps);

struct EnergyInequalityReport {
  double e_initial = 0.0;
  double e_final = 0.0;
  double dissipation = 0.0;  ///< beta / (alpha^2 + beta^2) int ||dm/dt||^2
  double residual = 0.0;     ///< E(T) + dissipation - E(0)
  double tolerance = 0.0;
  bool conservative = false; ///< beta = 0: two-sided gate |residual| <= tol
  bool pass = false;
};

/// Default positive tolerance max(1e-6 |E0|, c (dt^order + h^2) T |E0|).
double energy_tolerance(double e0, double dt, int order, double h, double t_end, double c = 1e-2);

/// Gate for gamma = 0 and time-independent f. Throws ConfigError otherwise.
EnergyInequalityReport energy_inequality_residual(const DiagnosticSeries& series,
                                                  const MaterialParams& params,
                                                  const AppliedFieldSpec& applied,
                                                  double tolerance);

/// Informational general-gamma form with delta = beta / (2 gamma):
///   E(T) + (beta - gamma delta) / ((a^2 + b^2)(1 + gamma delta)) int ||dm/dt||^2
///   - E(0) - (gamma^2 + gamma / delta)(1 + beta - gamma delta) int ||v.grad_h m + v x m||^2.
/// `transport_sq` are the per-record values of ||v.grad_h m + v x m||^2.
double general_energy_inequality(const DiagnosticSeries& series, const MaterialParams& params,
                                 const std::vector<double>& transport_sq);

struct H1BoundReport {
  double sup_h1 = 0.0;   ///< sup_t ||m||^2 + ||grad_h m||^2
  double envelope = 0.0;
  bool finite = true;
  bool pass = false;
};

/// c exp(c int (1 + |v|_inf^2) dt) (||m_0||^2_{H1_h} + ||f||^2_{L2L2} + 1), c = 10.
H1BoundReport h1_bound_monitor(const DiagnosticSeries& series, double v_max, double f_l2l2_sq,
                               double c = 10.0);

/// int_0^T ||f(t)||^2 dt by the trapezoid rule on the series time stamps.
double applied_l2l2_sq(const LlgModel& model, const DiagnosticSeries& series);

/// Separable polynomial x trigonometric test function with a cosine time factor:
///   phi_c(x, t) = a_c prod_d (1 + p_cd s_d + q_cd s_d^2) cos(k_cd pi s_d + theta_cd)
///                 * cos(omega t + theta_t),       s_d = x_d / L_d.
struct TestFunction {
  std::array<double, 3> amplitude{};
  std::array<std::array<double, 3>, 3> p{}, q{}, k{}, theta{};
  double omega = 0.0;
  double time_phase = 0.0;
  int dim = 3;

  Vec3 value(const Vec3& x, const Grid& grid) const;
  /// Column j holds d phi / d x_j (zero for inactive axes).
  Eigen::Matrix3d gradient(const Vec3& x, const Grid& grid) const;
  double time_factor(double t) const;
  double time_factor_derivative(double t) const;
};

TestFunction random_test_function(std::mt19937_64& rng, int dim);

struct WeakResidualReport {
  std::string family;
  std::vector<double> residuals;  ///< |R(phi)| / ||phi||_{H1}
  double max_residual = 0.0;
  double h = 0.0;
  double dt = 0.0;                ///< snapshot spacing
  int n_test = 0;
  std::uint64_t seed = 0;
};

/// Residual of the type-I weak form
///   int alpha <D_t m, phi> - beta <m x D_t m, phi>
///     - (alpha^2 + beta^2) [<m x grad_h m, grad_h phi> - <m x (pi + f), phi>] dt,
/// with dm/dt from centred differences of the snapshots. Needs >= 3 snapshots.
WeakResidualReport weak_residual_type1(const Trajectory& trajectory, const LlgModel& model,
                                       int n_test, std::uint64_t seed);

/// Residual of the type-II weak form (m tested against phi with the time
/// derivative moved onto phi). Needs >= 2 snapshots.
WeakResidualReport weak_residual_type2(const Trajectory& trajectory, const LlgModel& model,
                                       int n_test, std::uint64_t seed);

struct NormEquivalenceReport {
  double h1h_sq = 0.0;    ///< ||u||^2 + ||grad_h u||^2
  double h1_sq = 0.0;     ///< ||u||^2 + sum ||D_i u||^2
  double ratio_h1 = 0.0;  ///< h1h_sq / h1_sq
  double h2h_sq = 0.0;    ///< adds sum_ij ||G_j G_i u||^2
  double h2_sq = 0.0;     ///< adds sum_ij ||D_j D_i u||^2
  double ratio_h2 = 0.0;
  bool pass = false;      ///< ratio_h1 in [1/5, 5] and ratio_h2 finite
};

NormEquivalenceReport norm_equivalence_check(const Operators& ops, const VectorField& u);

/// ||u||_{H2_h} / (||Lap_h u|| + ||u||).
double elliptic_ratio(const Operators& ops, const VectorField& u);

/// A random smooth field: a few low Fourier modes per component, seeded.
VectorField random_smooth_field(const Grid& grid, std::mt19937_64& rng, int modes = 3);

}  // namespace hllg
