#pragma once

#include <Eigen/Dense>

#include <vector>

#include "hllg/dynamics.hpp"
#include "hllg/lanczos.hpp"

namespace hllg {

/// I - Lap_h as a plain sparse matrix on flat fields. The quadrature weight is
/// a scalar, so this is also its representation in the weighted inner product.
Eigen::SparseMatrix<double> assemble_operator(const Operators& ops);

/// Smallest eigenpairs of I - Lap_h. Modes are stored as flat columns,
/// orthonormal under the quadrature inner product.
struct EigenBasis {
  Grid grid;
  Eigen::VectorXd lambdas;
  Eigen::MatrixXd modes;
  Eigen::VectorXd residuals;  ///< ||(I - Lap_h) f_i - lambda_i f_i|| (quadrature norm)
  bool iterative = false;

  int size() const { return int(lambdas.size()); }
  VectorField mode(int i) const { return VectorField::from_flat(grid, modes.col(i)); }
};

struct EigenOptions {
  Eigen::Index dense_limit = 4000;
  LanczosOptions lanczos;
};

/// Throws NumericalError (with the achieved residuals) when the iterative
/// solver misses the 1e-8 relative residual target.
EigenBasis eigen_basis(const Operators& ops, int k, const EigenOptions& options = {});

Eigen::VectorXd project(const VectorField& u, const EigenBasis& basis);
VectorField reconstruct(const Eigen::VectorXd& coeffs, const EigenBasis& basis);

/// dg/dt = -eps S g + F(t, g), S = diag(lambda_i - 1), where F is the
/// projection of the non-viscous right-hand side at m = reconstruct(g).
class GalerkinModel {
 public:
  GalerkinModel(const LlgModel& model, const EigenBasis& basis);

  Eigen::VectorXd rhs(const Eigen::VectorXd& g, double t) const;
  const EigenBasis& basis() const { return basis_; }
  const LlgModel& model() const { return model_; }

 private:
  const LlgModel& model_;
  const EigenBasis& basis_;
};

struct GalerkinConfig {
  double t_end = 1.0;
  double rtol = 1e-8;
  double atol = 1e-12;
  double initial_dt = 1e-3;
  double min_dt = 1e-14;
  long max_steps = 10'000'000;
};

struct GalerkinRecord {
  double t = 0.0;
  double l2_sq = 0.0;        ///< |g|^2 = ||m||^2
  double h1h_sq = 0.0;       ///< sum (lambda_i - 1) g_i^2 = ||grad_h m||^2
  double dissipation = 0.0;  ///< 2 eps int_0^t ||grad_h m||^2, integrated with the state
};

struct GalerkinRun {
  std::vector<GalerkinRecord> records;
  Eigen::VectorXd final_coeffs;
  long accepted = 0;
  long rejected = 0;
};

/// Dormand-Prince 5(4) with the dissipation integral carried as an extra
/// state component, so the L2 identity is checked against the integrator's
/// own quadrature. Throws NumericalError on step-size underflow.
GalerkinRun integrate_galerkin(const GalerkinModel& model, const Eigen::VectorXd& g0,
                               const GalerkinConfig& config);

}  // namespace hllg
