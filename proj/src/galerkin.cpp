#include "hllg/galerkin.hpp"

#include <cmath>
#include <sstream>

namespace hllg {

Eigen::SparseMatrix<double> assemble_operator(const Operators& ops) {
  const Eigen::Index dof = 3 * ops.grid().node_count();
  Eigen::SparseMatrix<double> eye(dof, dof);
  eye.setIdentity();
  Eigen::SparseMatrix<double> a = eye - Eigen::SparseMatrix<double>(ops.laplacian());
  a.makeCompressed();
  return a;
}

EigenBasis eigen_basis(const Operators& ops, int k, const EigenOptions& options) {
  const Grid& grid = ops.grid();
  const Eigen::SparseMatrix<double> a = assemble_operator(ops);
  const Eigen::Index dim = a.rows();
  if (k <= 0 || k > dim) throw ConfigError("eigen basis size k must be in [1, 3 * node count]");

  const double w = grid.cell_volume();
  EigenBasis basis{grid, {}, {}, {}, false};
  Eigen::MatrixXd vectors;
  if (dim <= options.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(a)};
    if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolver failed");
    basis.lambdas = solver.eigenvalues().head(k);
    vectors = solver.eigenvectors().leftCols(k);
  } else {
    const LanczosResult r = smallest_eigenpairs(a, k, options.lanczos);
    basis.iterative = true;
    basis.lambdas = r.values;
    vectors = r.vectors;
  }
  basis.modes = vectors / std::sqrt(w);

  basis.residuals.resize(k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXd r = a * basis.modes.col(i) - basis.lambdas[i] * basis.modes.col(i);
    basis.residuals[i] = std::sqrt(w) * r.norm();
  }
  if (basis.iterative) {
    bool ok = true;
    for (int i = 0; i < k; ++i) ok = ok && basis.residuals[i] <= 1e-8 * basis.lambdas[i];
    if (!ok) {
      std::ostringstream msg;
      msg << "Lanczos did not converge; achieved residuals:";
      for (int i = 0; i < k; ++i) msg << ' ' << basis.residuals[i];
      throw NumericalError(msg.str());
    }
  }
  return basis;
}

Eigen::VectorXd project(const VectorField& u, const EigenBasis& basis) {
  if (!(u.grid() == basis.grid)) throw ConfigError("field and basis live on different grids");
  return basis.grid.cell_volume() * (basis.modes.transpose() * u.flat());
}

VectorField reconstruct(const Eigen::VectorXd& coeffs, const EigenBasis& basis) {
  if (coeffs.size() != basis.size()) throw ConfigError("coefficient count does not match basis");
  const Eigen::VectorXd flat = basis.modes * coeffs;
  return VectorField::from_flat(basis.grid, flat);
}

GalerkinModel::GalerkinModel(const LlgModel& model, const EigenBasis& basis)
    : model_(model), basis_(basis) {
  if (!(model.grid() == basis.grid)) throw ConfigError("model and basis live on different grids");
}

Eigen::VectorXd GalerkinModel::rhs(const Eigen::VectorXd& g, double t) const {
  const VectorField m = reconstruct(g, basis_);
  Eigen::VectorXd out = project(model_.explicit_rhs(m, t), basis_);
  const double eps = model_.params().epsilon;
  if (eps != 0.0) {
    out.array() -= eps * (basis_.lambdas.array() - 1.0) * g.array();
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                 e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;

}  // namespace

GalerkinRun integrate_galerkin(const GalerkinModel& model, const Eigen::VectorXd& g0,
                               const GalerkinConfig& config) {
  const Eigen::ArrayXd s = model.basis().lambdas.array() - 1.0;
  const double eps = model.model().params().epsilon;
  const Eigen::Index k = g0.size();

  // State y = (g, q) with q' = 2 eps sum (lambda_i - 1) g_i^2.
  auto f = [&](const Eigen::VectorXd& y, double t) {
    Eigen::VectorXd dy(k + 1);
    dy.head(k) = model.rhs(y.head(k), t);
    dy[k] = 2.0 * eps * (s * y.head(k).array().square()).sum();
    return dy;
  };
  auto record = [&](const Eigen::VectorXd& y, double t) {
    return GalerkinRecord{t, y.head(k).squaredNorm(), (s * y.head(k).array().square()).sum(),
                          y[k]};
  };

  GalerkinRun run;
  Eigen::VectorXd y(k + 1);
  y.head(k) = g0;
  y[k] = 0.0;
  double t = 0.0;
  double dt = std::min(config.initial_dt, config.t_end);
  run.records.push_back(record(y, t));
  Eigen::VectorXd k1 = f(y, t);

  while (t < config.t_end) {
    if (run.accepted + run.rejected >= config.max_steps) {
      throw NumericalError("adaptive integrator exceeded the step budget");
    }
    const bool last = t + dt >= config.t_end;
    const double h = last ? config.t_end - t : dt;
    const Eigen::VectorXd k2 = f(y + h * (a21 * k1), t + c2 * h);
    const Eigen::VectorXd k3 = f(y + h * (a31 * k1 + a32 * k2), t + c3 * h);
    const Eigen::VectorXd k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * h);
    const Eigen::VectorXd k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * h);
    const Eigen::VectorXd k6 =
        f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + h);
    const Eigen::VectorXd y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Eigen::VectorXd k7 = f(y_new, t + h);
    const Eigen::VectorXd err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    const Eigen::ArrayXd scale =
        config.atol + config.rtol * y.array().abs().max(y_new.array().abs());
    const double norm = std::sqrt((err.array() / scale).square().mean());
    if (!std::isfinite(norm)) throw NumericalError("non-finite value in Galerkin integration");

    if (norm <= 1.0) {
      t = last ? config.t_end : t + h;
      y = y_new;
      k1 = k7;
      ++run.accepted;
      run.records.push_back(record(y, t));
    } else {
      ++run.rejected;
    }
    const double factor = norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(norm, -0.2), 0.2, 5.0);
    dt = h * (norm <= 1.0 ? factor : std::min(factor, 1.0));
    if (dt < config.min_dt && t < config.t_end) {
      throw NumericalError("Galerkin step size underflow at t = " + std::to_string(t));
    }
  }
  run.final_coeffs = y.head(k);
  return run;
}

}  // namespace hllg
