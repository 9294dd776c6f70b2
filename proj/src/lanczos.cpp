#include "hllg/lanczos.hpp"

#include <Eigen/SparseCholesky>

#include <random>

#include "hllg/errors.hpp"

namespace hllg {

namespace {

/// Orthonormalises the columns of `w` against `basis` (first `used` columns)
/// and among themselves. Columns that collapse are replaced by fresh random
/// directions so the block keeps its width.
Eigen::MatrixXd orthonormal_block(const Eigen::MatrixXd& basis, Eigen::Index used,
                                  Eigen::MatrixXd w, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto v = basis.leftCols(used);
  for (int pass = 0; pass < 2; ++pass) {
    if (used > 0) w -= v * (v.transpose() * w);
  }
  for (Eigen::Index c = 0; c < w.cols(); ++c) {
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double before = w.col(c).norm();
      for (int pass = 0; pass < 2; ++pass) {
        if (used > 0) w.col(c) -= v * (v.transpose() * w.col(c));
        for (Eigen::Index j = 0; j < c; ++j) w.col(c) -= w.col(j).dot(w.col(c)) * w.col(j);
      }
      const double after = w.col(c).norm();
      if (after > 1e-10 * std::max(before, 1e-300) && after > 1e-300) {
        w.col(c) /= after;
        break;
      }
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = normal(rng);
    }
  }
  return w;
}

}  // namespace

LanczosResult smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int k,
                                  const LanczosOptions& options) {
  const Eigen::Index n = a.rows();
  if (k <= 0 || k > n) throw ConfigError("requested eigenpair count out of range");
  const int b = std::max(1, options.block_size);
  const Eigen::Index max_basis =
      std::min<Eigen::Index>(n, options.max_basis > 0 ? options.max_basis : 40 * k + 200);

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(a);
  if (factor.info() != Eigen::Success) {
    throw NumericalError("sparse LDL^T factorisation failed (matrix not SPD?)");
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd basis(n, max_basis);
  Eigen::Index used = 0;

  Eigen::MatrixXd block(n, std::min<Eigen::Index>(b, max_basis));
  for (Eigen::Index i = 0; i < block.size(); ++i) block.data()[i] = normal(rng);
  block = orthonormal_block(basis, 0, block, rng);

  LanczosResult result;
  int blocks = 0;
  while (true) {
    const Eigen::Index width = std::min<Eigen::Index>(block.cols(), max_basis - used);
    basis.middleCols(used, width) = block.leftCols(width);
    const Eigen::Index start = used;
    used += width;
    ++blocks;

    const bool full = used >= max_basis;
    if (full || blocks % options.check_every == 0 || used >= k + 2 * b) {
      const auto v = basis.leftCols(used);
      Eigen::MatrixXd av = a * v;
      Eigen::MatrixXd proj = v.transpose() * av;
      proj = 0.5 * (proj + proj.transpose()).eval();
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(proj);
      if (used >= k) {
        Eigen::MatrixXd y = v * ritz.eigenvectors().leftCols(k);
        Eigen::MatrixXd ay = av * ritz.eigenvectors().leftCols(k);
        Eigen::VectorXd theta = ritz.eigenvalues().head(k);
        Eigen::VectorXd res(k);
        bool ok = true;
        for (int i = 0; i < k; ++i) {
          res[i] = (ay.col(i) - theta[i] * y.col(i)).norm();
          ok = ok && res[i] <= options.tolerance * std::abs(theta[i]);
        }
        result.values = theta;
        result.vectors = y;
        result.residuals = res;
        result.basis_size = used;
        result.converged = ok;
        if (ok || full) return result;
      }
      if (full) return result;
    }

    Eigen::MatrixXd w(n, width);
    for (Eigen::Index c = 0; c < width; ++c) {
      w.col(c) = factor.solve(Eigen::VectorXd(basis.col(start + c)));
    }
    block = orthonormal_block(basis, used, std::move(w), rng);
  }
}

}  // namespace hllg
