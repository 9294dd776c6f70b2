#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>

namespace hllg {

struct LanczosOptions {
  int block_size = 8;           ///< must exceed the largest eigenvalue multiplicity wanted
  double tolerance = 1e-10;     ///< target ||A y - theta y|| / theta
  Eigen::Index max_basis = 0;   ///< 0: min(dim, 40 k + 200)
  int check_every = 4;          ///< Rayleigh-Ritz every this many blocks
  std::uint64_t seed = 20240601;
};

struct LanczosResult {
  Eigen::VectorXd values;     ///< ascending
  Eigen::MatrixXd vectors;    ///< Euclidean-orthonormal columns
  Eigen::VectorXd residuals;  ///< ||A y - theta y||
  Eigen::Index basis_size = 0;
  bool converged = false;
};

/// Smallest k eigenpairs of a sparse symmetric positive definite matrix.
///
/// Block Lanczos on the shift-inverted operator A^{-1} (sparse LDL^T factor),
/// with full reorthogonalisation of every new block against the whole basis
/// (two passes of classical Gram-Schmidt). Ritz pairs come from a
/// Rayleigh-Ritz projection of A itself onto the Krylov basis.
LanczosResult smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, int k,
                                  const LanczosOptions& options = {});

}  // namespace hllg
