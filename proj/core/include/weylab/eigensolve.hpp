#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <vector>

#include "weylab/hamiltonians.hpp"

namespace weylab {

struct DenseEigen {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXd vectors;
};

struct DenseEigenC {
  Eigen::VectorXd values;  // ascending
  Eigen::MatrixXcd vectors;
};

/// Full symmetric eigendecomposition (LAPACK divide and conquer).
DenseEigen dense_eigh(const Eigen::MatrixXd& a, bool vectors);
/// Full Hermitian eigendecomposition; only the lower triangle is read.
DenseEigenC dense_eigh(const Eigen::MatrixXcd& a, bool vectors);

struct SpectralResult {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd eigenvectors;  // empty when not requested
  std::vector<double> residuals;
  double h_norm = 0.0;
  std::string solver;
};

struct EigensolveOptions {
  int dense_limit = 4096;
  double residual_tol = 1e-8;
  bool vectors = true;
  int max_krylov = 0;  // 0: chosen from k and the dimension
  unsigned seed = 12345;
};

/// Lowest k eigenpairs. Dense LAPACK (dsyevr) up to dense_limit, otherwise
/// shift-invert Lanczos with full reorthogonalization. Every reported pair
/// satisfies |Hv - lambda v| <= residual_tol * |H|_2; SolverError otherwise.
SpectralResult eigensolve(const HamiltonianMatrix& H, int k, const EigensolveOptions& opt = {});
SpectralResult eigensolve(const Eigen::SparseMatrix<double>& H, int k, const EigensolveOptions& opt = {});
SpectralResult eigensolve(const Eigen::MatrixXd& H, int k, const EigensolveOptions& opt = {});

/// |H|_2 of a symmetric matrix from Lanczos extreme Ritz values.
double symmetric_norm_estimate(const Eigen::SparseMatrix<double>& H, int steps = 60, unsigned seed = 7);

}  // namespace weylab
