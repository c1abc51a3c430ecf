#pragma once

#include <Eigen/Dense>
#include <string>

#include "weylab/eigensolve.hpp"
#include "weylab/report.hpp"

namespace weylab {

/// Descending singular values.
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& T);
Eigen::VectorXd singular_values(const Eigen::MatrixXd& T);

struct SchattenEstimate {
  double r = 2.0;
  double value = 0.0;
  std::size_t truncation = 0;  // number of singular values summed
  std::string grid;
};

/// (sum s_k^r)^{1/r}, r >= 1.
SchattenEstimate schatten_norm(const Eigen::MatrixXcd& T, double r);
SchattenEstimate schatten_from_values(const Eigen::VectorXd& s, double r);

/// sum |lambda_k(T)|^p <= sum s_k(T)^p. constants: lhs, rhs, gap.
CheckReport weyl_inequality_check(const Eigen::MatrixXcd& T, double p);

struct GrowthFit {
  double exponent = 0.0;  // lambda_j ~ c j^exponent
  double log_c = 0.0;
  int j_min = 50;
  int j_max = 400;
  double residual = 0.0;  // RMS of the log-log fit
};

/// Least-squares slope of log lambda_j against log j, j one-based, on [j_min, j_max].
GrowthFit growth_fit(const Eigen::VectorXd& eigenvalues, int j_min = 50, int j_max = 400);
GrowthFit growth_fit(const SpectralResult& res, int j_min = 50, int j_max = 400);

}  // namespace weylab
