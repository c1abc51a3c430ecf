#include "weylab/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace weylab {

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& T) {
  if (!T.allFinite()) throw ArgumentError("singular_values: non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(T);
  return svd.singularValues();
}

Eigen::VectorXd singular_values(const Eigen::MatrixXd& T) {
  if (!T.allFinite()) throw ArgumentError("singular_values: non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(T);
  return svd.singularValues();
}

SchattenEstimate schatten_from_values(const Eigen::VectorXd& s, double r) {
  if (!(r >= 1.0) || !std::isfinite(r)) throw ArgumentError("schatten_norm: r must be finite and >= 1");
  SchattenEstimate e;
  e.r = r;
  e.truncation = static_cast<std::size_t>(s.size());
  // Scale by the largest value so large r does not overflow.
  const double top = s.size() ? s.cwiseAbs().maxCoeff() : 0.0;
  if (top == 0.0) return e;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) acc += std::pow(std::abs(s(k)) / top, r);
  e.value = top * std::pow(acc, 1.0 / r);
  return e;
}

SchattenEstimate schatten_norm(const Eigen::MatrixXcd& T, double r) {
  SchattenEstimate e = schatten_from_values(singular_values(T), r);
  e.grid = std::to_string(T.rows()) + "x" + std::to_string(T.cols());
  return e;
}

CheckReport weyl_inequality_check(const Eigen::MatrixXcd& T, double p) {
  if (T.rows() != T.cols()) throw ArgumentError("weyl_inequality_check: matrix not square");
  if (!(p > 0.0)) throw ArgumentError("weyl_inequality_check: p must be positive");
  CheckReport r;
  r.kind = "weyl_inequality";
  r.sample_size = 1;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(T, false);
  const Eigen::VectorXd s = singular_values(T);
  double lhs = 0.0, rhs = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    lhs += std::pow(std::abs(es.eigenvalues()(k)), p);
    rhs += std::pow(s(k), p);
  }
  r.constants["lhs"] = lhs;
  r.constants["rhs"] = rhs;
  r.constants["gap"] = rhs - lhs;
  r.constants["p"] = p;
  r.pass = lhs <= rhs * (1.0 + 1e-10) + 1e-300;
  if (!r.pass) r.add_witness({{}, {}, lhs, rhs, "eigenvalue side exceeds singular side"});
  return r;
}

GrowthFit growth_fit(const Eigen::VectorXd& ev, int j_min, int j_max) {
  if (j_min < 1 || j_max < j_min) throw ArgumentError("growth_fit: invalid window");
  if (j_max - j_min + 1 < 50) throw ArgumentError("growth_fit: window shorter than 50 eigenvalues");
  if (j_max > ev.size()) throw ArgumentError("growth_fit: window exceeds available spectrum");
  const int m = j_max - j_min + 1;
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (int j = j_min; j <= j_max; ++j) {
    const double l = ev(j - 1);
    if (!(l > 0.0)) throw ArgumentError("growth_fit: nonpositive eigenvalue at j = " + std::to_string(j));
    A(j - j_min, 0) = std::log(double(j));
    A(j - j_min, 1) = 1.0;
    b(j - j_min) = std::log(l);
  }
  const Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  GrowthFit f;
  f.exponent = c(0);
  f.log_c = c(1);
  f.j_min = j_min;
  f.j_max = j_max;
  f.residual = std::sqrt((A * c - b).squaredNorm() / m);
  return f;
}

GrowthFit growth_fit(const SpectralResult& res, int j_min, int j_max) {
  return growth_fit(res.eigenvalues, j_min, j_max);
}

}  // namespace weylab
