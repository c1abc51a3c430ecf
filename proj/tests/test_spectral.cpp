#include <gtest/gtest.h>

#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "weylab/eigensolve.hpp"
#include "weylab/schatten_experiment.hpp"
#include "weylab/spectral.hpp"

using namespace weylab;

namespace {

Eigen::MatrixXcd random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd T(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) T(i, j) = {nd(rng), nd(rng)};
  return T;
}

double harmonic_m(double x, double xi) { return x * x + xi * xi + std::sqrt(1.0 + x * x + xi * xi); }

}  // namespace

TEST(Eigensolve, DenseMatchesLapackReference) {
  const HamiltonianMatrix H = daho_matrix(3.0, DirichletGrid(2, 6.0, 14));
  const SpectralResult r = eigensolve(H, 8);
  const Eigen::VectorXd ref = dense_eigh(H.dense(), false).values;
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(r.eigenvalues[j], ref[j], 1e-10 * r.h_norm);
  for (double res : r.residuals) EXPECT_LE(res, 1e-8);
  const Eigen::MatrixXd A = H.dense();
  for (int j = 0; j < 8; ++j)
    EXPECT_LT((A * r.eigenvectors.col(j) - r.eigenvalues[j] * r.eigenvectors.col(j)).norm(), 1e-8 * r.h_norm);
}

TEST(Eigensolve, LanczosMatchesDense) {
  const HamiltonianMatrix H = harmonic_matrix(DirichletGrid(2, 8.0, 30));
  EigensolveOptions o;
  o.dense_limit = 100;
  const SpectralResult lz = eigensolve(H, 10, o);
  const Eigen::VectorXd ref = dense_eigh(H.dense(), false).values;
  EXPECT_NE(lz.solver.find("lanczos"), std::string::npos);
  for (int j = 0; j < 10; ++j) EXPECT_NEAR(lz.eigenvalues[j], ref[j], 1e-9 * lz.h_norm);
  for (int j = 1; j < 10; ++j) EXPECT_LE(lz.eigenvalues[j - 1], lz.eigenvalues[j]);
}

TEST(Eigensolve, HarmonicCalibration) {
  const SpectralResult r = eigensolve(harmonic_matrix(DirichletGrid(2, 8.0, 48)), 6);
  const double expect[] = {2, 4, 4, 6, 6, 6};
  for (int j = 0; j < 6; ++j) EXPECT_NEAR(r.eigenvalues[j], expect[j], 1e-2);
}

TEST(Eigensolve, NormEstimate) {
  const HamiltonianMatrix H = daho_matrix(3.0, DirichletGrid(2, 6.0, 14));
  const Eigen::VectorXd ref = dense_eigh(H.dense(), false).values;
  const double top = std::max(std::abs(ref[0]), std::abs(ref[ref.size() - 1]));
  EXPECT_NEAR(symmetric_norm_estimate(H.sparse), top, 1e-6 * top);
}

TEST(Eigensolve, RejectsBadK) {
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(4, 4);
  EXPECT_THROW(eigensolve(A, 0), ArgumentError);
  EXPECT_THROW(eigensolve(A, 5), ArgumentError);
}

TEST(Singular, MatchesJacobi) {
  std::mt19937_64 rng(2);
  const Eigen::MatrixXcd T = random_complex(30, rng);
  const Eigen::VectorXd s = singular_values(T);
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(T);
  EXPECT_LT((s - svd.singularValues()).cwiseAbs().maxCoeff(), 1e-12 * s[0]);
  for (int i = 1; i < s.size(); ++i) EXPECT_LE(s[i], s[i - 1]);
}

TEST(Schatten, NormFromValues) {
  Eigen::VectorXd s(3);
  s << 3.0, 4.0, 0.0;
  EXPECT_NEAR(schatten_from_values(s, 2.0).value, 5.0, 1e-15);
  EXPECT_NEAR(schatten_from_values(s, 1.0).value, 7.0, 1e-15);
  EXPECT_THROW(schatten_from_values(s, 0.5), ArgumentError);
  std::mt19937_64 rng(3);
  const Eigen::MatrixXcd T = random_complex(20, rng);
  EXPECT_NEAR(schatten_norm(T, 2.0).value, T.norm(), 1e-12 * T.norm());
}

TEST(Weyl, InequalityOnNonnormalMatrices) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::MatrixXcd T = random_complex(50, rng);
    T.triangularView<Eigen::StrictlyUpper>() *= 3.0;
    for (double p : {1.0, 2.0, 3.0}) {
      const CheckReport r = weyl_inequality_check(T, p);
      EXPECT_TRUE(r.pass);
      EXPECT_LE(r.constants.at("lhs"), r.constants.at("rhs"));
    }
  }
}

TEST(Weyl, EqualityOnNormalMatrices) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Eigen::MatrixXcd Q = random_complex(50, rng).householderQr().householderQ();
    Eigen::VectorXcd d = random_complex(50, rng).col(0);
    const Eigen::MatrixXcd T = Q * d.asDiagonal() * Q.adjoint();
    for (double p : {1.0, 2.0, 3.0}) {
      const CheckReport r = weyl_inequality_check(T, p);
      EXPECT_TRUE(r.pass);
      EXPECT_NEAR(r.constants.at("lhs"), r.constants.at("rhs"), 1e-10 * r.constants.at("rhs"));
    }
  }
}

TEST(Growth, RecoversSyntheticExponent) {
  Eigen::VectorXd ev(500);
  for (int j = 1; j <= 500; ++j) ev[j - 1] = 3.0 * std::sqrt(double(j));
  const GrowthFit f = growth_fit(ev, 50, 400);
  EXPECT_NEAR(f.exponent, 0.5, 1e-12);
  EXPECT_NEAR(f.log_c, std::log(3.0), 1e-11);
  EXPECT_LT(f.residual, 1e-12);
  EXPECT_THROW(growth_fit(ev, 50, 600), ArgumentError);
  EXPECT_THROW(growth_fit(ev, 50, 60), ArgumentError);
  ev[99] = -1.0;
  EXPECT_THROW(growth_fit(ev, 50, 400), ArgumentError);
}

TEST(PhaseSpace, IntegralMatchesSimpson) {
  const WeightEvaluator w = WeightEvaluator::harmonic(1);
  const double L = 4.0, s = 1.5;
  const int M = 800;
  const double h = 2 * L / M;
  double acc = 0.0;
  for (int i = 0; i <= M; ++i) {
    const double wi = (i == 0 || i == M) ? 1 : (i % 2 ? 4 : 2);
    for (int j = 0; j <= M; ++j) {
      const double wj = (j == 0 || j == M) ? 1 : (j % 2 ? 4 : 2);
      acc += wi * wj * std::pow(harmonic_m(-L + i * h, -L + j * h), -s);
    }
  }
  acc *= h * h / 9.0;
  EXPECT_NEAR(phase_space_integral(w, s, L), acc, 1e-8 * acc);
}

TEST(PhaseSpace, IntegralIsMonotoneInBox) {
  const WeightEvaluator w = WeightEvaluator::harmonic(2);
  double prev = 0.0;
  for (double L : {2.0, 4.0, 8.0}) {
    const double v = phase_space_integral(w, 2.0, L, 4);
    EXPECT_GT(v, prev);
    prev = v;
  }
}
