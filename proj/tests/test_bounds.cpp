#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "weylab/bounds.hpp"
#include "weylab/cutoff.hpp"

using namespace weylab;

namespace {

Eigen::MatrixXd random_matrix(int r, int c, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd T(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) T(i, j) = nd(rng);
  return T;
}

// Orthonormal DST-I coefficients, written out directly.
Eigen::VectorXd dst(const Eigen::VectorXd& v) {
  const int N = static_cast<int>(v.size());
  Eigen::VectorXd out(N);
  for (int k = 0; k < N; ++k) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += v[j] * std::sin(kPi * (j + 1) * (k + 1) / (N + 1));
    out[k] = std::sqrt(2.0 / (N + 1)) * s;
  }
  return out;
}

HamiltonianMatrix daho_kinetic(int N) {
  return sum_of_squares_matrix(grushin_system(std::make_shared<const CutoffProfileSquared>(3.0)),
                               DirichletGrid(2, 4.0, N));
}

}  // namespace

TEST(Lp, MatrixNormsAgainstDefinitions) {
  Eigen::MatrixXd T(2, 2);
  T << 1, -2, 3, 4;
  const LpNorms n = matrix_norms(T);
  EXPECT_DOUBLE_EQ(n.one, 6.0);
  EXPECT_DOUBLE_EQ(n.inf, 7.0);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(T);
  EXPECT_NEAR(n.two, svd.singularValues()[0], 1e-14);
}

TEST(Lp, RieszThorinEndpoints) {
  const LpNorms n{2.0, 8.0, 4.0};
  EXPECT_DOUBLE_EQ(riesz_thorin_upper(n, 1.0), 2.0);
  EXPECT_DOUBLE_EQ(riesz_thorin_upper(n, 2.0), 4.0);
  EXPECT_DOUBLE_EQ(riesz_thorin_upper(n, INFINITY), 8.0);
  // 1/p = (1 - theta)/2 + theta/inf, theta = 1/2 at p = 4
  EXPECT_NEAR(riesz_thorin_upper(n, 4.0), std::sqrt(32.0), 1e-14);
  // 1/p = (1 - theta)/1 + theta/2, theta = 2/3 at p = 1.5
  EXPECT_NEAR(riesz_thorin_upper(n, 1.5), std::pow(2.0, 1.0 / 3.0) * std::pow(4.0, 2.0 / 3.0), 1e-14);
  EXPECT_THROW(riesz_thorin_upper(n, 0.5), ArgumentError);
}

TEST(Lp, VectorNorms) {
  Eigen::VectorXd v(3);
  v << 3, -4, 0;
  EXPECT_DOUBLE_EQ(lp_norm(v, 1.0), 7.0);
  EXPECT_NEAR(lp_norm(v, 2.0), 5.0, 1e-15);
  EXPECT_DOUBLE_EQ(lp_norm(v, INFINITY), 4.0);
  EXPECT_NEAR(lp_norm(v, 3.0), std::cbrt(91.0), 1e-14);
  EXPECT_EQ(lp_norm(Eigen::VectorXd::Zero(4), 2.0), 0.0);
  // large entries do not overflow
  EXPECT_NEAR(lp_norm(v * 1e200, 2.0), 5e200, 1e186);
}

TEST(Lp, LowerBoundNeverExceedsUpper) {
  for (unsigned seed = 0; seed < 5; ++seed) {
    const Eigen::MatrixXd T = random_matrix(30, 30, seed);
    const LpNorms n = matrix_norms(T);
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
      const double lo = lp_lower_bound(T, p, 16, seed);
      EXPECT_GT(lo, 0.0);
      EXPECT_LE(lo, riesz_thorin_upper(n, p) * (1 + 1e-12));
    }
    // endpoints are attained
    EXPECT_NEAR(lp_lower_bound(T, 1.0, 0, 1), n.one, 1e-12 * n.one);
    EXPECT_NEAR(lp_lower_bound(T, INFINITY, 0, 1), n.inf, 1e-12 * n.inf);
  }
}

TEST(Lp, WindowProbeOnDaho) {
  const WeightEvaluator w = WeightEvaluator::daho(3.0);
  const auto build = [](int N) { return daho_matrix(3.0, DirichletGrid(2, 6.0, N)); };
  const LpWindowReport r = lp_window_probe(build, w, 0.5, {1.5, 2.0, 3.0}, {10, 14});
  EXPECT_TRUE(r.calibration.pass);
  ASSERT_EQ(r.cells.size(), 6u);
  for (const auto& c : r.cells) {
    EXPECT_LE(c.lower, c.upper * (1 + 1e-12));
    EXPECT_TRUE(c.admissible);
  }
  EXPECT_EQ(r.stable.size(), 3u);
}

TEST(Sobolev, MatchesDirectSineTransform) {
  const DirichletGrid g(1, 3.0, 25);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(g.size());
  for (auto& x : v) x = nd(rng);
  const Eigen::VectorXd c = dst(v);
  for (double tau : {0.0, 0.5, 1.0, -0.5}) {
    double acc = 0.0;
    for (int k = 0; k < g.N; ++k) acc += std::pow(1.0 + std::pow(kPi * (k + 1) / (2 * g.L), 2), tau) * c[k] * c[k];
    EXPECT_NEAR(dirichlet_sobolev_norm(g, v, tau), std::sqrt(acc), 1e-12 * std::sqrt(acc));
  }
  EXPECT_NEAR(dirichlet_sobolev_norm(g, v, 0.0), v.norm(), 1e-12 * v.norm());
}

TEST(Sobolev, SineModeIsAnEigenvector) {
  const DirichletGrid g(2, 2.0, 15);
  const int a = 2, b = 5;
  Eigen::VectorXd v(g.size());
  for (int p = 0; p < g.size(); ++p) {
    const int i = p % g.N, j = p / g.N;
    v[p] = std::sin(kPi * (i + 1) * a / (g.N + 1)) * std::sin(kPi * (j + 1) * b / (g.N + 1));
  }
  const double k2 = std::pow(kPi * a / (2 * g.L), 2) + std::pow(kPi * b / (2 * g.L), 2);
  EXPECT_NEAR(dirichlet_sobolev_norm(g, v, 1.0), std::sqrt(1.0 + k2) * v.norm(), 1e-12 * v.norm() * (1 + k2));
  EXPECT_THROW(dirichlet_sobolev_norm(g, Eigen::VectorXd::Zero(3), 1.0), ArgumentError);
}

TEST(Subellipticity, DahoKineticIsStable) {
  SubellipticityOptions o;
  o.trials = 4;
  const SubellipticityReport r = subellipticity_probe(daho_kinetic, 0.5, {15, 31}, o);
  ASSERT_EQ(r.cells.size(), 2u);
  EXPECT_TRUE(r.stable);
  for (const auto& c : r.cells) EXPECT_LE(c.trial_C1, c.C1 * (1 + 1e-9));
}

TEST(Subellipticity, SingleFieldGrows) {
  const auto single = [](int N) {
    return sum_of_squares_matrix(HormanderSystem(2, {VectorField::axis(2, 0)}), DirichletGrid(2, 4.0, N));
  };
  SubellipticityOptions o;
  o.trials = 4;
  EXPECT_FALSE(subellipticity_probe(single, 0.5, {15, 31}, o).stable);
}

TEST(Band, SpreadIsMaxOverMin) {
  std::vector<BandProbeResult> r(3);
  r[0].quotient = 2.0;
  r[1].quotient = 0.5;
  r[2].quotient = 1.0;
  EXPECT_DOUBLE_EQ(band_quotient_spread(r), 4.0);
  EXPECT_DOUBLE_EQ(band_quotient_spread({}), 1.0);
}
