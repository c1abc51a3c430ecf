#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "weylab/cutoff.hpp"
#include "weylab/geometry.hpp"

using namespace weylab;

namespace {

std::shared_ptr<const CutoffProfileSquared> profile(double c = 3.0) {
  return std::make_shared<const CutoffProfileSquared>(c);
}

}  // namespace

TEST(Cutoff, MatchesSquareNearOriginAndPlateauFar) {
  const CutoffProfileSquared F(3.0);
  for (double t : {-2.0, -1.3, 0.0, 0.4, 1.99}) EXPECT_NEAR(F.value(t), t * t, 1e-14);
  for (double t : {-9.0, -4.0, 4.0, 6.5}) EXPECT_NEAR(F.value(t), 9.0, 1e-14);
}

TEST(Cutoff, JetAgreesWithFiniteDifferences) {
  const CutoffProfileSquared F(3.0);
  const double h = 1e-4;
  for (double t : {-3.7, -2.5, 2.2, 2.9, 3.1, 3.8}) {
    const double d1 = (F.value(t + h) - F.value(t - h)) / (2 * h);
    const double d2 = (F.value(t + h) - 2 * F.value(t) + F.value(t - h)) / (h * h);
    EXPECT_NEAR(F.derivative(t, 1), d1, 1e-6 * std::max(1.0, std::abs(d1)));
    EXPECT_NEAR(F.derivative(t, 2), d2, 1e-4 * std::max(1.0, std::abs(d2)));
  }
}

TEST(Cutoff, SmoothAtJunctions) {
  const CutoffProfileSquared F(3.0);
  for (int k = 1; k <= 3; ++k) {
    const double inner = k == 1 ? 4.0 : (k == 2 ? 2.0 : 0.0);
    EXPECT_NEAR(F.derivative(2.0 - 1e-9, k), inner, 1e-6);
    EXPECT_NEAR(F.derivative(2.0 + 1e-9, k), inner, 1e-6);
    EXPECT_NEAR(F.derivative(4.0 - 1e-9, k), 0.0, 1e-6);
  }
}

TEST(Cutoff, MonotoneThresholdSeparatesProfiles) {
  const CutoffProfileSquared probe(3.0);
  const double thr = probe.monotone_threshold();
  EXPECT_GT(thr, 4.0);
  const CutoffProfileSquared above(std::sqrt(thr) + 0.01), below(2.05);
  EXPECT_TRUE(above.monotone());
  EXPECT_FALSE(below.monotone());
  double prev = 0.0;
  for (double t = 0.0; t <= 5.0; t += 0.01) {
    EXPECT_GE(above.value(t), prev - 1e-12);
    prev = above.value(t);
  }
}

TEST(Cutoff, OddCompanionSquaresToProfile) {
  const CutoffProfileSquared F(3.0);
  for (double t = -6.0; t <= 6.0; t += 0.37) {
    EXPECT_NEAR(F.odd_value(t) * F.odd_value(t), F.value(t), 1e-12);
    EXPECT_GE(F.odd_value(t) * t, 0.0);
  }
}

TEST(Cutoff, SmoothStepLimits) {
  EXPECT_EQ(smooth_step(-1.0), 0.0);
  EXPECT_EQ(smooth_step(0.0), 0.0);
  EXPECT_EQ(smooth_step(1.0), 1.0);
  EXPECT_NEAR(smooth_step(0.5), 0.5, 1e-15);
  for (double y = 0.05; y < 1.0; y += 0.05) EXPECT_NEAR(smooth_step(y) + smooth_step(1.0 - y), 1.0, 1e-14);
}

TEST(Cutoff, DyadicPartialSumTelescopes) {
  const DyadicPartition P(5);
  for (double t : {0.01, 0.1, 0.3, 0.7, 1.5, 3.0, 10.0})
    for (int l = 0; l <= 5; ++l) EXPECT_NEAR(P.partial_sum(t, l), DyadicPartition::eta(std::ldexp(t, l)), 1e-14);
}

TEST(Cutoff, BandBumpSupport) {
  EXPECT_EQ(band_bump(0.99), 0.0);
  EXPECT_EQ(band_bump(3.01), 0.0);
  EXPECT_NEAR(band_bump(1.2), 1.0, 1e-14);
  EXPECT_NEAR(band_bump(2.0), 1.0, 1e-14);
  EXPECT_NEAR(band_bump(2.5), 1.0, 1e-14);
}

TEST(Fields, GrushinCommutatorIsVerticalAxis) {
  const HormanderSystem sys = grushin_pure_system();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> x{u(rng), u(rng)};
    const Eigen::MatrixXd F = sys.frame(x);
    EXPECT_NEAR(F(0, 0), 1.0, 1e-15);
    EXPECT_NEAR(F(1, 1), x[0], 1e-14);
    const Eigen::MatrixXd C = sys.commutators(x);
    ASSERT_EQ(C.cols(), 1);
    // [d1, x1 d2] = d2
    EXPECT_NEAR(std::abs(C(1, 0)), 1.0, 1e-14);
    EXPECT_NEAR(C(0, 0), 0.0, 1e-14);
  }
}

TEST(Fields, HormanderConditionHoldsForDaho) {
  const auto pts = sample_box(2, 6.0, 13, 200, 1);
  EXPECT_TRUE(check_hormander_order2(grushin_system(profile()), pts).pass);
  EXPECT_TRUE(check_hormander_order2(grushin_pure_system(), pts).pass);
}

TEST(Fields, SingleFieldFailsHormander) {
  const HormanderSystem sys(2, {VectorField::axis(2, 0)});
  const auto rep = check_hormander_order2(sys, sample_box(2, 3.0, 5, 0, 1));
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.witnesses.empty());
}

TEST(Fields, NilpotentDimension) {
  const auto pts = sample_box(2, 4.0, 9, 0, 1);
  const NilpotentData g = nilpotent_data(grushin_system(profile()), pts);
  EXPECT_EQ(g.r0, 1);
  EXPECT_EQ(g.Q, 3);
  EXPECT_EQ(g.sum_dj, 3);
  const NilpotentData e = nilpotent_data(full_frame(2), pts);
  EXPECT_EQ(e.r0, 2);
  EXPECT_EQ(e.Q, 2);
}

TEST(Fields, NumericalRank) {
  Eigen::MatrixXd m(3, 3);
  m << 1, 2, 3, 2, 4, 6, 0, 0, 1;
  EXPECT_EQ(numerical_rank(m), 2);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Identity(4, 4)), 4);
  EXPECT_EQ(numerical_rank(Eigen::MatrixXd::Zero(2, 2)), 0);
}

TEST(Fields, SampleBoxHitsAxes) {
  const auto pts = sample_box(2, 2.0, 5, 3, 9);
  ASSERT_EQ(pts.size(), 28u);
  bool origin = false;
  for (const auto& p : pts) origin = origin || (p[0] == 0.0 && p[1] == 0.0);
  EXPECT_TRUE(origin);
}

TEST(Dilation, HomogeneousNormScales) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (int i = 0; i < 50; ++i) {
    const std::vector<double> v{nd(rng), nd(rng), nd(rng)};
    const double a = std::exp(nd(rng));
    EXPECT_NEAR(homogeneous_norm(dilate(a, v, 1), 1), a * homogeneous_norm(v, 1), 1e-12 * a);
    EXPECT_NEAR(homogeneous_norm(dilate(a, v, 2), 2), a * homogeneous_norm(v, 2), 1e-12 * a);
  }
  EXPECT_THROW(dilate(2.0, std::vector<double>{1.0}, 2), ArgumentError);
}

TEST(Diagonalize, GrushinSymbolMatrix) {
  const MatrixField A = a2_matrix(grushin_pure_system());
  for (double x1 : {0.0, 0.5, -2.0}) {
    const std::vector<double> x{x1, 0.3};
    const PointwiseDiagonalization d = pointwise_diagonalize(A, x);
    EXPECT_NEAR(d.theta.determinant(), 1.0, 1e-12);
    EXPECT_LT(d.reconstruction_error, 1e-12);
    EXPECT_EQ(d.rank, x1 == 0.0 ? 1 : 2);
    // eigenvalues of diag(1, x1^2)
    EXPECT_NEAR(d.eigenvalues.maxCoeff(), std::max(1.0, x1 * x1), 1e-12);
    EXPECT_NEAR(d.eigenvalues.minCoeff(), std::min(1.0, x1 * x1), 1e-12);
  }
}

TEST(Diagonalize, RejectsAsymmetric) {
  const MatrixField bad = [](std::span<const double>) {
    Eigen::MatrixXd m(2, 2);
    m << 1, 2, 0, 1;
    return m;
  };
  EXPECT_THROW(pointwise_diagonalize(bad, std::vector<double>{0.0, 0.0}), PreconditionError);
}
