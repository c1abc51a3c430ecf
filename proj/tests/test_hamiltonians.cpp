#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "weylab/eigensolve.hpp"
#include "weylab/hamiltonians.hpp"

using namespace weylab;

namespace {

std::vector<Point> radial_sample(int n, double R, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-R, R);
  std::vector<Point> s(count, Point(n));
  for (auto& p : s)
    for (auto& v : p) v = u(rng);
  return s;
}

double lowest(const HamiltonianMatrix& H) { return dense_eigh(H.dense(), false).values[0]; }

}  // namespace

TEST(Assembly, SymmetricAndPositiveSemidefinite) {
  for (const HamiltonianMatrix& H :
       {daho_matrix(3.0, DirichletGrid(2, 6.0, 12)), grushin_pure_matrix(DirichletGrid(2, 6.0, 12)),
        harmonic_matrix(DirichletGrid(2, 6.0, 12))}) {
    EXPECT_LT(H.symmetry_residual(), 1e-14);
    EXPECT_GT(lowest(H), -1e-10);
    EXPECT_FALSE(H.provenance.empty());
  }
}

TEST(Assembly, HarmonicOscillatorOneDimension) {
  const HamiltonianMatrix H = harmonic_matrix(DirichletGrid(1, 8.0, 400));
  const Eigen::VectorXd e = dense_eigh(H.dense(), false).values;
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(e[j], 2.0 * j + 1.0, 1e-5);
}

TEST(Assembly, FourthOrderLaplacianConverges) {
  // Dirichlet eigenvalues of -d^2 on (-L, L): (k pi / 2L)^2
  const double L = 1.0;
  double prev = 0.0;
  for (int N : {31, 63, 127}) {
    const HamiltonianMatrix H = sum_of_squares_matrix(full_frame(1), DirichletGrid(1, L, N));
    const Eigen::VectorXd e = dense_eigh(H.dense(), false).values;
    double err = 0.0;
    for (int k = 1; k <= 3; ++k) err = std::max(err, std::abs(e[k - 1] - std::pow(k * kPi / (2 * L), 2)));
    if (prev > 0.0) {
      EXPECT_GT(std::log2(prev / err), 3.8);
    }
    prev = err;
  }
  EXPECT_LT(prev, 1e-5);
}

TEST(Assembly, FourthOrderRateInTheInterior) {
  double prev = 0.0;
  for (int N : {39, 79, 159}) {
    const Eigen::VectorXd e = dense_eigh(harmonic_matrix(DirichletGrid(1, 6.0, N)).dense(), false).values;
    double err = 0.0;
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(e[k] - (2 * k + 1)));
    if (prev > 0.0) {
      EXPECT_GT(std::log2(prev / err), 3.8);
    }
    prev = err;
  }
}

TEST(Assembly, SecondOrderIsAlsoConsistent) {
  AssemblyOptions o2;
  o2.order = 2;
  const HamiltonianMatrix H = sum_of_squares_matrix(full_frame(1), DirichletGrid(1, 1.0, 255), o2);
  EXPECT_NEAR(lowest(H), kPi * kPi / 4.0, 1e-4);
}

TEST(Assembly, GridNodes) {
  const DirichletGrid g(2, 5.0, 9);
  EXPECT_EQ(g.size(), 81);
  EXPECT_DOUBLE_EQ(g.h(), 1.0);
  EXPECT_DOUBLE_EQ(g.coord(0), -4.0);
  const auto p = g.point(10);
  EXPECT_DOUBLE_EQ(p[0], -3.0);
  EXPECT_DOUBLE_EQ(p[1], -3.0);
  EXPECT_THROW(DirichletGrid(2, 5.0, 7), GridError);
}

TEST(Potentials, P2AcceptsQuadraticAndStep) {
  const auto s = radial_sample(2, 20.0, 4000, 1);
  const auto q = validate_p2(Potential::quadratic(), s);
  EXPECT_TRUE(q.pass);
  EXPECT_NEAR(q.constants.at("C"), 1.0, 1e-12);
  EXPECT_EQ(q.constants.at("C2"), 0.0);
  const auto st = validate_p2(Potential::step(), s);
  EXPECT_TRUE(st.pass);
  EXPECT_NEAR(st.constants.at("C2"), 5.0, 1e-12);
  EXPECT_TRUE(validate_p2(Potential::bounded_noise(3), s).pass);
}

TEST(Potentials, P2RejectsNegativeQuartic) {
  const auto r = validate_p2(Potential::negative_quartic(), radial_sample(2, 20.0, 4000, 2));
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.witnesses.empty());
}

TEST(Potentials, RejectedPotentialIsNotAdded) {
  const HamiltonianMatrix K = harmonic_matrix(DirichletGrid(2, 12.0, 15));
  EXPECT_THROW(hamiltonian_with_potential(K, Potential::negative_quartic()), PreconditionError);
  EXPECT_NO_THROW(hamiltonian_with_potential(K, Potential::negative_quartic(), true));
}

TEST(Potentials, ConstantShiftsSpectrum) {
  const HamiltonianMatrix K = daho_matrix(3.0, DirichletGrid(2, 6.0, 10));
  const HamiltonianMatrix H = hamiltonian_with_potential(K, Potential::constant(-2.5));
  const Eigen::VectorXd a = dense_eigh(K.dense(), false).values, b = dense_eigh(H.dense(), false).values;
  EXPECT_LT((b - (a.array() - 2.5).matrix()).cwiseAbs().maxCoeff(), 1e-11);
}

TEST(Potentials, LowerBoundWithStep) {
  const HamiltonianMatrix H = hamiltonian_with_potential(daho_matrix(3.0, DirichletGrid(2, 6.0, 12)), Potential::step());
  EXPECT_GE(lowest(H), -5.0 - 1e-9);
}

TEST(Potentials, NoiseIsDeterministicAndBounded) {
  const Potential a = Potential::bounded_noise(7), b = Potential::bounded_noise(7), c = Potential::bounded_noise(8);
  bool differs = false;
  for (const auto& p : radial_sample(2, 10.0, 200, 3)) {
    EXPECT_EQ(a.value(p), b.value(p));
    EXPECT_LE(std::abs(a.value(p)), 1.0);
    differs = differs || a.value(p) != c.value(p);
  }
  EXPECT_TRUE(differs);
  // constant on unit cells
  EXPECT_EQ(a.value(Point{0.1, 0.2}), a.value(Point{0.9, 0.7}));
}

TEST(Potentials, StepValues) {
  const Potential s = Potential::step();
  EXPECT_EQ(s.value(Point{0.5, 0.0}), -5.0);
  EXPECT_EQ(s.value(Point{1.5, 3.0}), -4.0);
  EXPECT_EQ(s.value(Point{-0.5, 0.0}), -4.0);
}

TEST(FractionalPower, MatchesEigenvalueMap) {
  const HamiltonianMatrix H = harmonic_matrix(DirichletGrid(1, 6.0, 40));
  const Eigen::MatrixXd A = H.dense();
  const Eigen::MatrixXd half = fractional_power(H, 0.5, 1.0);
  Eigen::MatrixXd shifted = A;
  shifted.diagonal().array() += 1.0;
  EXPECT_LT((half * half - shifted).cwiseAbs().maxCoeff(), 1e-9 * shifted.norm());
  EXPECT_LT((fractional_power(A, 1.0, 0.0) - A).cwiseAbs().maxCoeff(), 1e-9 * A.norm());
  EXPECT_LT((fractional_power(A, -1.0, 1.0) * shifted - Eigen::MatrixXd::Identity(40, 40)).cwiseAbs().maxCoeff(),
            1e-10);
  EXPECT_THROW(fractional_power(A, 0.5, -1e6), PreconditionError);
}
