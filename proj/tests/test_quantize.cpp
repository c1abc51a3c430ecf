#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "weylab/quantize.hpp"

using namespace weylab;

namespace {

// D_{jl} = (1/N) sum_k (k / 2L) e^{2 pi i k (x_j - x_l) / 2L}
Eigen::MatrixXcd dft_xi(const Grid& g) {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(g.N, g.N);
  for (int j = 0; j < g.N; ++j)
    for (int l = 0; l < g.N; ++l)
      for (int k = -g.N / 2; k < g.N / 2; ++k) {
        const double ph = 2.0 * kPi * k * (g.coord(j) - g.coord(l)) / (2.0 * g.L);
        D(j, l) += (k / (2.0 * g.L)) * std::polar(1.0, ph) / static_cast<double>(g.N);
      }
  return D;
}

XFunctionPtr bump(int n, double sigma) {
  const std::vector<double> c(n, 0.0);
  return xf::gaussian(n, c, sigma);
}

Eigen::MatrixXcd diag_of(const XFunctionPtr& f, const Grid& g) {
  Eigen::VectorXcd d(g.size());
  for (int i = 0; i < g.size(); ++i) d[i] = f->value(g.point(i));
  return d.asDiagonal();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("weylab_test_" + name);
}

}  // namespace

TEST(Quantize, IdentitySymbolIsIdentity) {
  for (int n : {1, 2}) {
    const Grid g(n, 8.0, 16);
    const PolySymbol one = PolySymbol::constant(n, 1.0);
    for (double tau : {0.0, 0.5, 1.0, 0.3}) {
      const OperatorMatrix op = tau_quantize(one, tau, g);
      EXPECT_EQ((op.a - Eigen::MatrixXcd::Identity(g.size(), g.size())).cwiseAbs().maxCoeff(), 0.0);
    }
  }
}

TEST(Quantize, XiMultiplierMatchesDft) {
  const Grid g(1, 8.0, 32);
  EXPECT_LT((xi_multiplier_1d(g) - dft_xi(g)).cwiseAbs().maxCoeff(), 1e-13);
  const OperatorMatrix op = kn_quantize(PolySymbol::xi_power(1, MultiIndex{1}), g);
  EXPECT_LT((op.a - dft_xi(g)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Quantize, OrderingOfCoefficientTimesXi) {
  const Grid g(1, 8.0, 32);
  const XFunctionPtr c = bump(1, 1.0);
  const PolySymbol s = PolySymbol::monomial(Coefficient::of(c), MultiIndex{1});
  const Eigen::MatrixXcd C = diag_of(c, g), D = dft_xi(g);
  EXPECT_LT((kn_quantize(s, g).a - C * D).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((tau_quantize(s, 0.0, g).a - D * C).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((weyl_quantize(s, g).a - 0.5 * (C * D + D * C)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Quantize, WeylOfRealSymbolIsHermitian) {
  const Grid g(2, 6.0, 16);
  PolySymbol s = PolySymbol::monomial(Coefficient::of(bump(2, 1.2)), MultiIndex{2, 0});
  s += PolySymbol::monomial(Coefficient::of(bump(2, 1.5)), MultiIndex{1, 1});
  s += PolySymbol::monomial(Coefficient::of(bump(2, 1.0)), MultiIndex{0, 1});
  const OperatorMatrix op = weyl_quantize(s, g);
  EXPECT_LT(op.hermitian_residual(), 1e-10);
  const OperatorMatrix kn = kn_quantize(s, g);
  EXPECT_GT(kn.hermitian_residual(), 1e-6);
}

TEST(Quantize, EvaluatorPathMatchesPolynomialPath) {
  const Grid g(1, 8.0, 32);
  const PolySymbol s = PolySymbol::monomial(Coefficient::of(bump(1, 1.0)), MultiIndex{2});
  const OperatorMatrix a = kn_quantize(s, g), b = kn_quantize(to_evaluator(s), g);
  EXPECT_LT((a.a - b.a).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Quantize, UnresolvedCoefficientIsRejected) {
  const Grid g(1, 8.0, 16);
  const PolySymbol s = PolySymbol::monomial(Coefficient::of(bump(1, 0.05)), MultiIndex{1});
  EXPECT_THROW(kn_quantize(s, g), GridError);
}

TEST(Quantize, LowModeBasisIsOrthonormal) {
  const Grid g(2, 4.0, 16);
  const Eigen::MatrixXcd B = low_mode_basis(g, 3);
  ASSERT_EQ(B.cols(), 49);
  EXPECT_LT((B.adjoint() * B - Eigen::MatrixXcd::Identity(49, 49)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Quantize, SobolevNormOfOrderZeroIsL2) {
  const Grid g(1, 8.0, 32);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd u(g.size());
  for (auto& v : u) v = {nd(rng), nd(rng)};
  const double l2 = u.norm() * std::sqrt(g.spacing());
  EXPECT_NEAR(weighted_sobolev_norm(u, WeightEvaluator::harmonic(1), 0.0, g), l2, 1e-12 * l2);
}

TEST(Quantize, BinaryRoundTrip) {
  const Grid g(1, 8.0, 16);
  OperatorMatrix op = weyl_quantize(PolySymbol::xi_power(1, MultiIndex{2}), g);
  const auto path = temp_path("op.bin");
  write_operator_binary(op, path.string());
  EXPECT_EQ(std::filesystem::file_size(path), 32u + 16u * 16u * 16u);
  const OperatorMatrix back = read_operator_binary(path.string());
  EXPECT_EQ(back.grid.N, 16);
  EXPECT_EQ(back.grid.n, 1);
  EXPECT_EQ(back.tau, 0.5);
  EXPECT_EQ((back.a - op.a).cwiseAbs().maxCoeff(), 0.0);
  std::filesystem::remove(path);
}

TEST(Quantize, CsvHasOneRowPerEntry) {
  const Grid g(1, 8.0, 8);
  const OperatorMatrix op = kn_quantize(PolySymbol::xi_power(1, MultiIndex{1}), g);
  const auto path = temp_path("op.csv");
  write_operator_csv(op, path.string());
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 1 + 64);
  std::filesystem::remove(path);
}
