// Randomized invariants over many seeds.
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "weylab/bounds.hpp"
#include "weylab/poly_symbol.hpp"
#include "weylab/quantize.hpp"
#include "weylab/spectral.hpp"

using namespace weylab;

namespace {

constexpr int kSeeds = 20;

PolySymbol random_poly(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> deg(0, 2);
  std::normal_distribution<double> nd;
  PolySymbol s(n);
  for (int t = 0; t < 4; ++t) {
    MultiIndex alpha{}, powers{};
    for (int i = 0; i < n; ++i) {
      alpha[i] = deg(rng);
      powers[i] = deg(rng);
    }
    const cdouble w(nd(rng), nd(rng));
    s.add_term(alpha, Coefficient::of(xf::monomial(n, powers), w));
  }
  return s;
}

// Gaussian-coefficient polynomial; `conjugate` flips every weight, same draws otherwise.
PolySymbol random_gaussian_poly(int n, unsigned seed, bool conjugate) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg(0, 2);
  std::normal_distribution<double> nd;
  PolySymbol s(n);
  for (int t = 0; t < 3; ++t) {
    MultiIndex alpha{};
    for (int i = 0; i < n; ++i) alpha[i] = deg(rng);
    const std::vector<double> c(n, 0.5 * nd(rng));
    const double re = nd(rng), im = nd(rng);
    s.add_term(alpha, Coefficient::of(xf::gaussian(n, c, 1.0), cdouble(re, conjugate ? -im : im)));
  }
  return s;
}

double max_gap(const PolySymbol& a, const PolySymbol& b, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 40; ++k) {
    PhasePoint p(a.dim());
    for (int i = 0; i < a.dim(); ++i) {
      p.x[i] = u(rng);
      p.xi[i] = u(rng);
    }
    const cdouble va = a.value(p), vb = b.value(p);
    worst = std::max(worst, std::abs(va - vb) / std::max(1.0, std::abs(va)));
  }
  return worst;
}

}  // namespace

TEST(Properties, MoyalProductIsAssociative) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(seed);
    const int n = 1 + seed % 2;
    const PolySymbol a = random_poly(n, rng), b = random_poly(n, rng), c = random_poly(n, rng);
    EXPECT_LT(max_gap(moyal_sharp(moyal_sharp(a, b), c), moyal_sharp(a, moyal_sharp(b, c)), rng), 1e-10)
        << "seed " << seed;
  }
}

TEST(Properties, TransportIsAOneParameterGroup) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(100 + seed);
    std::uniform_real_distribution<double> ut(-2.0, 2.0);
    const PolySymbol a = random_poly(1 + seed % 2, rng);
    const double s = ut(rng), t = ut(rng);
    EXPECT_LT(max_gap(jt_transport(jt_transport(a, s), t), jt_transport(a, s + t), rng), 1e-12) << "seed " << seed;
    EXPECT_LT(max_gap(jt_transport(jt_transport(a, t), -t), a, rng), 1e-12) << "seed " << seed;
  }
}

TEST(Properties, WeylAdjointIsConjugateSymbol) {
  const Grid g(1, 8.0, 32);
  for (int seed = 0; seed < kSeeds; ++seed) {
    const PolySymbol a = random_gaussian_poly(1, 200 + seed, false), b = random_gaussian_poly(1, 200 + seed, true);
    const Eigen::MatrixXcd A = weyl_quantize(a, g).a, B = weyl_quantize(b, g).a;
    EXPECT_LT((A.adjoint() - B).cwiseAbs().maxCoeff(), 1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff()))
        << "seed " << seed;
  }
}

TEST(Properties, FractionalPowersCompose) {
  for (int seed = 0; seed < 6; ++seed) {
    std::mt19937_64 rng(300 + seed);
    std::uniform_real_distribution<double> ub(0.1, 0.9);
    const double b1 = ub(rng), b2 = ub(rng);
    const HamiltonianMatrix H = daho_matrix(3.0, DirichletGrid(2, 5.0, 8));
    const Eigen::MatrixXd P = fractional_power(H, b1, 1.0) * fractional_power(H, b2, 1.0);
    const Eigen::MatrixXd Q = fractional_power(H, b1 + b2, 1.0);
    EXPECT_LT((P - Q).norm(), 1e-10 * Q.norm()) << "seed " << seed;
  }
}

TEST(Properties, ConstantPotentialShiftsSpectrum) {
  const HamiltonianMatrix K = harmonic_matrix(DirichletGrid(2, 6.0, 9));
  const Eigen::VectorXd base = dense_eigh(K.dense(), false).values;
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(400 + seed);
    std::uniform_real_distribution<double> uc(-10.0, 10.0);
    const double c = uc(rng);
    const Eigen::VectorXd e = dense_eigh(hamiltonian_with_potential(K, Potential::constant(c)).dense(), false).values;
    EXPECT_LT((e.array() - base.array() - c).abs().maxCoeff(), 1e-10 * (1 + base.maxCoeff())) << "seed " << seed;
  }
}

TEST(Properties, InterpolationBoundDominatesProbes) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(500 + seed);
    std::uniform_int_distribution<int> sz(2, 40);
    std::normal_distribution<double> nd;
    const int r = sz(rng), c = sz(rng);
    Eigen::MatrixXd T(r, c);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) T(i, j) = nd(rng);
    const LpNorms n = matrix_norms(T);
    std::uniform_real_distribution<double> up(1.0, 6.0);
    const double p = up(rng);
    EXPECT_LE(lp_lower_bound(T, p, 8, seed), riesz_thorin_upper(n, p) * (1 + 1e-12)) << "seed " << seed;
  }
}

TEST(Properties, WeylInequalityOnRandomMatrices) {
  for (int seed = 0; seed < kSeeds; ++seed) {
    std::mt19937_64 rng(600 + seed);
    std::normal_distribution<double> nd;
    std::uniform_int_distribution<int> sz(2, 30);
    const int n = sz(rng);
    Eigen::MatrixXcd T(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) T(i, j) = {nd(rng), nd(rng)};
    std::uniform_real_distribution<double> up(0.5, 4.0);
    EXPECT_TRUE(weyl_inequality_check(T, up(rng)).pass) << "seed " << seed;
  }
}

TEST(Properties, KohnNirenbergOrderingOfProducts) {
  // KN(c(x) xi^alpha) = c(x) KN(xi^alpha)
  const Grid g(1, 8.0, 32);
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(700 + seed);
    std::normal_distribution<double> nd;
    const std::vector<double> c0(1, 0.5 * nd(rng));
    const XFunctionPtr c = xf::gaussian(1, c0, 1.0);
    const MultiIndex alpha{seed % 3};
    const Eigen::MatrixXcd lhs = kn_quantize(PolySymbol::monomial(Coefficient::of(c), alpha), g).a;
    Eigen::VectorXcd d(g.size());
    for (int i = 0; i < g.size(); ++i) d[i] = c->value(g.point(i));
    const Eigen::MatrixXcd rhs = d.asDiagonal() * kn_quantize(PolySymbol::xi_power(1, alpha), g).a;
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-12) << "seed " << seed;
  }
}
