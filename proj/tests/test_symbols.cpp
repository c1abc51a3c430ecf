#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "weylab/metric.hpp"
#include "weylab/poly_symbol.hpp"
#include "weylab/seminorm.hpp"
#include "weylab/symbols.hpp"
#include "weylab/taylor.hpp"

using namespace weylab;

namespace {

// Largest |coefficient| of a - b over a fixed set of x points.
double coefficient_gap(PolySymbol a, const PolySymbol& b) {
  a -= b;
  a.canonicalize();
  double worst = 0.0;
  std::vector<double> x(a.dim());
  for (int i = 0; i < 41; ++i) {
    for (int k = 0; k < a.dim(); ++k) x[k] = -2.0 + 0.1 * ((i + 7 * k) % 41);
    for (const auto& [alpha, c] : a.terms()) worst = std::max(worst, std::abs(c.value(x)));
  }
  return worst;
}

PolySymbol x_times_xi() {
  return PolySymbol::monomial(Coefficient::of(xf::coordinate(1, 0)), MultiIndex{1});
}

PhasePoint pp1(double x, double xi) {
  PhasePoint p(1);
  p.x[0] = x;
  p.xi[0] = xi;
  return p;
}

}  // namespace

TEST(Taylor, ProductAndCompositionMatchAnalyticDerivatives) {
  // f(x, y) = exp(x) log(y) at (0.3, 0.7)
  const Taylor x = Taylor::variable(2, 4, 0, 0.3), y = Taylor::variable(2, 4, 1, 0.7);
  const Taylor f = exp(x) * log(y);
  const std::vector<int> a11{1, 1}, a02{0, 2}, a31{3, 1};
  const double e = std::exp(0.3);
  EXPECT_NEAR(f.value(), e * std::log(0.7), 1e-15);
  EXPECT_NEAR(f.derivative(a11), e / 0.7, 1e-14);
  EXPECT_NEAR(f.derivative(a02), -e / 0.49, 1e-13);
  EXPECT_NEAR(f.derivative(a31), e / 0.7, 1e-13);
}

TEST(Taylor, PowerAndSqrt) {
  const Taylor x = Taylor::variable(1, 3, 0, 2.0);
  const Taylor s = sqrt(x);
  const std::vector<int> d1{1}, d2{2}, d3{3};
  EXPECT_NEAR(s.derivative(d1), 0.5 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s.derivative(d2), -0.25 * std::pow(2.0, -1.5), 1e-15);
  EXPECT_NEAR(s.derivative(d3), 0.375 * std::pow(2.0, -2.5), 1e-15);
  const Taylor q = pow(x, -0.7);
  EXPECT_NEAR(q.derivative(d2), -0.7 * -1.7 * std::pow(2.0, -2.7), 1e-14);
}

TEST(PolySymbol, ValueAndDegree) {
  const WeightEvaluator w = WeightEvaluator::harmonic(2);
  PhasePoint p(2);
  p.x = {1.0, 2.0};
  p.xi = {3.0, -1.0};
  EXPECT_EQ(w.a2.degree(), 2);
  EXPECT_NEAR(w.a2.value(p).real(), 10.0, 1e-15);
  EXPECT_NEAR(full_symbol(w.a2).value(p).real(), 15.0, 1e-15);
}

TEST(PolySymbol, DerivativeOfDahoSymbol) {
  const PolySymbol a = daho_symbol(3.0);
  PhasePoint p(2);
  p.x = {1.0, 0.5};
  p.xi = {2.0, 3.0};
  // d_xi2^2 (xi1^2 + x1^2 xi2^2) = 2 x1^2 on |x1| <= 2
  EXPECT_NEAR(a.derivative(MultiIndex{}, MultiIndex{0, 2}).value(p).real(), 2.0, 1e-13);
  // d_x1 d_xi2 = 4 x1 xi2
  EXPECT_NEAR(a.derivative(MultiIndex{1, 0}, MultiIndex{0, 1}).value(p).real(), 12.0, 1e-12);
}

TEST(PolySymbol, PointwiseProduct) {
  const PolySymbol a = harmonic_symbol(1), b = x_squared_symbol(1);
  const PolySymbol c = a * b;
  EXPECT_NEAR(c.value(pp1(2.0, 3.0)).real(), 36.0, 1e-13);
}

TEST(PolySymbol, SumOfSquaresOfFullFrameIsXiSquared) {
  EXPECT_LT(coefficient_gap(sum_of_squares_symbol(full_frame(2)), harmonic_symbol(2)), 1e-15);
}

TEST(Transport, XiTimesXOracle) {
  for (double t : {-2.0, 0.5, 1.0}) {
    const PolySymbol oracle = x_times_xi() + PolySymbol::constant(1, cdouble(0.0, t / (2.0 * kPi)));
    EXPECT_LT(coefficient_gap(jt_transport(x_times_xi(), t), oracle), 1e-15);
  }
}

TEST(Transport, ZeroIsIdentity) {
  const PolySymbol a = daho_symbol(3.0);
  EXPECT_LT(coefficient_gap(jt_transport(a, 0.0), a), 1e-15);
}

TEST(Transport, XiIndependentSymbolsAreFixed) {
  const PolySymbol a = x_squared_symbol(2);
  EXPECT_LT(coefficient_gap(jt_transport(a, 0.7), a), 1e-15);
}

TEST(Moyal, CanonicalCommutator) {
  const PolySymbol x = PolySymbol::monomial(Coefficient::of(xf::coordinate(1, 0)), MultiIndex{0});
  const PolySymbol xi = PolySymbol::xi_power(1, MultiIndex{1});
  // xi # x - x # xi = 1 / (2 pi i)
  const PolySymbol comm = moyal_sharp(xi, x) - moyal_sharp(x, xi);
  EXPECT_LT(coefficient_gap(comm, PolySymbol::constant(1, 1.0 / cdouble(0.0, 2.0 * kPi))), 1e-15);
  // symmetric part is the pointwise product
  const PolySymbol sym = (moyal_sharp(xi, x) + moyal_sharp(x, xi)) * 0.5;
  EXPECT_LT(coefficient_gap(sym, x_times_xi()), 1e-15);
}

TEST(Moyal, HarmonicSquare) {
  // (x^2 + xi^2) # (x^2 + xi^2) = (x^2 + xi^2)^2 - 1 / (4 pi^2)
  const PolySymbol h = full_symbol(harmonic_symbol(1));
  const PolySymbol expect = h * h - PolySymbol::constant(1, 1.0 / (4.0 * kPi * kPi));
  EXPECT_LT(coefficient_gap(moyal_sharp(h, h), expect), 1e-13);
}

TEST(Moyal, ConstantIsUnit) {
  const PolySymbol a = daho_symbol(3.0);
  EXPECT_LT(coefficient_gap(moyal_sharp(PolySymbol::constant(2, 1.0), a), a), 1e-15);
  EXPECT_LT(coefficient_gap(moyal_sharp(a, PolySymbol::constant(2, 1.0)), a), 1e-15);
}

TEST(Derivative, ExactJetAgreesWithFiniteDifferences) {
  const SymbolEvaluator m = weight_symbol(WeightEvaluator::daho(3.0));
  PhasePoint p(2);
  p.x = {2.6, -1.0};
  p.xi = {0.8, 1.7};
  DerivativeOptions fd;
  fd.force_fd = true;
  for (const auto& [beta, alpha] : std::vector<std::pair<MultiIndex, MultiIndex>>{
           {{1, 0}, {0, 0}}, {{0, 0}, {0, 1}}, {{1, 0}, {0, 1}}, {{2, 0}, {0, 0}}}) {
    const double exact = derivative(m, beta, alpha, p).real();
    const double approx = derivative(m, beta, alpha, p, fd).real();
    EXPECT_NEAR(approx, exact, 1e-5 * std::max(1.0, std::abs(exact)));
  }
}

TEST(Derivative, OrderLimit) {
  const SymbolEvaluator s = sym::japanese(1);
  DerivativeOptions o;
  o.max_order = 2;
  EXPECT_THROW(derivative(s, MultiIndex{2}, MultiIndex{1}, pp1(0.1, 0.2), o), UnsupportedError);
}

TEST(GlaeserBound, SquareSaturatesConstantTwo) {
  const UnivariateC2 f{[](double t) { return t * t; }, [](double t) { return 2 * t; }, [](double) { return 2.0; }};
  std::vector<double> s;
  for (double t = -3; t <= 3; t += 0.25) s.push_back(t);
  EXPECT_TRUE(check_glaeser_bound(f, s, s, 2.0).pass);
  const auto bad = check_glaeser_bound(f, s, s, 0.5);
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.witnesses.empty());
}

TEST(GlaeserBound, CutoffProfileSatisfiesBound) {
  const CutoffProfileSquared F(3.0);
  const UnivariateC2 f{[&](double t) { return F.value(t); }, [&](double t) { return F.derivative(t, 1); },
                       [&](double t) { return F.derivative(t, 2); }};
  std::vector<double> s;
  for (double t = -6; t <= 6; t += 0.01) s.push_back(t);
  EXPECT_TRUE(check_glaeser_bound(f, s, s).pass);
}

TEST(Seminorm, ConstantSymbolHasUnitRatio) {
  const WeightEvaluator w = WeightEvaluator::harmonic(1);
  const auto samples = nested_samples(1, {5.0}, 200, 1);
  const SymbolEvaluator one = sym::constant(1, 1.0);
  const SeminormEstimate e = smg_seminorm(one, one, w, 3, samples[0]);
  EXPECT_NEAR(e.value, 1.0, 1e-15);
  EXPECT_NEAR(e.by_order[0], 1.0, 1e-15);
  for (int j = 1; j <= 3; ++j) EXPECT_EQ(e.by_order[j], 0.0);
}

TEST(Seminorm, NestedSamplesAreNested) {
  const auto s = nested_samples(2, {1.0, 2.0, 4.0}, 50, 3);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_LT(s[0].size(), s[1].size());
  EXPECT_LT(s[1].size(), s[2].size());
  for (size_t i = 0; i < s[0].size(); ++i)
    for (int k = 0; k < 4; ++k) EXPECT_EQ(s[0][i].coord(k), s[2][i].coord(k));
}

TEST(Membership, WeightAndEllipticSymbol) {
  const WeightEvaluator w = WeightEvaluator::daho(3.0);
  const auto r = class_membership(a_symbol(w), weight_symbol(w), w, 2, {10.0, 20.0}, 400, 9);
  EXPECT_TRUE(r.pass);
  const auto bad = class_membership(sym::exp_abs_x(2), weight_symbol(w), w, 2, {10.0, 20.0}, 400, 9);
  EXPECT_FALSE(bad.pass);
}

TEST(Band, RestrictionVanishesOutsideBand) {
  const WeightEvaluator w = WeightEvaluator::harmonic(1);
  const SymbolEvaluator q = band_restrict(sym::constant(1, 1.0), w, 10.0);
  // m(0, 0) = 1, far below the band
  EXPECT_EQ(q(pp1(0.0, 0.0)), cdouble(0.0));
  // m = 17 + sqrt(18) ~ 21.2 lies in [12, 25]
  EXPECT_NEAR(q(pp1(4.0, 1.0)).real(), 1.0, 1e-14);
  EXPECT_THROW(band_restrict(q, w, 0.5), ArgumentError);
}
