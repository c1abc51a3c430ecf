#include "weylab/cutoff.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <vector>

namespace weylab {

double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double w = 1.0 / y - 1.0 / (1.0 - y);
  if (w > 0.0) {
    const double e = std::exp(-w);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(w));
}

Taylor smooth_step_jet(double y0, int order) {
  if (y0 <= 0.0 || y0 >= 1.0) return Taylor::constant(1, order, smooth_step(y0));
  const Taylor y = Taylor::variable(1, order, 0, y0);
  const double w0 = 1.0 / y0 - 1.0 / (1.0 - y0);
  if (w0 > 700.0) return Taylor::constant(1, order, 0.0);
  if (w0 < -700.0) return Taylor::constant(1, order, 1.0);
  const Taylor w = y.reciprocal() - (1.0 - y).reciprocal();
  if (w.value() > 0.0) {
    const Taylor e = exp(-w);
    return e * (1.0 + e).reciprocal();
  }
  return (1.0 + exp(w)).reciprocal();
}

template <class T>
TaylorT<T> compose_univariate(const TaylorT<T>& a, const Taylor& f) {
  const int K = a.order();
  std::vector<T> d(K + 1, T(0));
  for (int k = 0; k <= K && k <= f.order(); ++k) d[k] = T(f[k] * factorial(k));
  return a.compose(d);
}

template Taylor compose_univariate(const Taylor&, const Taylor&);
template CTaylor compose_univariate(const CTaylor&, const Taylor&);

namespace {

constexpr int kPanels = 1024;

double g_integrand(double v) { return 2.0 * v * (1.0 - smooth_step(v - 2.0)); }

double gauss_panel(double a, double b) {
  return boost::math::quadrature::gauss<double, 20>::integrate(g_integrand, a, b);
}

/// Cumulative integral at the panel edges 2 + k / kPanels.
const std::vector<double>& g_table() {
  static const std::vector<double> t = [] {
    std::vector<double> c(kPanels + 1, 0.0);
    for (int k = 0; k < kPanels; ++k)
      c[k + 1] = c[k] + gauss_panel(2.0 + double(k) / kPanels, 2.0 + double(k + 1) / kPanels);
    return c;
  }();
  return t;
}

double g_integral(double u) {
  const double hi = std::min(u, 3.0);
  if (hi <= 2.0) return 0.0;
  const auto& t = g_table();
  const int k = std::min(kPanels - 1, static_cast<int>((hi - 2.0) * kPanels));
  const double edge = 2.0 + double(k) / kPanels;
  return t[k] + gauss_panel(edge, hi);
}

}  // namespace

CutoffProfileSquared::CutoffProfileSquared(double c_prime) : c_prime_(c_prime) {
  if (c_prime == 0.0) throw ArgumentError("cutoff_profile_squared: c' must be nonzero");
  i0_ = g_integral(3.0);
  amp_ = c_prime * c_prime - 4.0 - i0_;
}

Taylor CutoffProfileSquared::bridge_jet(double u, int order) const {
  // Taylor of F' around u, then integrate coefficientwise.
  const int K = std::max(order - 1, 0);
  const Taylor v = Taylor::variable(1, K, 0, u);
  Taylor fp = 2.0 * v * (1.0 - compose_univariate(v - 2.0, smooth_step_jet(u - 2.0, K)));
  const Taylor v1 = Taylor::variable(1, K + 1, 0, u);
  const Taylor s1 = compose_univariate((v1 - 2.0) * 0.5, smooth_step_jet((u - 2.0) / 2.0, K + 1));
  Taylor r(1, order);
  r[0] = 4.0 + g_integral(u) + amp_ * s1[0];
  for (int k = 1; k <= order; ++k) r[k] = (fp[k - 1] + amp_ * k * s1[k]) / k;
  return r;
}

Taylor CutoffProfileSquared::jet(double t, int order) const {
  const double u = std::abs(t);
  Taylor r(1, order);
  if (u <= 2.0) {
    r[0] = t * t;
    if (order >= 1) r[1] = 2.0 * t;
    if (order >= 2) r[2] = 1.0;
    return r;
  }
  if (u >= 4.0) {
    r[0] = c_prime_ * c_prime_;
    return r;
  }
  r = bridge_jet(u, order);
  if (t < 0.0)
    for (int k = 1; k <= order; k += 2) r[k] = -r[k];
  return r;
}

double CutoffProfileSquared::value(double t) const {
  const double u = std::abs(t);
  if (u <= 2.0) return t * t;
  if (u >= 4.0) return c_prime_ * c_prime_;
  return 4.0 + g_integral(u) + amp_ * smooth_step((u - 2.0) / 2.0);
}

double CutoffProfileSquared::derivative(double t, int k) const {
  return jet(t, k)[k] * factorial(k);
}

double CutoffProfileSquared::odd_value(double t) const {
  if (std::abs(t) <= 2.0) return t;
  return std::copysign(std::sqrt(value(t)), t);
}

Taylor CutoffProfileSquared::odd_jet(double t, int order) const {
  if (std::abs(t) <= 2.0) {
    Taylor r(1, order);
    r[0] = t;
    if (order >= 1) r[1] = 1.0;
    return r;
  }
  Taylor r = sqrt(jet(t, order));
  if (t < 0.0) r *= -1.0;
  return r;
}

double band_bump(double s) {
  return smooth_step((s - 1.0) / 0.2) * (1.0 - smooth_step((s - 2.5) / 0.5));
}

Taylor band_bump_jet(double s0, int order) {
  const Taylor s = Taylor::variable(1, order, 0, s0);
  const Taylor up = compose_univariate((s - 1.0) * 5.0, smooth_step_jet((s0 - 1.0) / 0.2, order));
  const Taylor down = compose_univariate((s - 2.5) * 2.0, smooth_step_jet((s0 - 2.5) / 0.5, order));
  return up * (1.0 - down);
}

DyadicPartition::DyadicPartition(int J) : levels(J) {
  if (J < 1) throw ArgumentError("dyadic_partition: J must be >= 1");
}

double DyadicPartition::eta(double t) { return smooth_step(std::abs(t) - 1.0); }

double DyadicPartition::rho(double t) { return eta(t) - eta(t / 2.0); }

double DyadicPartition::piece(int j, double t) const { return rho(std::ldexp(t, j)); }

double DyadicPartition::partial_sum(double t, int l) const {
  double s = eta(t);
  for (int j = 1; j <= l; ++j) s += piece(j, t);
  return s;
}

DyadicPartition dyadic_partition(int J) { return DyadicPartition(J); }

}  // namespace weylab
