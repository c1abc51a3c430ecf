#pragma once

#include <vector>

#include "weylab/taylor.hpp"

namespace weylab {

/// psi(y) = 0 for y <= 0, 1 for y >= 1, 1/(1 + exp(1/y - 1/(1-y))) in between.
/// All derivatives vanish at both ends.
double smooth_step(double y);

/// Taylor coefficients of smooth_step around y0, orders 0..order.
Taylor smooth_step_jet(double y0, int order);

/// Univariate composite f(a) where f is given by its Taylor expansion at a.value().
template <class T>
TaylorT<T> compose_univariate(const TaylorT<T>& a, const Taylor& f);

/// The square of the rescaled coordinate x~1, as a function of t = x1.
///
/// F(t) = t^2 on |t| <= 2, F(t) = c'^2 on |t| >= 4. On the bridge u = |t| in (2,4):
///   F(u) = 4 + G(u) + A s(u),  G(u) = int_2^{min(u,3)} 2v (1 - psi(v - 2)) dv,
///   s(u) = psi((u - 2)/2),      A = c'^2 - 4 - G(3).
/// F' = 2u(1 - psi(u-2)) + A s'(u) continues 2t with every derivative at u=2 and
/// vanishes to all orders at u=4.
class CutoffProfileSquared {
 public:
  explicit CutoffProfileSquared(double c_prime = 3.0);

  double c_prime() const { return c_prime_; }
  double value(double t) const;
  /// Taylor coefficients around t, orders 0..order.
  Taylor jet(double t, int order) const;
  /// k-th derivative at t.
  double derivative(double t, int k) const;

  /// Smallest c'^2 for which the bridge is monotone in |t|.
  double monotone_threshold() const { return 4.0 + i0_; }
  bool monotone() const { return c_prime_ * c_prime_ >= monotone_threshold(); }

  /// Smooth odd companion: t on |t| <= 2, sgn(t) sqrt(F) elsewhere. Its square is F.
  double odd_value(double t) const;
  Taylor odd_jet(double t, int order) const;

 private:
  Taylor bridge_jet(double u, int order) const;
  double c_prime_;
  double i0_;
  double amp_;
};

/// Band bump: 0 outside [1,3], 1 on [1.2, 2.5], smooth.
double band_bump(double s);
Taylor band_bump_jet(double s0, int order);

/// eta(t) = 0 for |t| <= 1, 1 for |t| >= 2; rho(t) = eta(t) - eta(t/2).
struct DyadicPartition {
  int levels = 1;

  explicit DyadicPartition(int J);

  static double eta(double t);
  static double rho(double t);
  /// rho(2^j t)
  double piece(int j, double t) const;
  /// eta(t) + sum_{j=1}^{l} rho(2^j t), accumulated term by term.
  double partial_sum(double t, int l) const;
  double partial_sum(double t) const { return partial_sum(t, levels); }
};

DyadicPartition dyadic_partition(int J);

}  // namespace weylab
