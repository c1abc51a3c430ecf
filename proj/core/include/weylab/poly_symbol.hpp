#pragma once

#include <map>

#include "weylab/xfunction.hpp"

namespace weylab {

/// a(x, xi) = sum_alpha c_alpha(x) xi^alpha with symbolic coefficients.
class PolySymbol {
 public:
  using Map = std::map<MultiIndex, Coefficient>;

  PolySymbol() = default;
  explicit PolySymbol(int n);

  static PolySymbol constant(int n, cdouble c);
  /// c(x) xi^alpha
  static PolySymbol monomial(const Coefficient& c, const MultiIndex& alpha);
  static PolySymbol xi_power(int n, const MultiIndex& alpha, cdouble w = 1.0);

  int dim() const { return n_; }
  const Map& terms() const { return terms_; }
  int degree() const;

  void add_term(const MultiIndex& alpha, const Coefficient& c);

  PolySymbol& operator+=(const PolySymbol& o);
  PolySymbol& operator-=(const PolySymbol& o);
  PolySymbol& operator*=(cdouble s);
  friend PolySymbol operator+(PolySymbol a, const PolySymbol& b) { return a += b; }
  friend PolySymbol operator-(PolySymbol a, const PolySymbol& b) { return a -= b; }
  friend PolySymbol operator*(PolySymbol a, cdouble s) { return a *= s; }
  friend PolySymbol operator*(cdouble s, PolySymbol a) { return a *= s; }
  /// Pointwise product.
  friend PolySymbol operator*(const PolySymbol& a, const PolySymbol& b);

  /// d_x^beta d_xi^alpha
  PolySymbol derivative(const MultiIndex& beta, const MultiIndex& alpha) const;

  cdouble value(const PhasePoint& p) const;
  /// Jet in the 2n variables (x, xi).
  CTaylor jet(const PhasePoint& p, int order) const;

  void canonicalize(double drop_tol = 0.0);
  /// Largest weight over all coefficients.
  double max_weight() const;

 private:
  int n_ = 0;
  Map terms_;
};

/// J_t = exp(i t / (2 pi) d_x . d_xi); J_t(x xi) = x xi + i t / (2 pi).
PolySymbol jt_transport(const PolySymbol& a, double t);

/// Weyl composition: weyl(a) weyl(b) = weyl(a # b).
PolySymbol moyal_sharp(const PolySymbol& a, const PolySymbol& b);

}  // namespace weylab
