#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "weylab/cutoff.hpp"
#include "weylab/taylor.hpp"

namespace weylab {

/// Smooth real function of x in R^n with exact jets. Each instance carries a
/// unique id so that symbolic coefficients can be canonicalized.
class XFunction {
 public:
  using JetFn = std::function<Taylor(std::span<const double>, int)>;

  XFunction(std::string name, int n, JetFn jet);

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  std::uint64_t id() const { return id_; }

  Taylor jet(std::span<const double> x, int order) const { return jet_(x, order); }
  double value(std::span<const double> x) const { return jet_(x, 0).value(); }
  double derivative(std::span<const double> x, const MultiIndex& gamma) const;

 private:
  std::string name_;
  int n_;
  std::uint64_t id_;
  JetFn jet_;
};

using XFunctionPtr = std::shared_ptr<const XFunction>;

namespace xf {
XFunctionPtr coordinate(int n, int axis);
XFunctionPtr monomial(int n, const MultiIndex& powers);
/// exp(-|x - center|^2 / (2 sigma^2))
XFunctionPtr gaussian(int n, std::span<const double> center, double sigma);
/// x~1^2 along `axis`.
XFunctionPtr cutoff_square(int n, int axis, std::shared_ptr<const CutoffProfileSquared> profile);
/// smooth odd root of cutoff_square along `axis`.
XFunctionPtr cutoff_odd(int n, int axis, std::shared_ptr<const CutoffProfileSquared> profile);
XFunctionPtr custom(std::string name, int n, XFunction::JetFn jet);
}  // namespace xf

/// Symbolic linear combination of products of derivatives of XFunctions:
///   sum_t w_t prod_f d^{gamma_f} f.
class Coefficient {
 public:
  struct Factor {
    XFunctionPtr f;
    MultiIndex gamma{};
  };
  struct Term {
    cdouble w{0.0, 0.0};
    std::vector<Factor> factors;
  };

  Coefficient() = default;
  explicit Coefficient(int n) : n_(n) {}

  static Coefficient constant(int n, cdouble w);
  static Coefficient of(XFunctionPtr f, cdouble w = 1.0);

  int dim() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// Largest derivative order any factor needs.
  int max_factor_order() const;

  Coefficient& operator+=(const Coefficient& o);
  Coefficient& operator*=(cdouble s);
  friend Coefficient operator+(Coefficient a, const Coefficient& b) { return a += b; }
  friend Coefficient operator*(Coefficient a, cdouble s) { return a *= s; }
  friend Coefficient operator*(const Coefficient& a, const Coefficient& b);

  Coefficient derivative(const MultiIndex& gamma) const;

  /// Sorts factors and merges equal monomials. Drops terms with |w| <= drop_tol.
  void canonicalize(double drop_tol = 0.0);

  cdouble value(std::span<const double> x) const;
  /// Jet in n variables of the given order.
  CTaylor jet(std::span<const double> x, int order) const;

  /// Largest |w| over terms (after canonicalization this measures distance from 0).
  double max_weight() const;

 private:
  int n_ = 0;
  std::vector<Term> terms_;
};

}  // namespace weylab
