#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <span>
#include <vector>

#include "weylab/common.hpp"

namespace weylab {

/// Monomial layout for truncated Taylor polynomials in `nvars` variables of
/// total degree <= `order`. Shared and immutable once built.
struct TaylorLayout {
  int nvars = 0;
  int order = 0;
  std::vector<std::vector<int>> index;  // exponent vectors, graded order
  std::vector<int> degree;
  std::vector<double> index_factorial;  // alpha!
  struct Triple {
    int i, j, k;
  };
  std::vector<Triple> product;  // coefficient pairs feeding each output slot

  int find(std::span<const int> alpha) const;
  int size() const { return static_cast<int>(index.size()); }

  static std::shared_ptr<const TaylorLayout> get(int nvars, int order);

  std::unordered_map<std::uint64_t, int> lookup;
  std::uint64_t key(std::span<const int> alpha) const;
};

/// Truncated multivariate Taylor polynomial; coefficient c_a = d^a f / a!.
/// Arithmetic truncates at the layout order, so products and compositions
/// return exact derivatives of the composed function up to that order.
template <class T>
class TaylorT {
 public:
  TaylorT() = default;
  TaylorT(int nvars, int order);

  static TaylorT constant(int nvars, int order, T c);
  static TaylorT variable(int nvars, int order, int var, T at);

  int nvars() const { return layout_->nvars; }
  int order() const { return layout_->order; }
  const TaylorLayout& layout() const { return *layout_; }
  int size() const { return static_cast<int>(c_.size()); }

  T value() const { return c_[0]; }
  T& operator[](int k) { return c_[k]; }
  const T& operator[](int k) const { return c_[k]; }

  /// Partial derivative d^alpha f at the expansion point (zero beyond the order).
  T derivative(std::span<const int> alpha) const;

  TaylorT& operator+=(const TaylorT& o);
  TaylorT& operator-=(const TaylorT& o);
  TaylorT& operator*=(T s);
  TaylorT& operator+=(T s) {
    c_[0] += s;
    return *this;
  }

  TaylorT operator-() const;
  friend TaylorT operator+(TaylorT a, const TaylorT& b) { return a += b; }
  friend TaylorT operator-(TaylorT a, const TaylorT& b) { return a -= b; }
  friend TaylorT operator*(TaylorT a, T s) { return a *= s; }
  friend TaylorT operator*(T s, TaylorT a) { return a *= s; }
  friend TaylorT operator+(TaylorT a, T s) { return a += s; }
  friend TaylorT operator+(T s, TaylorT a) { return a += s; }
  friend TaylorT operator-(TaylorT a, T s) { return a += -s; }
  friend TaylorT operator-(T s, const TaylorT& a) { return (-a) += s; }
  friend TaylorT operator*(const TaylorT& a, const TaylorT& b) { return a.mul(b); }
  friend TaylorT operator/(const TaylorT& a, const TaylorT& b) { return a.mul(b.reciprocal()); }

  TaylorT mul(const TaylorT& o) const;

  /// f(this) given f^{(k)} at this->value() for k = 0..order.
  TaylorT compose(std::span<const T> derivs) const;

  TaylorT reciprocal() const;

  /// d^gamma of the polynomial; the order drops by |gamma|.
  TaylorT differentiate(std::span<const int> gamma) const;

  /// Re-expresses in a larger variable set: variable i becomes map[i].
  TaylorT embed(int new_nvars, std::span<const int> map, int new_order) const;

  /// Same polynomial truncated (or zero-extended) to another order.
  TaylorT with_order(int new_order) const;

  template <class U>
  TaylorT<U> cast() const;

  std::vector<T>& coeffs() { return c_; }
  const std::vector<T>& coeffs() const { return c_; }

 private:
  std::shared_ptr<const TaylorLayout> layout_;
  std::vector<T> c_;
  template <class U>
  friend class TaylorT;
};

using Taylor = TaylorT<double>;
using CTaylor = TaylorT<cdouble>;

// Univariate functions lifted to Taylor arguments (real only).
Taylor exp(const Taylor& a);
Taylor log(const Taylor& a);
Taylor sqrt(const Taylor& a);
Taylor pow(const Taylor& a, double p);

/// Jet of a univariate function: derivs[k] = d^k f(t0), packaged as a 1-variable Taylor.
Taylor univariate_jet(std::span<const double> derivs);

extern template class TaylorT<double>;
extern template class TaylorT<cdouble>;

template <class T>
template <class U>
TaylorT<U> TaylorT<T>::cast() const {
  TaylorT<U> r;
  r.layout_ = layout_;
  r.c_.resize(c_.size());
  for (size_t k = 0; k < c_.size(); ++k) r.c_[k] = static_cast<U>(c_[k]);
  return r;
}

}  // namespace weylab
