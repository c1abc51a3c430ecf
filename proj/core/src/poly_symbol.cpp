#include "weylab/poly_symbol.hpp"

#include <cmath>

namespace weylab {

namespace {

void for_each_below(const MultiIndex& a, int n, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex g{};
  while (true) {
    fn(g);
    int v = 0;
    while (v < n) {
      if (g[v] < a[v]) {
        ++g[v];
        break;
      }
      g[v] = 0;
      ++v;
    }
    if (v == n) return;
  }
}

double multi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int v : a) f *= factorial(v);
  return f;
}

MultiIndex sub(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] - b[i];
  return r;
}

MultiIndex add(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex r{};
  for (int i = 0; i < kMaxDim; ++i) r[i] = a[i] + b[i];
  return r;
}

bool leq(const MultiIndex& a, const MultiIndex& b) {
  for (int i = 0; i < kMaxDim; ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

PolySymbol::PolySymbol(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw ArgumentError("PolySymbol: dimension out of range");
}

PolySymbol PolySymbol::constant(int n, cdouble c) {
  PolySymbol s(n);
  s.add_term(MultiIndex{}, Coefficient::constant(n, c));
  return s;
}

PolySymbol PolySymbol::monomial(const Coefficient& c, const MultiIndex& alpha) {
  PolySymbol s(c.dim());
  s.add_term(alpha, c);
  return s;
}

PolySymbol PolySymbol::xi_power(int n, const MultiIndex& alpha, cdouble w) {
  PolySymbol s(n);
  s.add_term(alpha, Coefficient::constant(n, w));
  return s;
}

int PolySymbol::degree() const {
  int d = 0;
  for (const auto& [a, c] : terms_)
    if (!c.empty()) d = std::max(d, order(a));
  return d;
}

void PolySymbol::add_term(const MultiIndex& alpha, const Coefficient& c) {
  if (c.empty()) return;
  for (int i = n_; i < kMaxDim; ++i)
    if (alpha[i] != 0) throw ArgumentError("PolySymbol: multi-index exceeds dimension");
  auto it = terms_.find(alpha);
  if (it == terms_.end())
    terms_.emplace(alpha, c);
  else
    it->second += c;
}

PolySymbol& PolySymbol::operator+=(const PolySymbol& o) {
  if (n_ == 0) n_ = o.n_;
  for (const auto& [a, c] : o.terms_) add_term(a, c);
  return *this;
}

PolySymbol& PolySymbol::operator-=(const PolySymbol& o) { return *this += o * cdouble(-1.0); }

PolySymbol& PolySymbol::operator*=(cdouble s) {
  for (auto& [a, c] : terms_) c *= s;
  std::erase_if(terms_, [](const auto& kv) { return kv.second.empty(); });
  return *this;
}

PolySymbol operator*(const PolySymbol& a, const PolySymbol& b) {
  PolySymbol r(a.n_);
  for (const auto& [aa, ca] : a.terms_)
    for (const auto& [ab, cb] : b.terms_) r.add_term(add(aa, ab), ca * cb);
  return r;
}

PolySymbol PolySymbol::derivative(const MultiIndex& beta, const MultiIndex& alpha) const {
  PolySymbol r(n_);
  for (const auto& [a, c] : terms_) {
    if (!leq(alpha, a)) continue;
    const double f = multi_factorial(a) / multi_factorial(sub(a, alpha));
    Coefficient d = order(beta) ? c.derivative(beta) : c;
    r.add_term(sub(a, alpha), d * cdouble(f));
  }
  return r;
}

cdouble PolySymbol::value(const PhasePoint& p) const {
  cdouble s = 0.0;
  for (const auto& [a, c] : terms_) {
    double xp = 1.0;
    for (int i = 0; i < n_; ++i) xp *= std::pow(p.xi[i], a[i]);
    s += c.value(p.xs()) * xp;
  }
  return s;
}

CTaylor PolySymbol::jet(const PhasePoint& p, int order) const {
  const int m = 2 * n_;
  CTaylor s(m, order);
  std::vector<int> xmap(n_);
  for (int i = 0; i < n_; ++i) xmap[i] = i;
  for (const auto& [a, c] : terms_) {
    CTaylor term = c.jet(p.xs(), order).embed(m, xmap, order);
    for (int i = 0; i < n_; ++i) {
      const CTaylor v = CTaylor::variable(m, order, n_ + i, p.xi[i]);
      for (int k = 0; k < a[i]; ++k) term = term * v;
    }
    s += term;
  }
  return s;
}

void PolySymbol::canonicalize(double drop_tol) {
  for (auto& [a, c] : terms_) c.canonicalize(drop_tol);
  std::erase_if(terms_, [](const auto& kv) { return kv.second.empty(); });
}

double PolySymbol::max_weight() const {
  double m = 0.0;
  for (const auto& [a, c] : terms_) m = std::max(m, c.max_weight());
  return m;
}

PolySymbol jt_transport(const PolySymbol& a, double t) {
  const int n = a.dim();
  PolySymbol r(n);
  const cdouble base(0.0, t / (2.0 * kPi));
  for (const auto& [alpha, c] : a.terms()) {
    for_each_below(alpha, n, [&](const MultiIndex& g) {
      const int k = order(g);
      if (k > 0 && t == 0.0) return;
      const double comb = multi_factorial(alpha) / (multi_factorial(sub(alpha, g)) * multi_factorial(g));
      const cdouble w = std::pow(base, k) * comb;
      r.add_term(sub(alpha, g), (k ? c.derivative(g) : c) * w);
    });
  }
  r.canonicalize();
  return r;
}

PolySymbol moyal_sharp(const PolySymbol& a, const PolySymbol& b) {
  const int n = a.dim();
  if (b.dim() != n) throw ArgumentError("moyal_sharp: dimension mismatch");
  MultiIndex da{}, db{};
  for (int i = 0; i < n; ++i) da[i] = db[i] = 0;
  for (const auto& [al, c] : a.terms())
    for (int i = 0; i < n; ++i) da[i] = std::max(da[i], al[i]);
  for (const auto& [al, c] : b.terms())
    for (int i = 0; i < n; ++i) db[i] = std::max(db[i], al[i]);
  const cdouble kappa = 1.0 / cdouble(0.0, 4.0 * kPi);
  PolySymbol r(n);
  for_each_below(da, n, [&](const MultiIndex& al) {
    for_each_below(db, n, [&](const MultiIndex& be) {
      const int k = order(al) + order(be);
      const double sign = (order(be) % 2) ? -1.0 : 1.0;
      const cdouble w = std::pow(kappa, k) * sign / (multi_factorial(al) * multi_factorial(be));
      const PolySymbol left = a.derivative(be, al);
      if (left.terms().empty()) return;
      const PolySymbol right = b.derivative(al, be);
      if (right.terms().empty()) return;
      r += (left * right) * w;
    });
  });
  r.canonicalize();
  return r;
}

}  // namespace weylab
