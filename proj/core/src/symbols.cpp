#include "weylab/symbols.hpp"

#include <cmath>

namespace weylab {

SymbolEvaluator to_evaluator(const PolySymbol& s, std::string name) {
  SymbolEvaluator e;
  e.n = s.dim();
  e.name = std::move(name);
  e.value = [s](const PhasePoint& p) { return s.value(p); };
  e.jet = [s](const PhasePoint& p, int order) { return s.jet(p, order); };
  return e;
}

namespace {

Taylor japanese_jet(const PhasePoint& p, int order) {
  const int m = 2 * p.n;
  Taylor q = Taylor::constant(m, order, 1.0);
  for (int i = 0; i < m; ++i) {
    const Taylor v = Taylor::variable(m, order, i, p.coord(i));
    q += v * v;
  }
  return sqrt(q);
}

Taylor xsq_jet(const PhasePoint& p, int order) {
  const int m = 2 * p.n;
  Taylor q(m, order);
  for (int i = 0; i < p.n; ++i) {
    const Taylor v = Taylor::variable(m, order, i, p.x[i]);
    q += v * v;
  }
  return q;
}

}  // namespace

namespace sym {

SymbolEvaluator constant(int n, cdouble c) {
  SymbolEvaluator e;
  e.n = n;
  e.name = "constant";
  e.value = [c](const PhasePoint&) { return c; };
  e.jet = [n, c](const PhasePoint&, int order) { return CTaylor::constant(2 * n, order, c); };
  return e;
}

SymbolEvaluator japanese(int n) {
  SymbolEvaluator e;
  e.n = n;
  e.name = "japanese";
  e.value = [](const PhasePoint& p) { return cdouble(japanese_bracket(p)); };
  e.jet = [](const PhasePoint& p, int order) { return japanese_jet(p, order).cast<cdouble>(); };
  return e;
}

SymbolEvaluator x_squared(int n) {
  SymbolEvaluator e;
  e.n = n;
  e.name = "x_squared";
  e.value = [](const PhasePoint& p) { return cdouble(p.x_sq()); };
  e.jet = [](const PhasePoint& p, int order) { return xsq_jet(p, order).cast<cdouble>(); };
  return e;
}

SymbolEvaluator exp_abs_x(int n) {
  SymbolEvaluator e;
  e.n = n;
  e.name = "exp_abs_x";
  e.value = [](const PhasePoint& p) { return cdouble(std::exp(std::sqrt(p.x_sq()))); };
  return e;
}

SymbolEvaluator product(const SymbolEvaluator& a, const SymbolEvaluator& b) {
  SymbolEvaluator e;
  e.n = a.n;
  e.name = a.name + "*" + b.name;
  e.value = [a, b](const PhasePoint& p) { return a.value(p) * b.value(p); };
  if (a.has_jet() && b.has_jet())
    e.jet = [a, b](const PhasePoint& p, int order) { return a.jet(p, order) * b.jet(p, order); };
  return e;
}

SymbolEvaluator real_power(const SymbolEvaluator& s, double p) {
  SymbolEvaluator e;
  e.n = s.n;
  e.name = s.name + "^" + std::to_string(p);
  e.value = [s, p](const PhasePoint& x) { return cdouble(std::pow(s.value(x).real(), p)); };
  if (s.has_jet())
    e.jet = [s, p](const PhasePoint& x, int order) {
      CTaylor c = s.jet(x, order);
      Taylor r(c.nvars(), order);
      for (int k = 0; k < r.size(); ++k) r[k] = c[k].real();
      return pow(r, p).cast<cdouble>();
    };
  return e;
}

}  // namespace sym

PolySymbol daho_symbol(std::shared_ptr<const CutoffProfileSquared> profile) {
  PolySymbol a = PolySymbol::xi_power(2, MultiIndex{2, 0});
  a.add_term(MultiIndex{0, 2}, Coefficient::of(xf::cutoff_square(2, 0, std::move(profile))));
  return a;
}

PolySymbol daho_symbol(double c_prime) {
  return daho_symbol(std::make_shared<const CutoffProfileSquared>(c_prime));
}

PolySymbol harmonic_symbol(int n) {
  PolySymbol a(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex al{};
    al[i] = 2;
    a.add_term(al, Coefficient::constant(n, 1.0));
  }
  return a;
}

PolySymbol grushin_pure_symbol() {
  PolySymbol a = PolySymbol::xi_power(2, MultiIndex{2, 0});
  a.add_term(MultiIndex{0, 2}, Coefficient::of(xf::monomial(2, MultiIndex{2, 0})));
  return a;
}

PolySymbol sum_of_squares_symbol(const HormanderSystem& sys) {
  const int n = sys.n;
  PolySymbol a(n);
  for (const auto& f : sys.fields) {
    PolySymbol lin(n);
    for (int i = 0; i < n; ++i) {
      if (!f.coeff[i]) continue;
      MultiIndex al{};
      al[i] = 1;
      lin.add_term(al, Coefficient::of(f.coeff[i]));
    }
    a += lin * lin;
  }
  a.canonicalize();
  return a;
}

PolySymbol x_squared_symbol(int n) {
  PolySymbol a(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex p{};
    p[i] = 2;
    a.add_term(MultiIndex{}, Coefficient::of(xf::monomial(n, p)));
  }
  return a;
}

PolySymbol full_symbol(const PolySymbol& a2) { return a2 + x_squared_symbol(a2.dim()); }

namespace {

cdouble fd_once(const SymbolEvaluator& s, const std::vector<int>& gamma, const PhasePoint& p,
                const std::vector<double>& h) {
  const int m = 2 * s.n;
  std::vector<int> active;
  for (int i = 0; i < m; ++i)
    if (gamma[i] > 0) active.push_back(i);
  std::vector<int> j(active.size(), 0);
  cdouble sum = 0.0;
  while (true) {
    PhasePoint q = p;
    double w = 1.0;
    for (size_t a = 0; a < active.size(); ++a) {
      const int i = active[a];
      const int k = gamma[i];
      q.set_coord(i, p.coord(i) + (0.5 * k - j[a]) * h[i]);
      w *= ((j[a] % 2) ? -1.0 : 1.0) * binomial(k, j[a]) / std::pow(h[i], k);
    }
    sum += w * s.value(q);
    size_t a = 0;
    while (a < active.size() && ++j[a] > gamma[active[a]]) j[a++] = 0;
    if (a == active.size()) break;
  }
  return sum;
}

}  // namespace

cdouble derivative(const SymbolEvaluator& s, const MultiIndex& beta, const MultiIndex& alpha,
                   const PhasePoint& p, const DerivativeOptions& opt) {
  const int n = s.n;
  const int k = order(beta) + order(alpha);
  if (k > opt.max_order) throw UnsupportedError("derivative: order beyond configured maximum");
  std::vector<int> gamma(2 * n);
  for (int i = 0; i < n; ++i) {
    gamma[i] = beta[i];
    gamma[n + i] = alpha[i];
  }
  if (s.has_jet() && !opt.force_fd) return s.jet(p, k).derivative(gamma);
  if (k == 0) return s.value(p);
  std::vector<double> h(2 * n);
  for (int i = 0; i < 2 * n; ++i) h[i] = opt.rel_step * std::max(1.0, std::abs(p.coord(i)));
  const cdouble d1 = fd_once(s, gamma, p, h);
  for (auto& v : h) v *= 0.5;
  const cdouble d2 = fd_once(s, gamma, p, h);
  return (4.0 * d2 - d1) / 3.0;
}

CheckReport check_glaeser_bound(const UnivariateC2& f, const std::vector<double>& sample,
                         const std::vector<double>& covering, double constant) {
  CheckReport r;
  r.kind = "glaeser";
  r.sample_size = sample.size();
  double sup2 = 0.0;
  for (double t : covering) sup2 = std::max(sup2, std::abs(f.d2f(t)));
  for (double t : sample) sup2 = std::max(sup2, std::abs(f.d2f(t)));
  r.constants["sup_f2"] = sup2;
  r.constants["constant"] = constant;
  double worst = 0.0;
  for (double t : sample) {
    const double v = f.f(t);
    if (v < 0.0) throw PreconditionError("check_glaeser_bound: f is negative at a sample point");
    const double lhs = f.df(t) * f.df(t);
    const double rhs = constant * sup2 * v;
    if (lhs > 0.0) worst = std::max(worst, rhs > 0.0 ? lhs / rhs : INFINITY);
    if (lhs > rhs * (1.0 + 1e-12) + 1e-300) r.add_witness({{t}, {}, lhs, rhs, "(f')^2 > c |f''| f"});
  }
  r.constants["worst_ratio"] = worst;
  r.vacuous = sample.empty();
  r.pass = !r.vacuous && r.witnesses.empty();
  return r;
}

}  // namespace weylab
