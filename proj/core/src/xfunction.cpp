#include "weylab/xfunction.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

namespace weylab {

namespace {
std::atomic<std::uint64_t> g_next_id{1};

std::vector<int> to_vec(const MultiIndex& a, int n) { return std::vector<int>(a.begin(), a.begin() + n); }
}  // namespace

XFunction::XFunction(std::string name, int n, JetFn jet)
    : name_(std::move(name)), n_(n), id_(g_next_id.fetch_add(1)), jet_(std::move(jet)) {
  if (n < 1 || n > kMaxDim) throw ArgumentError("XFunction: dimension out of range");
}

double XFunction::derivative(std::span<const double> x, const MultiIndex& gamma) const {
  const auto g = to_vec(gamma, n_);
  return jet(x, order(gamma)).derivative(g);
}

namespace xf {

XFunctionPtr coordinate(int n, int axis) {
  MultiIndex p{};
  p[axis] = 1;
  auto f = monomial(n, p);
  return f;
}

XFunctionPtr monomial(int n, const MultiIndex& powers) {
  std::string name = "x^(";
  for (int i = 0; i < n; ++i) name += (i ? "," : "") + std::to_string(powers[i]);
  name += ")";
  return std::make_shared<XFunction>(name, n, [n, powers](std::span<const double> x, int order) {
    Taylor r = Taylor::constant(n, order, 1.0);
    for (int i = 0; i < n; ++i) {
      const Taylor xi = Taylor::variable(n, order, i, x[i]);
      for (int k = 0; k < powers[i]; ++k) r = r * xi;
    }
    return r;
  });
}

XFunctionPtr gaussian(int n, std::span<const double> center, double sigma) {
  std::vector<double> c(center.begin(), center.end());
  if (static_cast<int>(c.size()) != n) throw ArgumentError("gaussian: center length mismatch");
  if (!(sigma > 0.0)) throw ArgumentError("gaussian: sigma must be positive");
  return std::make_shared<XFunction>("gauss", n, [n, c, sigma](std::span<const double> x, int order) {
    Taylor q(n, order);
    for (int i = 0; i < n; ++i) {
      const Taylor d = Taylor::variable(n, order, i, x[i] - c[i]);
      q += d * d;
    }
    return exp(q * (-0.5 / (sigma * sigma)));
  });
}

XFunctionPtr cutoff_square(int n, int axis, std::shared_ptr<const CutoffProfileSquared> profile) {
  return std::make_shared<XFunction>(
      "xt1^2", n, [n, axis, profile](std::span<const double> x, int order) {
        std::array<int, 1> map{axis};
        return profile->jet(x[axis], order).embed(n, map, order);
      });
}

XFunctionPtr cutoff_odd(int n, int axis, std::shared_ptr<const CutoffProfileSquared> profile) {
  return std::make_shared<XFunction>("xt1", n, [n, axis, profile](std::span<const double> x, int order) {
    std::array<int, 1> map{axis};
    return profile->odd_jet(x[axis], order).embed(n, map, order);
  });
}

XFunctionPtr custom(std::string name, int n, XFunction::JetFn jet) {
  return std::make_shared<XFunction>(std::move(name), n, std::move(jet));
}

}  // namespace xf

Coefficient Coefficient::constant(int n, cdouble w) {
  Coefficient c(n);
  if (w != 0.0) c.terms_.push_back({w, {}});
  return c;
}

Coefficient Coefficient::of(XFunctionPtr f, cdouble w) {
  Coefficient c(f->dim());
  c.terms_.push_back({w, {{std::move(f), MultiIndex{}}}});
  return c;
}

int Coefficient::max_factor_order() const {
  int k = 0;
  for (const auto& t : terms_)
    for (const auto& f : t.factors) k = std::max(k, order(f.gamma));
  return k;
}

Coefficient& Coefficient::operator+=(const Coefficient& o) {
  if (n_ == 0) n_ = o.n_;
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

Coefficient& Coefficient::operator*=(cdouble s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& t : terms_) t.w *= s;
  return *this;
}

Coefficient operator*(const Coefficient& a, const Coefficient& b) {
  Coefficient r(a.n_ ? a.n_ : b.n_);
  for (const auto& ta : a.terms_)
    for (const auto& tb : b.terms_) {
      Coefficient::Term t{ta.w * tb.w, ta.factors};
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      r.terms_.push_back(std::move(t));
    }
  r.canonicalize();
  return r;
}

Coefficient Coefficient::derivative(const MultiIndex& gamma) const {
  Coefficient cur = *this;
  for (int v = 0; v < n_; ++v) {
    for (int rep = 0; rep < gamma[v]; ++rep) {
      Coefficient next(n_);
      for (const auto& t : cur.terms_) {
        for (size_t i = 0; i < t.factors.size(); ++i) {
          Term d = t;
          d.factors[i].gamma[v] += 1;
          next.terms_.push_back(std::move(d));
        }
      }
      next.canonicalize();
      cur = std::move(next);
    }
  }
  return cur;
}

namespace {

bool factor_less(const Coefficient::Factor& a, const Coefficient::Factor& b) {
  if (a.f->id() != b.f->id()) return a.f->id() < b.f->id();
  return a.gamma < b.gamma;
}

bool factors_less(const std::vector<Coefficient::Factor>& a, const std::vector<Coefficient::Factor>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), factor_less);
}

bool factors_equal(const std::vector<Coefficient::Factor>& a, const std::vector<Coefficient::Factor>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i].f->id() != b[i].f->id() || a[i].gamma != b[i].gamma) return false;
  return true;
}

}  // namespace

void Coefficient::canonicalize(double drop_tol) {
  for (auto& t : terms_) std::sort(t.factors.begin(), t.factors.end(), factor_less);
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return factors_less(a.factors, b.factors); });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && factors_equal(merged.back().factors, t.factors))
      merged.back().w += t.w;
    else
      merged.push_back(std::move(t));
  }
  std::erase_if(merged, [drop_tol](const Term& t) { return std::abs(t.w) <= drop_tol; });
  terms_ = std::move(merged);
}

cdouble Coefficient::value(std::span<const double> x) const {
  std::map<std::uint64_t, Taylor> cache;
  const int K = max_factor_order();
  cdouble s = 0.0;
  for (const auto& t : terms_) {
    cdouble p = t.w;
    for (const auto& f : t.factors) {
      auto it = cache.find(f.f->id());
      if (it == cache.end()) it = cache.emplace(f.f->id(), f.f->jet(x, K)).first;
      p *= it->second.derivative(to_vec(f.gamma, n_));
    }
    s += p;
  }
  return s;
}

CTaylor Coefficient::jet(std::span<const double> x, int order) const {
  std::map<std::uint64_t, Taylor> cache;
  const int K = max_factor_order() + order;
  CTaylor s(n_, order);
  for (const auto& t : terms_) {
    CTaylor p = CTaylor::constant(n_, order, t.w);
    for (const auto& f : t.factors) {
      auto it = cache.find(f.f->id());
      if (it == cache.end()) it = cache.emplace(f.f->id(), f.f->jet(x, K)).first;
      const auto g = to_vec(f.gamma, n_);
      const Taylor d = it->second.differentiate(g).with_order(order);
      p = p * d.cast<cdouble>();
    }
    s += p;
  }
  return s;
}

double Coefficient::max_weight() const {
  double m = 0.0;
  for (const auto& t : terms_) m = std::max(m, std::abs(t.w));
  return m;
}

}  // namespace weylab
