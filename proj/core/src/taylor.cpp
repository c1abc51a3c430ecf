#include "weylab/taylor.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace weylab {

std::uint64_t TaylorLayout::key(std::span<const int> alpha) const {
  std::uint64_t k = 0;
  for (int i = nvars - 1; i >= 0; --i) k = k * static_cast<std::uint64_t>(order + 1) + alpha[i];
  return k;
}

int TaylorLayout::find(std::span<const int> alpha) const {
  int deg = 0;
  for (int i = 0; i < nvars; ++i) {
    if (alpha[i] < 0) return -1;
    deg += alpha[i];
  }
  if (deg > order) return -1;
  auto it = lookup.find(key(alpha));
  return it == lookup.end() ? -1 : it->second;
}

namespace {

void enumerate(int nvars, int remaining, int var, std::vector<int>& cur,
               std::vector<std::vector<int>>& out) {
  if (var == nvars - 1) {
    cur[var] = remaining;
    out.push_back(cur);
    return;
  }
  for (int a = remaining; a >= 0; --a) {
    cur[var] = a;
    enumerate(nvars, remaining - a, var + 1, cur, out);
  }
}

std::shared_ptr<TaylorLayout> build_layout(int nvars, int order) {
  auto L = std::make_shared<TaylorLayout>();
  L->nvars = nvars;
  L->order = order;
  std::vector<int> cur(nvars, 0);
  for (int d = 0; d <= order; ++d) {
    const size_t before = L->index.size();
    if (nvars == 0) {
      if (d == 0) L->index.push_back({});
    } else {
      enumerate(nvars, d, 0, cur, L->index);
    }
    for (size_t k = before; k < L->index.size(); ++k) L->degree.push_back(d);
  }
  for (size_t k = 0; k < L->index.size(); ++k) {
    double f = 1.0;
    for (int a : L->index[k]) f *= factorial(a);
    L->index_factorial.push_back(f);
    L->lookup[L->key(L->index[k])] = static_cast<int>(k);
  }
  std::vector<int> sum(nvars);
  for (int i = 0; i < L->size(); ++i) {
    for (int j = 0; j < L->size(); ++j) {
      if (L->degree[i] + L->degree[j] > order) continue;
      for (int v = 0; v < nvars; ++v) sum[v] = L->index[i][v] + L->index[j][v];
      L->product.push_back({i, j, L->find(sum)});
    }
  }
  return L;
}

}  // namespace

std::shared_ptr<const TaylorLayout> TaylorLayout::get(int nvars, int order) {
  if (nvars < 0 || order < 0) throw ArgumentError("TaylorLayout: negative size");
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const TaylorLayout>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{nvars, order}];
  if (!slot) slot = build_layout(nvars, order);
  return slot;
}

template <class T>
TaylorT<T>::TaylorT(int nvars, int order)
    : layout_(TaylorLayout::get(nvars, order)), c_(layout_->size(), T(0)) {}

template <class T>
TaylorT<T> TaylorT<T>::constant(int nvars, int order, T c) {
  TaylorT r(nvars, order);
  r.c_[0] = c;
  return r;
}

template <class T>
TaylorT<T> TaylorT<T>::variable(int nvars, int order, int var, T at) {
  TaylorT r(nvars, order);
  r.c_[0] = at;
  if (order >= 1) {
    std::vector<int> e(nvars, 0);
    e[var] = 1;
    r.c_[r.layout_->find(e)] = T(1);
  }
  return r;
}

template <class T>
T TaylorT<T>::derivative(std::span<const int> alpha) const {
  const int k = layout_->find(alpha);
  if (k < 0) return T(0);
  return c_[k] * layout_->index_factorial[k];
}

template <class T>
TaylorT<T>& TaylorT<T>::operator+=(const TaylorT& o) {
  for (size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

template <class T>
TaylorT<T>& TaylorT<T>::operator-=(const TaylorT& o) {
  for (size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

template <class T>
TaylorT<T>& TaylorT<T>::operator*=(T s) {
  for (auto& v : c_) v *= s;
  return *this;
}

template <class T>
TaylorT<T> TaylorT<T>::operator-() const {
  TaylorT r(*this);
  for (auto& v : r.c_) v = -v;
  return r;
}

template <class T>
TaylorT<T> TaylorT<T>::mul(const TaylorT& o) const {
  TaylorT r(nvars(), order());
  for (const auto& t : layout_->product) r.c_[t.k] += c_[t.i] * o.c_[t.j];
  return r;
}

template <class T>
TaylorT<T> TaylorT<T>::compose(std::span<const T> derivs) const {
  const int K = order();
  TaylorT d(*this);
  d.c_[0] = T(0);
  TaylorT r = constant(nvars(), K, derivs[K] / factorial(K));
  for (int k = K - 1; k >= 0; --k) {
    r = r.mul(d);
    r.c_[0] += derivs[k] / factorial(k);
  }
  return r;
}

template <class T>
TaylorT<T> TaylorT<T>::reciprocal() const {
  const T a0 = c_[0];
  std::vector<T> d(order() + 1);
  T inv = T(1) / a0;
  T p = inv;
  for (int k = 0; k <= order(); ++k) {
    d[k] = ((k % 2) ? T(-1) : T(1)) * factorial(k) * p;
    p *= inv;
  }
  return compose(d);
}

template <class T>
TaylorT<T> TaylorT<T>::differentiate(std::span<const int> gamma) const {
  int g = 0;
  for (int v = 0; v < nvars(); ++v) g += gamma[v];
  if (g > order()) throw UnsupportedError("Taylor: derivative order exceeds expansion order");
  TaylorT r(nvars(), order() - g);
  std::vector<int> src(nvars());
  for (int k = 0; k < r.size(); ++k) {
    const auto& b = r.layout_->index[k];
    for (int v = 0; v < nvars(); ++v) src[v] = b[v] + gamma[v];
    const int s = layout_->find(src);
    r.c_[k] = c_[s] * (layout_->index_factorial[s] / r.layout_->index_factorial[k]);
  }
  return r;
}

template <class T>
TaylorT<T> TaylorT<T>::embed(int new_nvars, std::span<const int> map, int new_order) const {
  TaylorT r(new_nvars, new_order);
  std::vector<int> b(new_nvars);
  for (int k = 0; k < size(); ++k) {
    if (layout_->degree[k] > new_order) continue;
    std::fill(b.begin(), b.end(), 0);
    for (int v = 0; v < nvars(); ++v) b[map[v]] += layout_->index[k][v];
    r.c_[r.layout_->find(b)] += c_[k];
  }
  return r;
}

template <class T>
TaylorT<T> TaylorT<T>::with_order(int new_order) const {
  std::vector<int> id(nvars());
  for (int v = 0; v < nvars(); ++v) id[v] = v;
  return embed(nvars(), id, new_order);
}

template class TaylorT<double>;
template class TaylorT<cdouble>;

Taylor exp(const Taylor& a) {
  std::vector<double> d(a.order() + 1, std::exp(a.value()));
  return a.compose(d);
}

Taylor log(const Taylor& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw ArgumentError("Taylor log: nonpositive argument");
  std::vector<double> d(a.order() + 1);
  d[0] = std::log(a0);
  double p = 1.0 / a0;
  for (int k = 1; k <= a.order(); ++k) {
    d[k] = ((k % 2) ? 1.0 : -1.0) * factorial(k - 1) * p;
    p /= a0;
  }
  return a.compose(d);
}

Taylor pow(const Taylor& a, double p) {
  const double a0 = a.value();
  if (!(a0 > 0.0)) throw ArgumentError("Taylor pow: nonpositive base");
  std::vector<double> d(a.order() + 1);
  double coef = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = coef * std::pow(a0, p - k);
    coef *= (p - k);
  }
  return a.compose(d);
}

Taylor sqrt(const Taylor& a) { return pow(a, 0.5); }

Taylor univariate_jet(std::span<const double> derivs) {
  const int K = static_cast<int>(derivs.size()) - 1;
  Taylor r(1, K);
  for (int k = 0; k <= K; ++k) r[k] = derivs[k] / factorial(k);
  return r;
}

}  // namespace weylab
