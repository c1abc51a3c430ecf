#include "weylab/metric.hpp"

#include <cmath>
#include <random>

#include "weylab/parallel.hpp"

namespace weylab {

WeightEvaluator WeightEvaluator::from_symbol(PolySymbol a2, std::string name) {
  WeightEvaluator w;
  w.n = a2.dim();
  w.a2 = std::move(a2);
  w.name = std::move(name);
  return w;
}

WeightEvaluator WeightEvaluator::daho(double c_prime) { return from_symbol(daho_symbol(c_prime), "daho"); }

WeightEvaluator WeightEvaluator::harmonic(int n) { return from_symbol(harmonic_symbol(n), "harmonic"); }

WeightEvaluator WeightEvaluator::broken(int n) {
  WeightEvaluator w = from_symbol(harmonic_symbol(n), "broken");
  w.override_m = [](const PhasePoint& p) { return 0.5 * japanese_bracket(p); };
  return w;
}

WeightEvaluator WeightEvaluator::with_kind(MetricKind k) const {
  WeightEvaluator w = *this;
  w.kind = k;
  if (k == MetricKind::Shubin) w.name += "/shubin";
  return w;
}

double SplitMetricValue::operator()(std::span<const double> t, std::span<const double> tau) const {
  double st = 0.0, su = 0.0;
  for (double v : t) st += v * v;
  for (double v : tau) su += v * v;
  return ax * st + axi * su;
}

double eval_a(const WeightEvaluator& w, const PhasePoint& p) {
  const double a2 = w.a2.value(p).real();
  if (a2 < -1e-9) throw PreconditionError("eval_weight: a2 is negative (nonnegativity violation)");
  return std::max(a2, 0.0) + p.x_sq();
}

double eval_weight(const WeightEvaluator& w, const PhasePoint& p) {
  if (w.override_m) return w.override_m(p);
  return eval_a(w, p) + japanese_bracket(p);
}

Taylor weight_jet(const WeightEvaluator& w, const PhasePoint& p, int order) {
  if (w.override_m) throw UnsupportedError("weight_jet: overridden weight has no jet");
  const int m = 2 * w.n;
  const CTaylor a2 = w.a2.jet(p, order);
  Taylor r(m, order);
  for (int k = 0; k < r.size(); ++k) r[k] = a2[k].real();
  Taylor q = Taylor::constant(m, order, 1.0);
  for (int i = 0; i < m; ++i) {
    const Taylor v = Taylor::variable(m, order, i, p.coord(i));
    q += v * v;
    if (i < w.n) r += v * v;
  }
  return r + sqrt(q);
}

SymbolEvaluator weight_symbol(const WeightEvaluator& w) {
  SymbolEvaluator e;
  e.n = w.n;
  e.name = "m[" + w.name + "]";
  e.value = [w](const PhasePoint& p) { return cdouble(eval_weight(w, p)); };
  if (!w.override_m)
    e.jet = [w](const PhasePoint& p, int order) { return weight_jet(w, p, order).cast<cdouble>(); };
  return e;
}

SymbolEvaluator a_symbol(const WeightEvaluator& w) {
  return to_evaluator(full_symbol(w.a2), "a[" + w.name + "]");
}

SplitMetricValue eval_metric(const WeightEvaluator& w, const PhasePoint& p) {
  SplitMetricValue v;
  v.at = p;
  const double jb = japanese_bracket(p);
  if (w.kind == MetricKind::Shubin) {
    v.ax = 1.0;
    v.axi = 1.0 / (jb * jb);
    return v;
  }
  const double m = eval_weight(w, p);
  // <xi>^2 + |x|^2 = <X>^2
  v.ax = (1.0 + p.xi_sq() + p.x_sq()) / m;
  v.axi = 1.0 / m;
  return v;
}

SplitMetricValue eval_dual_metric(const SplitMetricValue& v) {
  SplitMetricValue d;
  d.at = v.at;
  d.ax = 1.0 / v.axi;
  d.axi = 1.0 / v.ax;
  return d;
}

double planck(const WeightEvaluator& w, const PhasePoint& p) {
  if (w.kind == MetricKind::Shubin) return 1.0 / japanese_bracket(p);
  return japanese_bracket(p) / eval_weight(w, p);
}

double dual_metric_numeric(const SplitMetricValue& g, std::span<const double> t, std::span<const double> tau,
                           int iterations) {
  // sigma(T, W) = <w, tau> - <t, omega> = b . W with b = (tau, -t).
  // In V = G^{1/2} W the ratio is (c . V)^2 on the unit sphere, c = G^{-1/2} b.
  const size_t n = t.size();
  std::vector<double> c(2 * n), v(2 * n);
  for (size_t i = 0; i < n; ++i) {
    c[i] = tau[i] / std::sqrt(g.ax);
    c[n + i] = -t[i] / std::sqrt(g.axi);
  }
  double cc = 0.0;
  for (double x : c) cc += x * x;
  if (cc == 0.0) return 0.0;
  for (size_t i = 0; i < 2 * n; ++i) v[i] = 1.0 / std::sqrt(2.0 * n) + 0.1 * double(i % 3);
  double best = 0.0;
  for (int it = 0; it < iterations; ++it) {
    double cv = 0.0;
    for (size_t i = 0; i < 2 * n; ++i) cv += c[i] * v[i];
    if (cv == 0.0) cv = 1e-3;
    double nv = 0.0;
    for (size_t i = 0; i < 2 * n; ++i) {
      v[i] += (cv / cc) * c[i];
      nv += v[i] * v[i];
    }
    nv = std::sqrt(nv);
    for (auto& x : v) x /= nv;
    cv = 0.0;
    for (size_t i = 0; i < 2 * n; ++i) cv += c[i] * v[i];
    best = std::max(best, cv * cv);
  }
  return best;
}

std::vector<PhasePoint> random_phase_points(int n, double half, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-half, half);
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    PhasePoint p(n);
    for (int i = 0; i < n; ++i) p.x[i] = U(rng);
    for (int i = 0; i < n; ++i) p.xi[i] = U(rng);
    pts.push_back(p);
  }
  return pts;
}

std::vector<PhasePair> slowness_pairs(const WeightEvaluator& w, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> G(0.0, 1.0);
  std::uniform_real_distribution<double> U(-6.0, 0.0);
  const double scales[3] = {1.0, 10.0, 100.0};
  const int n = w.n;
  std::vector<PhasePair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double s = scales[k % 3];
    PhasePoint x(n);
    for (int i = 0; i < 2 * n; ++i) x.set_coord(i, s * G(rng));
    std::vector<double> u(2 * n);
    for (auto& v : u) v = G(rng);
    const SplitMetricValue g = eval_metric(w, x);
    const double gu = g(std::span(u).first(n), std::span(u).subspan(n));
    const double target = std::pow(10.0, U(rng));
    const double lam = std::sqrt(target / gu);
    PhasePoint y = x;
    for (int i = 0; i < 2 * n; ++i) y.set_coord(i, x.coord(i) + lam * u[i]);
    out.emplace_back(x, y);
  }
  return out;
}

std::vector<PhasePair> temperateness_pairs(int n, double half, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const double frac[3] = {0.05, 0.5, 1.0};
  std::vector<PhasePair> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    PhasePoint x(n), y(n);
    const double sx = half * frac[k % 3], sy = half * frac[(k / 3) % 3];
    for (int i = 0; i < 2 * n; ++i) {
      x.set_coord(i, sx * U(rng));
      y.set_coord(i, sy * U(rng));
    }
    out.emplace_back(x, y);
  }
  return out;
}

namespace {

std::vector<double> flat(const PhasePoint& p) {
  std::vector<double> v(2 * p.n);
  for (int i = 0; i < 2 * p.n; ++i) v[i] = p.coord(i);
  return v;
}

double sym_ratio(double a, double b) { return std::max(a / b, b / a); }

struct PairData {
  double gx_diff = 0.0;    // g_X(X - Y)
  double gsy_diff = 0.0;   // g^sigma_Y(X - Y)
  double block_ratio = 1;  // max over blocks of (g_X / g_Y)^{+-1}
};

std::vector<PairData> pair_data(const WeightEvaluator& w, const std::vector<PhasePair>& pairs) {
  std::vector<PairData> d(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t k) {
    const auto& [X, Y] = pairs[k];
    const SplitMetricValue gx = eval_metric(w, X);
    const SplitMetricValue gy = eval_metric(w, Y);
    const SplitMetricValue gsy = eval_dual_metric(gy);
    const int n = X.n;
    std::vector<double> t(n), tau(n);
    for (int i = 0; i < n; ++i) {
      t[i] = X.x[i] - Y.x[i];
      tau[i] = X.xi[i] - Y.xi[i];
    }
    d[k].gx_diff = gx(t, tau);
    d[k].gsy_diff = gsy(t, tau);
    // Split-isotropic metric: the sup over directions T of g_X(T)/g_Y(T) and its
    // inverse is attained on pure dx or pure dxi directions.
    d[k].block_ratio = std::max(sym_ratio(gx.ax, gy.ax), sym_ratio(gx.axi, gy.axi));
  });
  return d;
}

}  // namespace

double bisect_constant(const std::function<bool(double)>& holds, double lo, double hi) {
  if (holds(lo)) return lo;
  if (!holds(hi)) return INFINITY;
  while (hi / lo > 1.0 + 1e-3) {
    const double mid = std::sqrt(lo * hi);
    if (holds(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

CheckReport check_uncertainty(const WeightEvaluator& w, const std::vector<PhasePoint>& sample) {
  CheckReport r;
  r.kind = "uncertainty";
  r.sample_size = sample.size();
  std::vector<double> h(sample.size());
  parallel_for(sample.size(), [&](std::size_t k) { h[k] = planck(w, sample[k]); });
  double hmax = 0.0;
  for (size_t k = 0; k < sample.size(); ++k) {
    hmax = std::max(hmax, h[k]);
    if (h[k] > 1.0 + 1e-12) r.add_witness({flat(sample[k]), {}, h[k], 1.0, "h_g > 1"});
  }
  r.constants["max_h"] = hmax;
  r.vacuous = sample.empty();
  r.pass = !r.vacuous && r.witnesses.empty();
  return r;
}

CheckReport check_slowness(const WeightEvaluator& w, const std::vector<PhasePair>& pairs, double C) {
  if (!(C > 1.0)) throw ArgumentError("check_slowness: C must exceed 1");
  const auto d = pair_data(w, pairs);
  auto holds = [&](double c) {
    for (const auto& p : d)
      if (p.gx_diff <= 1.0 / c && p.block_ratio > c) return false;
    return true;
  };
  CheckReport r;
  r.kind = "slowness";
  r.sample_size = pairs.size();
  std::size_t applicable = 0;
  for (size_t k = 0; k < d.size(); ++k) {
    if (d[k].gx_diff > 1.0 / C) continue;
    ++applicable;
    if (d[k].block_ratio > C)
      r.add_witness({flat(pairs[k].first), flat(pairs[k].second), d[k].block_ratio, C, "block ratio exceeds C"});
  }
  r.constants["C"] = C;
  r.constants["applicable"] = double(applicable);
  r.constants["C_fit"] = bisect_constant(holds, 1.0 + 1e-9, 1e6);
  r.vacuous = applicable == 0;
  if (r.vacuous) r.notes.push_back("vacuous: no pair satisfies g_X(X-Y) <= 1/C");
  r.pass = !r.vacuous && r.witnesses.empty();
  return r;
}

CheckReport check_temperateness(const WeightEvaluator& w, const std::vector<PhasePair>& pairs, double C, int J) {
  if (!(C > 0.0) || J < 1) throw ArgumentError("check_temperateness: need C > 0 and J >= 1");
  const auto d = pair_data(w, pairs);
  CheckReport r;
  r.kind = "temperateness";
  r.sample_size = pairs.size();
  for (int j = 1; j <= 8; ++j) {
    double cmin = 0.0;
    for (const auto& p : d) cmin = std::max(cmin, p.block_ratio / std::pow(1.0 + p.gsy_diff, j));
    r.constants["C_J" + std::to_string(j)] = cmin;
  }
  for (size_t k = 0; k < d.size(); ++k) {
    const double bound = C * std::pow(1.0 + d[k].gsy_diff, J);
    if (d[k].block_ratio > bound)
      r.add_witness({flat(pairs[k].first), flat(pairs[k].second), d[k].block_ratio, bound, "ratio exceeds bound"});
  }
  r.constants["C"] = C;
  r.constants["J"] = J;
  r.vacuous = pairs.empty();
  r.pass = !r.vacuous && r.witnesses.empty();
  return r;
}

CheckReport check_gweight(const WeightEvaluator& w, const std::function<double(const PhasePoint&)>& M,
                          const std::vector<PhasePair>& pairs, double C, int N) {
  const auto d = pair_data(w, pairs);
  std::vector<double> q(pairs.size());
  for (size_t k = 0; k < pairs.size(); ++k) {
    const double mx = M(pairs[k].first), my = M(pairs[k].second);
    if (!(mx > 0.0) || !(my > 0.0)) throw ArgumentError("check_gweight: M must be positive");
    q[k] = sym_ratio(mx, my);
  }
  CheckReport r;
  r.kind = "gweight";
  r.sample_size = pairs.size();
  auto cont = [&](double c) {
    for (size_t k = 0; k < d.size(); ++k)
      if (d[k].gx_diff <= 1.0 / c && q[k] > c * (1.0 + 1e-12)) return false;
    return true;
  };
  r.constants["continuity_C_fit"] = bisect_constant(cont, 1.0, 1e6);
  for (int j = 0; j <= 8; ++j) {
    double cmin = 0.0;
    for (size_t k = 0; k < d.size(); ++k) cmin = std::max(cmin, q[k] / std::pow(1.0 + d[k].gsy_diff, j));
    r.constants["temper_C_N" + std::to_string(j)] = cmin;
  }
  std::size_t applicable = 0;
  for (size_t k = 0; k < d.size(); ++k) {
    const double bound = C * std::pow(1.0 + d[k].gsy_diff, N);
    if (d[k].gx_diff <= 1.0 / C) {
      ++applicable;
      if (q[k] > C * (1.0 + 1e-12))
        r.add_witness({flat(pairs[k].first), flat(pairs[k].second), q[k], C, "continuity"});
    }
    if (q[k] > bound * (1.0 + 1e-12))
      r.add_witness({flat(pairs[k].first), flat(pairs[k].second), q[k], bound, "temperateness"});
  }
  r.constants["C"] = C;
  r.constants["N"] = N;
  r.constants["applicable"] = double(applicable);
  r.vacuous = pairs.empty();
  r.pass = !r.vacuous && r.witnesses.empty();
  return r;
}

}  // namespace weylab
