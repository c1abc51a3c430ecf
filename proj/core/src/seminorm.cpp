#include "weylab/seminorm.hpp"

#include <cmath>
#include <random>

#include "weylab/parallel.hpp"

namespace weylab {

namespace {

struct Idx {
  std::vector<int> gamma;  // 2n, x first
  MultiIndex beta{}, alpha{};
  int bsum = 0, total = 0;
};

std::vector<Idx> all_indices(int n, int k) {
  const auto layout = TaylorLayout::get(2 * n, k);
  std::vector<Idx> out;
  for (int j = 0; j < layout->size(); ++j) {
    Idx d;
    d.gamma = layout->index[j];
    for (int i = 0; i < n; ++i) {
      d.beta[i] = d.gamma[i];
      d.alpha[i] = d.gamma[n + i];
    }
    d.bsum = order(d.beta);
    d.total = layout->degree[j];
    out.push_back(d);
  }
  return out;
}

struct PointResult {
  std::vector<double> by_order;
  double best = -1.0;
  int best_idx = 0;
};

}  // namespace

SeminormEstimate smg_seminorm(const SymbolEvaluator& s, const SymbolEvaluator& M, const WeightEvaluator& w, int k,
                              const std::vector<PhasePoint>& sample, const DerivativeOptions& opt) {
  if (k > opt.max_order) throw UnsupportedError("smg_seminorm: order beyond configured maximum");
  const int n = s.n;
  const auto idx = all_indices(n, k);
  std::vector<PointResult> res(sample.size());
  parallel_for(sample.size(), [&](std::size_t q) {
    const PhasePoint& p = sample[q];
    const double m = eval_weight(w, p);
    const double jb = japanese_bracket(p);
    const double Mv = std::abs(M.value(p));
    PointResult& r = res[q];
    r.by_order.assign(k + 1, 0.0);
    CTaylor jet;
    const bool use_jet = s.has_jet() && !opt.force_fd;
    if (use_jet) jet = s.jet(p, k);
    for (size_t j = 0; j < idx.size(); ++j) {
      const auto& d = idx[j];
      const cdouble dv = use_jet ? jet.derivative(d.gamma) : derivative(s, d.beta, d.alpha, p, opt);
      const double v = std::abs(dv) * std::pow(m, 0.5 * d.total) * std::pow(jb, -d.bsum) / Mv;
      r.by_order[d.total] = std::max(r.by_order[d.total], v);
      if (v > r.best) {
        r.best = v;
        r.best_idx = static_cast<int>(j);
      }
    }
  });
  SeminormEstimate e;
  e.order = k;
  e.by_order.assign(k + 1, 0.0);
  e.sample_size = sample.size();
  double best = -1.0;
  for (size_t q = 0; q < sample.size(); ++q) {
    for (int j = 0; j <= k; ++j) e.by_order[j] = std::max(e.by_order[j], res[q].by_order[j]);
    if (res[q].best > best) {
      best = res[q].best;
      e.argmax = sample[q];
      e.argmax_beta = idx[res[q].best_idx].beta;
      e.argmax_alpha = idx[res[q].best_idx].alpha;
    }
  }
  e.value = std::max(best, 0.0);
  return e;
}

std::vector<std::vector<PhasePoint>> nested_samples(int n, const std::vector<double>& boxes, std::size_t per_box,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<PhasePoint> base;
  for (std::size_t k = 0; k < per_box; ++k) {
    PhasePoint p(n);
    for (int i = 0; i < 2 * n; ++i) p.set_coord(i, U(rng));
    base.push_back(p);
  }
  // Axis-aligned grid in the unit cube so degenerate loci (x_i = 0) are hit.
  const int per_axis = 5;
  std::vector<int> id(2 * n, 0);
  while (true) {
    PhasePoint p(n);
    for (int i = 0; i < 2 * n; ++i) p.set_coord(i, -1.0 + 2.0 * id[i] / (per_axis - 1));
    base.push_back(p);
    int v = 0;
    while (v < 2 * n && ++id[v] == per_axis) id[v++] = 0;
    if (v == 2 * n) break;
  }
  std::vector<std::vector<PhasePoint>> out;
  std::vector<PhasePoint> acc;
  for (double h : boxes) {
    for (const auto& b : base) {
      PhasePoint p(n);
      for (int i = 0; i < 2 * n; ++i) p.set_coord(i, h * b.coord(i));
      acc.push_back(p);
    }
    out.push_back(acc);
  }
  return out;
}

MembershipResult class_membership(const SymbolEvaluator& s, const SymbolEvaluator& M, const WeightEvaluator& w,
                                  int k, const std::vector<double>& boxes, std::size_t per_box, std::uint64_t seed,
                                  double gate) {
  if (boxes.size() < 2) throw ArgumentError("class_membership: need at least two nested boxes");
  MembershipResult r;
  r.boxes = boxes;
  r.gate = gate;
  const auto samples = nested_samples(s.n, boxes, per_box, seed);
  for (size_t i = 0; i < boxes.size(); ++i) {
    SeminormEstimate e = smg_seminorm(s, M, w, k, samples[i]);
    e.sample = "box " + std::to_string(boxes[i]);
    r.profile.push_back(e);
  }
  r.pass = true;
  for (size_t i = 1; i < boxes.size(); ++i) {
    const double doublings = std::log2(boxes[i] / boxes[i - 1]);
    const double ratio = r.profile[i].value / std::max(r.profile[i - 1].value, 1e-300);
    const double g = std::pow(ratio, 1.0 / doublings);
    r.growth.push_back(g);
    if (!(g < gate)) r.pass = false;
  }
  return r;
}

SymbolEvaluator band_restrict(const SymbolEvaluator& s, const WeightEvaluator& w, double R) {
  if (!(R > 1.0)) throw ArgumentError("band_restrict: R must exceed 1");
  SymbolEvaluator e;
  e.n = s.n;
  e.name = s.name + "|band(" + std::to_string(R) + ")";
  e.value = [s, w, R](const PhasePoint& p) {
    const double chi = band_bump(eval_weight(w, p) / R);
    if (chi == 0.0) return cdouble(0.0);
    return s.value(p) * chi;
  };
  if (s.has_jet() && !w.override_m)
    e.jet = [s, w, R](const PhasePoint& p, int order) {
      const Taylor m = weight_jet(w, p, order) * (1.0 / R);
      const Taylor chi = compose_univariate(m, band_bump_jet(m.value(), order));
      return s.jet(p, order) * chi.cast<cdouble>();
    };
  return e;
}

double band_mass(const WeightEvaluator& w, double R, const std::vector<PhasePoint>& sample) {
  if (sample.empty()) return 0.0;
  std::size_t in = 0;
  for (const auto& p : sample) {
    const double s = eval_weight(w, p) / R;
    in += (s >= 1.0 && s <= 3.0);
  }
  return double(in) / double(sample.size());
}

}  // namespace weylab
