#include "weylab/schatten_experiment.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <random>

#include "weylab/eigensolve.hpp"
#include "weylab/parallel.hpp"

namespace weylab {

namespace {

template <int P>
void gauss_rule(std::vector<double>& x, std::vector<double>& w) {
  using G = boost::math::quadrature::gauss<double, P>;
  const auto& ab = G::abscissa();
  const auto& wt = G::weights();
  x.clear();
  w.clear();
  // Boost stores the nonnegative half of a symmetric rule.
  for (size_t i = 0; i < ab.size(); ++i) {
    if (ab[i] == 0.0) {
      x.push_back(0.0);
      w.push_back(wt[i]);
    } else {
      x.push_back(ab[i]);
      w.push_back(wt[i]);
      x.push_back(-ab[i]);
      w.push_back(wt[i]);
    }
  }
}

void reference_rule(int p, std::vector<double>& x, std::vector<double>& w) {
  switch (p) {
    case 4: gauss_rule<4>(x, w); break;
    case 6: gauss_rule<6>(x, w); break;
    case 8: gauss_rule<8>(x, w); break;
    case 10: gauss_rule<10>(x, w); break;
    case 12: gauss_rule<12>(x, w); break;
    case 16: gauss_rule<16>(x, w); break;
    default: throw ArgumentError("phase_space_integral: nodes_per_panel must be one of 4, 6, 8, 10, 12, 16");
  }
}

// Nodes and weights on [0, L].
void half_line_nodes(double L, int p, std::vector<double>& X, std::vector<double>& W) {
  std::vector<double> edges{0.0};
  for (double e : {0.5, 1.0, 2.0, 3.0, 4.0})
    if (e < L) edges.push_back(e);
  double e = 8.0;
  while (e < L) {
    edges.push_back(e);
    e *= 2.0;
  }
  edges.push_back(L);
  std::vector<double> rx, rw;
  reference_rule(p, rx, rw);
  X.clear();
  W.clear();
  for (size_t k = 0; k + 1 < edges.size(); ++k) {
    const double a = edges[k], b = edges[k + 1];
    for (size_t i = 0; i < rx.size(); ++i) {
      X.push_back(0.5 * (a + b) + 0.5 * (b - a) * rx[i]);
      W.push_back(0.5 * (b - a) * rw[i]);
    }
  }
}

bool even_in_every_coordinate(const WeightEvaluator& w) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  for (int t = 0; t < 64; ++t) {
    PhasePoint p(w.n);
    for (int i = 0; i < 2 * w.n; ++i) p.set_coord(i, U(rng));
    const double m0 = eval_weight(w, p);
    for (int i = 0; i < 2 * w.n; ++i) {
      PhasePoint q = p;
      q.set_coord(i, -p.coord(i));
      if (std::abs(eval_weight(w, q) - m0) > 1e-12 * std::abs(m0)) return false;
    }
  }
  return true;
}

struct FastWeight {
  int n;
  std::vector<MultiIndex> alpha;
  std::vector<const Coefficient*> coeff;
};

}  // namespace

double phase_space_integral(const WeightEvaluator& w, double s, double L, int nodes_per_panel) {
  const int n = w.n;
  if (n < 1 || n > 2) throw UnsupportedError("phase_space_integral: n must be 1 or 2");
  if (!(L > 0.0)) throw ArgumentError("phase_space_integral: L must be positive");
  std::vector<double> X, W;
  half_line_nodes(L, nodes_per_panel, X, W);
  const bool sym = even_in_every_coordinate(w);
  if (!sym) {
    const size_t h = X.size();
    for (size_t i = 0; i < h; ++i) {
      X.push_back(-X[i]);
      W.push_back(W[i]);
    }
  }
  const int K = static_cast<int>(X.size());
  const int dims = 2 * n;
  FastWeight fw{n, {}, {}};
  for (const auto& [a, c] : w.a2.terms()) {
    fw.alpha.push_back(a);
    fw.coeff.push_back(&c);
  }
  int xcount = 1;
  for (int i = 0; i < n; ++i) xcount *= K;
  std::vector<double> partial(xcount, 0.0);
  parallel_for(xcount, [&](std::size_t flat) {
    std::vector<double> x(n);
    double wx = 1.0, x2 = 0.0;
    std::size_t f = flat;
    for (int i = 0; i < n; ++i) {
      x[i] = X[f % K];
      wx *= W[f % K];
      f /= K;
      x2 += x[i] * x[i];
    }
    std::vector<double> cv(fw.alpha.size());
    const bool fast = !w.override_m;
    if (fast)
      for (size_t t = 0; t < fw.alpha.size(); ++t) cv[t] = fw.coeff[t]->value(x).real();
    double acc = 0.0;
    std::vector<int> id(n, 0);
    std::vector<double> xi(n);
    while (true) {
      double wxi = 1.0, xi2 = 0.0;
      for (int i = 0; i < n; ++i) {
        xi[i] = X[id[i]];
        wxi *= W[id[i]];
        xi2 += xi[i] * xi[i];
      }
      double m;
      if (fast) {
        double a2 = 0.0;
        for (size_t t = 0; t < fw.alpha.size(); ++t) {
          double mono = cv[t];
          for (int i = 0; i < n; ++i)
            for (int e = 0; e < fw.alpha[t][i]; ++e) mono *= xi[i];
          a2 += mono;
        }
        m = a2 + x2 + std::sqrt(1.0 + x2 + xi2);
      } else {
        m = eval_weight(w, PhasePoint(x, xi));
      }
      acc += wxi * std::pow(m, -s);
      int v = 0;
      while (v < n && ++id[v] == K) id[v++] = 0;
      if (v == n) break;
    }
    partial[flat] = wx * acc;
  });
  double total = 0.0;
  for (double v : partial) total += v;
  return sym ? total * std::pow(2.0, dims) : total;
}

SchattenMatrixCell schatten_matrix_value(const WeightEvaluator& w, double mu, double r, int N, double L,
                                         double shift) {
  if (w.override_m) throw UnsupportedError("schatten_matrix_value: weight has no symbol form");
  const Grid g(w.n, L, N);
  const OperatorMatrix A = weyl_quantize(full_symbol(w.a2), g);
  const OperatorMatrix B = weyl_quantize(full_symbol(harmonic_symbol(w.n)), g);
  Eigen::MatrixXcd Bh = 0.5 * (B.a + B.a.adjoint());
  Bh.diagonal().array() += 1.0;
  const DenseEigenC eb = dense_eigh(Bh, true);
  if (eb.values.minCoeff() <= 0.0) throw PreconditionError("schatten_matrix_value: I + Op(|x|^2+|xi|^2) not PD");
  const Eigen::VectorXd sq = eb.values.array().sqrt();
  Eigen::MatrixXcd M = eb.vectors * sq.asDiagonal() * eb.vectors.adjoint();
  M += 0.5 * (A.a + A.a.adjoint());
  const DenseEigenC em = dense_eigh(M, false);
  SchattenMatrixCell c;
  c.N = N;
  c.L = L;
  c.lambda_min = em.values(0);
  if (!(em.values(0) + shift > 0.0))
    throw PreconditionError("schatten_matrix_value: quantized weight not PD after shift " + std::to_string(shift));
  double acc = 0.0;
  for (Eigen::Index k = 0; k < em.values.size(); ++k) acc += std::pow(em.values(k) + shift, -mu * r);
  c.value = std::pow(acc, 1.0 / r);
  return c;
}

SchattenTrend schatten_criterion_experiment(const WeightEvaluator& w, double mu, double r,
                                            const SchattenTrendOptions& opt) {
  if (!(mu > 0.0) || !(r > 0.0)) throw ArgumentError("schatten_criterion_experiment: mu and r must be positive");
  if (!opt.skip_matrix && opt.N_ladder.size() < 2) throw ArgumentError("schatten_criterion_experiment: ladder needs >= 2 grids");
  if (opt.tail_L.size() < 3) throw ArgumentError("schatten_criterion_experiment: tail ladder needs >= 3 boxes");
  SchattenTrend t;
  t.op = w.name;
  t.mu = mu;
  t.r = r;
  if (!opt.skip_matrix) {
    for (int N : opt.N_ladder) {
      const double L = opt.fixed_L > 0.0 ? opt.fixed_L : std::sqrt(double(N)) / 2.0;
      t.matrix.push_back(schatten_matrix_value(w, mu, r, N, L, opt.shift));
    }
    for (size_t i = 1; i < t.matrix.size(); ++i)
      t.matrix_change = std::max(t.matrix_change, std::abs(t.matrix[i].value / t.matrix[i - 1].value - 1.0));
    t.matrix_stable = t.matrix_change < opt.matrix_gate;
  }
  const double s = mu * r;
  for (double L : opt.L_ladder) t.integral.push_back({L, phase_space_integral(w, s, L, opt.nodes_per_panel)});
  std::vector<double> tail;
  for (double L : opt.tail_L) {
    const double v = phase_space_integral(w, s, L, opt.nodes_per_panel);
    t.integral.push_back({L, v});
    tail.push_back(v);
  }
  t.ladder_monotone = true;
  for (size_t i = 1; i < opt.L_ladder.size(); ++i)
    t.ladder_monotone = t.ladder_monotone && t.integral[i].value > t.integral[i - 1].value;
  const size_t m = tail.size();
  const double d1 = tail[m - 2] - tail[m - 3];
  const double d2 = tail[m - 1] - tail[m - 2];
  t.divergence_indicator = d1 > 0.0 ? d2 / d1 : (d2 > 0.0 ? INFINITY : 0.0);
  t.integral_converges = t.divergence_indicator < 1.0;
  t.integral_limit = t.integral_converges ? tail[m - 1] + d2 * t.divergence_indicator / (1.0 - t.divergence_indicator)
                                          : INFINITY;
  if (!t.integral_converges) t.notes.push_back("tail increments do not decay");
  return t;
}

}  // namespace weylab
