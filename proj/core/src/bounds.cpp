#include "weylab/bounds.hpp"

#include <fftw3.h>

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>

#include "weylab/cutoff.hpp"
#include "weylab/eigensolve.hpp"
#include "weylab/parallel.hpp"
#include "weylab/spectral.hpp"

namespace weylab {

namespace {

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

int pow2_at_least(double v) {
  int p = 1;
  while (p < v) p *= 2;
  return p;
}

// m at (x, xi) with the polynomial coefficients already evaluated at x.
struct RowWeight {
  std::vector<MultiIndex> alpha;
  std::vector<double> coeff;
  double x2 = 0.0;
  const WeightEvaluator* w = nullptr;
  std::vector<double> x;

  RowWeight(const WeightEvaluator& we, const std::vector<double>& xs) : w(&we), x(xs) {
    for (double v : xs) x2 += v * v;
    if (!we.override_m)
      for (const auto& [a, c] : we.a2.terms()) {
        alpha.push_back(a);
        coeff.push_back(c.value(xs).real());
      }
  }

  double operator()(const double* xi) const {
    const int n = w->n;
    if (w->override_m) {
      PhasePoint p(x, std::span<const double>(xi, n));
      return eval_weight(*w, p);
    }
    double a2 = 0.0, xi2 = 0.0;
    for (int i = 0; i < n; ++i) xi2 += xi[i] * xi[i];
    for (size_t t = 0; t < alpha.size(); ++t) {
      double mono = coeff[t];
      for (int i = 0; i < n; ++i)
        for (int e = 0; e < alpha[t][i]; ++e) mono *= xi[i];
      a2 += mono;
    }
    return a2 + x2 + std::sqrt(1.0 + x2 + xi2);
  }
};

}  // namespace

std::vector<BandProbeResult> linf_band_probe(const WeightEvaluator& w, double epsilon,
                                             const std::vector<double>& R_list, const BandProbeOptions& opt) {
  const int n = w.n;
  if (n < 1 || n > 2) throw UnsupportedError("linf_band_probe: n must be 1 or 2");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ArgumentError("linf_band_probe: epsilon must lie in [0, 1)");
  if (static_cast<int>(opt.kernel_L.size()) < n || static_cast<int>(opt.min_N.size()) < n ||
      static_cast<int>(opt.max_N.size()) < n)
    throw ArgumentError("linf_band_probe: per-axis options shorter than n");
  const double power = -0.5 * n * epsilon;
  std::vector<BandProbeResult> out;
  for (double R : R_list) {
    if (!(R > 1.0)) throw ArgumentError("linf_band_probe: R must exceed 1");
    BandProbeResult res;
    res.R = R;
    const double s = std::sqrt(3.0 * R);
    int D = 1;
    for (int i = 0; i < n; ++i) {
      const double ximax = (i == 0 ? s : 3.0 * R) + 2.0;
      const int N = std::clamp(pow2_at_least(4.0 * opt.kernel_L[i] * ximax), opt.min_N[i], opt.max_N[i]);
      res.N.push_back(N);
      res.L.push_back(opt.kernel_L[i]);
      D *= N;
    }
    // Row sample over the x-support |x|^2 <= 3R.
    std::vector<std::vector<double>> rows;
    const int r0 = opt.rows_x1, r1 = n > 1 ? opt.rows_x2 : 1;
    for (int a = 0; a < r0; ++a)
      for (int b = 0; b < r1; ++b) {
        std::vector<double> x(n);
        x[0] = -s + 2.0 * s * a / std::max(r0 - 1, 1);
        if (n > 1) x[1] = -s + 2.0 * s * b / std::max(r1 - 1, 1);
        rows.push_back(x);
      }

    fftw_plan plan;
    {
      std::lock_guard<std::mutex> lk(fftw_plan_mutex());
      fftw_complex* tmp = fftw_alloc_complex(D);
      plan = fftw_plan_dft(n, res.N.data(), tmp, tmp, FFTW_BACKWARD, FFTW_ESTIMATE);
      fftw_free(tmp);
    }
    std::vector<double> row_l1(rows.size(), 0.0), row_trial(rows.size(), 0.0), row_edge(rows.size(), 0.0),
        row_max(rows.size(), 0.0);
    parallel_for(rows.size(), [&](std::size_t q) {
      const RowWeight mw(w, rows[q]);
      fftw_complex* buf = fftw_alloc_complex(D);
      double qmax = 0.0, edge = 0.0;
      for (int flat = 0; flat < D; ++flat) {
        double xi[2] = {0.0, 0.0};
        int rem = flat;
        bool on_edge = false;
        for (int i = n - 1; i >= 0; --i) {
          const int idx = rem % res.N[i];
          rem /= res.N[i];
          const int k = idx < res.N[i] / 2 ? idx : idx - res.N[i];
          on_edge = on_edge || k == -res.N[i] / 2;
          xi[i] = k / (2.0 * res.L[i]);
        }
        const double m = mw(xi);
        const double chi = band_bump(m / R);
        const double v = chi == 0.0 ? 0.0 : std::pow(m, power) * chi;
        buf[flat][0] = v;
        buf[flat][1] = 0.0;
        qmax = std::max(qmax, std::abs(v));
        if (on_edge) edge = std::max(edge, std::abs(v));
      }
      fftw_execute_dft(plan, buf, buf);
      double l1 = 0.0;
      for (int flat = 0; flat < D; ++flat) l1 += std::hypot(buf[flat][0], buf[flat][1]) / D;
      // Random trials against the same row.
      std::mt19937_64 rng(opt.seed + 1315423911ULL * q);
      std::uniform_real_distribution<double> U(0.0, 2.0 * kPi);
      double best = 0.0;
      for (int t = 0; t < opt.trials; ++t) {
        cdouble acc = 0.0;
        const bool phase = t % 2 == 1;
        for (int flat = 0; flat < D; ++flat) {
          const cdouble K(buf[flat][0] / D, buf[flat][1] / D);
          const cdouble f = phase ? std::polar(1.0, U(rng)) : cdouble((rng() & 1) ? 1.0 : -1.0);
          acc += K * f;
        }
        best = std::max(best, std::abs(acc));
      }
      fftw_free(buf);
      row_l1[q] = l1;
      row_trial[q] = best;
      row_edge[q] = edge;
      row_max[q] = qmax;
    });
    {
      std::lock_guard<std::mutex> lk(fftw_plan_mutex());
      fftw_destroy_plan(plan);
    }
    double qmax = 0.0, edge = 0.0;
    std::size_t arg = 0;
    for (size_t q = 0; q < rows.size(); ++q) {
      qmax = std::max(qmax, row_max[q]);
      edge = std::max(edge, row_edge[q]);
      res.trial_ratio = std::max(res.trial_ratio, row_trial[q]);
      if (row_l1[q] > res.ratio) {
        res.ratio = row_l1[q];
        arg = q;
      }
    }
    if (qmax > 0.0 && edge > opt.nyquist_tol * qmax)
      throw GridError("linf_band_probe: band symbol not resolved at R = " + std::to_string(R) +
                      " (grid too coarse)");
    res.argmax_x = rows[arg];

    // Seminorm of q in S(m^{-(n/2) eps}, g) on points of the band.
    const SymbolEvaluator base = sym::real_power(weight_symbol(w), power);
    const SymbolEvaluator qs = band_restrict(base, w, R);
    std::vector<PhasePoint> sample;
    std::mt19937_64 rng(opt.seed ^ static_cast<std::uint64_t>(R * 1000.0));
    std::uniform_real_distribution<double> Ux(-s, s);
    const std::size_t attempts = 400 * opt.seminorm_points;
    for (std::size_t t = 0; t < attempts && sample.size() < opt.seminorm_points; ++t) {
      PhasePoint p(n);
      for (int i = 0; i < n; ++i) {
        p.x[i] = Ux(rng);
        const double ximax = (i == 0 ? s : 3.0 * R) + 2.0;
        p.xi[i] = std::uniform_real_distribution<double>(-ximax, ximax)(rng);
      }
      if (band_bump(eval_weight(w, p) / R) > 0.0) sample.push_back(p);
    }
    if (sample.empty()) throw GridError("linf_band_probe: no sample points in the band");
    res.seminorm = smg_seminorm(qs, base, w, opt.seminorm_order, sample).value;
    res.quotient = res.ratio / res.seminorm;
    out.push_back(res);
  }
  return out;
}

double band_quotient_spread(const std::vector<BandProbeResult>& r) {
  if (r.empty()) return 1.0;
  double lo = INFINITY, hi = 0.0;
  for (const auto& c : r) {
    lo = std::min(lo, c.quotient);
    hi = std::max(hi, c.quotient);
  }
  return hi / lo;
}

LpNorms matrix_norms(const Eigen::MatrixXd& T) {
  LpNorms n;
  n.one = T.cwiseAbs().colwise().sum().maxCoeff();
  n.inf = T.cwiseAbs().rowwise().sum().maxCoeff();
  n.two = singular_values(T)(0);
  return n;
}

double riesz_thorin_upper(const LpNorms& n, double p) {
  if (!(p >= 1.0)) throw ArgumentError("riesz_thorin_upper: p must be >= 1");
  if (p == 2.0) return n.two;
  if (p > 2.0) {
    if (std::isinf(p)) return n.inf;
    const double theta = 1.0 - 2.0 / p;
    return std::pow(n.two, 1.0 - theta) * std::pow(n.inf, theta);
  }
  const double theta = 2.0 * (1.0 - 1.0 / p);
  return std::pow(n.one, 1.0 - theta) * std::pow(n.two, theta);
}

double lp_norm(const Eigen::VectorXd& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  const double top = v.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) acc += std::pow(std::abs(v(i)) / top, p);
  return top * std::pow(acc, 1.0 / p);
}

double lp_lower_bound(const Eigen::MatrixXd& T, double p, int trials, std::uint64_t seed) {
  const int D = static_cast<int>(T.cols());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> N01;
  double best = 0.0;
  auto test = [&](const Eigen::VectorXd& f) {
    const double nf = lp_norm(f, p);
    if (nf > 0.0) best = std::max(best, lp_norm(T * f, p) / nf);
  };
  for (int t = 0; t < trials; ++t) {
    Eigen::VectorXd f(D);
    for (int i = 0; i < D; ++i) f(i) = (t % 2) ? N01(rng) : ((rng() & 1) ? 1.0 : -1.0);
    test(f);
  }
  // Extremal vectors of the endpoint norms: the heaviest column and the sign pattern of the heaviest row.
  Eigen::Index c, r;
  T.cwiseAbs().colwise().sum().maxCoeff(&c);
  T.cwiseAbs().rowwise().sum().maxCoeff(&r);
  test(Eigen::VectorXd::Unit(D, c));
  test(T.row(r).transpose().unaryExpr([](double v) { return v >= 0.0 ? 1.0 : -1.0; }));
  // Top singular vector.
  Eigen::BDCSVD<Eigen::MatrixXd> svd(T, Eigen::ComputeThinV);
  test(svd.matrixV().col(0));
  return best;
}

LpCalibration calibrate_power(const HamiltonianMatrix& H, const Eigen::MatrixXd& T, const WeightEvaluator& w,
                              double beta_prime) {
  LpCalibration c;
  c.beta_prime = beta_prime;
  if (beta_prime == 0.0) {
    c.pass = true;
    return c;
  }
  const DirichletGrid& g = H.grid;
  const int n = g.n;
  const int K = 6;
  const double s0 = 1.5, s1 = std::max(g.L / 2.0, 2.0);
  Eigen::MatrixXd A(K, 2);
  Eigen::VectorXd bt(K), bm(K);
  for (int k = 0; k < K; ++k) {
    const double s = s0 * std::pow(s1 / s0, double(k) / (K - 1));
    Eigen::VectorXd phi(g.size());
    for (int p = 0; p < g.size(); ++p) {
      const auto y = g.point(p);
      double d2 = (y[0] - s) * (y[0] - s);
      for (int i = 1; i < n; ++i) d2 += y[i] * y[i];
      phi(p) = std::exp(-0.5 * d2);
    }
    const double ev = phi.dot(T * phi) / phi.squaredNorm();
    PhasePoint X(n);
    X.x[0] = s;
    A(k, 0) = std::log(s);
    A(k, 1) = 1.0;
    bt(k) = std::log(ev);
    bm(k) = -beta_prime * std::log(eval_weight(w, X));
  }
  const auto qr = A.colPivHouseholderQr();
  c.slope_operator = qr.solve(bt)(0);
  c.slope_symbol = qr.solve(bm)(0);
  c.residual = std::abs(c.slope_operator / c.slope_symbol - 1.0);
  return c;
}

LpWindowReport lp_window_probe(const HamiltonianBuilder& build, const WeightEvaluator& w, double beta,
                               const std::vector<double>& p_list, const std::vector<int>& N_ladder,
                               const LpProbeOptions& opt) {
  if (!(beta >= 0.0)) throw ArgumentError("lp_window_probe: beta must be nonnegative");
  if (N_ladder.empty() || p_list.empty()) throw ArgumentError("lp_window_probe: empty ladder");
  LpWindowReport rep;
  bool calibrated = false;
  for (int N : N_ladder) {
    const HamiltonianMatrix H = build(N);
    const int n = H.grid.n;
    const double bp = 0.5 * n * beta;
    const DenseEigen e = dense_eigh(H.dense(), true);
    if (e.values.minCoeff() + opt.shift <= 0.0)
      throw PreconditionError("lp_window_probe: H + shift is not positive definite (shift too small)");
    const Eigen::VectorXd d = (e.values.array() + opt.shift).pow(-bp);
    const Eigen::MatrixXd T = e.vectors * d.asDiagonal() * e.vectors.transpose();
    if (!calibrated) {
      rep.calibration = calibrate_power(H, T, w, bp);
      rep.calibration.pass = rep.calibration.residual <= opt.calibration_tol;
      if (!rep.calibration.pass)
        throw PreconditionError("lp_window_probe: calibration residual " + std::to_string(rep.calibration.residual) +
                                " above " + std::to_string(opt.calibration_tol));
      calibrated = true;
    }
    const LpNorms nm = matrix_norms(T);
    for (double p : p_list) {
      LpProbeResult c;
      c.p = p;
      c.beta = beta;
      c.N = N;
      c.L = H.grid.L;
      c.op = H.provenance;
      c.upper = riesz_thorin_upper(nm, p);
      c.lower = p == 2.0 ? nm.two : std::min(lp_lower_bound(T, p, opt.trials, opt.seed + N), c.upper);
      c.admissible = std::abs(1.0 / p - 0.5) <= 0.5 * n * beta + 1e-12;
      rep.cells.push_back(c);
    }
  }
  const size_t P = p_list.size();
  for (size_t j = 0; j < P; ++j) {
    bool ok = true;
    for (size_t g = 1; g < N_ladder.size(); ++g) {
      const double a = rep.cells[(g - 1) * P + j].upper, b = rep.cells[g * P + j].upper;
      ok = ok && std::abs(b / a - 1.0) < opt.stable_change;
    }
    rep.stable.emplace_back(p_list[j], ok);
  }
  return rep;
}

double dirichlet_sobolev_norm(const DirichletGrid& g, const Eigen::VectorXd& v, double tau) {
  const int D = g.size();
  if (v.size() != D) throw ArgumentError("dirichlet_sobolev_norm: size mismatch");
  std::vector<int> dims(g.n, g.N);
  std::vector<fftw_r2r_kind> kinds(g.n, FFTW_RODFT00);
  double* buf = fftw_alloc_real(D);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    plan = fftw_plan_r2r(g.n, dims.data(), buf, buf, kinds.data(), FFTW_ESTIMATE);
  }
  // FFTW is row-major (last index fastest); the grid runs axis 0 fastest, so
  // FFTW dimension j corresponds to grid axis n-1-j. All axes share N.
  for (int p = 0; p < D; ++p) buf[p] = v(p);
  fftw_execute(plan);
  const double scale = std::pow(2.0 * (g.N + 1), g.n);
  double acc = 0.0;
  for (int p = 0; p < D; ++p) {
    int rem = p;
    double k2 = 0.0;
    for (int i = 0; i < g.n; ++i) {
      const double kap = kPi * ((rem % g.N) + 1) / (2.0 * g.L);
      k2 += kap * kap;
      rem /= g.N;
    }
    acc += std::pow(1.0 + k2, tau) * buf[p] * buf[p] / scale;
  }
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return std::sqrt(acc);
}

namespace {

// v -> S v with S the sine-transform multiplier (1 + |k|^2)^tau.
struct SineMultiplier {
  DirichletGrid g;
  double tau;
  Eigen::VectorXd mult;
  double* buf = nullptr;
  fftw_plan plan = nullptr;

  SineMultiplier(const DirichletGrid& grid, double t) : g(grid), tau(t) {
    const int D = g.size();
    std::vector<int> dims(g.n, g.N);
    std::vector<fftw_r2r_kind> kinds(g.n, FFTW_RODFT00);
    buf = fftw_alloc_real(D);
    {
      std::lock_guard<std::mutex> lk(fftw_plan_mutex());
      plan = fftw_plan_r2r(g.n, dims.data(), buf, buf, kinds.data(), FFTW_ESTIMATE);
    }
    mult.resize(D);
    const double scale = std::pow(2.0 * (g.N + 1), g.n);
    for (int p = 0; p < D; ++p) {
      int rem = p;
      double k2 = 0.0;
      for (int i = 0; i < g.n; ++i) {
        const double kap = kPi * ((rem % g.N) + 1) / (2.0 * g.L);
        k2 += kap * kap;
        rem /= g.N;
      }
      mult(p) = std::pow(1.0 + k2, tau) / scale;
    }
  }
  ~SineMultiplier() {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  SineMultiplier(const SineMultiplier&) = delete;
  SineMultiplier& operator=(const SineMultiplier&) = delete;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) {
    const int D = g.size();
    for (int p = 0; p < D; ++p) buf[p] = v(p);
    fftw_execute(plan);
    for (int p = 0; p < D; ++p) buf[p] *= mult(p);
    fftw_execute(plan);  // RODFT00 is its own inverse up to the scale folded into mult
    Eigen::VectorXd out(D);
    for (int p = 0; p < D; ++p) out(p) = buf[p];
    return out;
  }
};

}  // namespace

SubellipticityReport subellipticity_probe(const HamiltonianBuilder& kinetic, double tau,
                                          const std::vector<int>& N_ladder, const SubellipticityOptions& opt) {
  if (!(tau > 0.0 && tau <= 2.0)) throw ArgumentError("subellipticity_probe: tau must lie in (0, 2]");
  SubellipticityReport rep;
  rep.tau = tau;
  for (int N : N_ladder) {
    const HamiltonianMatrix P = kinetic(N);
    rep.op = P.provenance;
    const DirichletGrid& g = P.grid;
    const int D = g.size();
    Eigen::SparseMatrix<double> A = P.sparse.transpose() * P.sparse;
    Eigen::SparseMatrix<double> I(D, D);
    I.setIdentity();
    A += I;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) throw SolverError("subellipticity_probe: factorization failed");
    SineMultiplier S(g, tau);

    std::mt19937_64 rng(opt.seed + N);
    std::normal_distribution<double> N01;
    Eigen::VectorXd v(D);
    for (int i = 0; i < D; ++i) v(i) = N01(rng);
    v.normalize();
    double lam = 0.0;
    for (int it = 0; it < opt.power_iterations; ++it) {
      Eigen::VectorXd Sv = S.apply(v);
      const double num = v.dot(Sv);
      const double den = v.dot(A * v);
      lam = num / den;
      v = ldlt.solve(Sv);
      v.normalize();
    }
    {
      const Eigen::VectorXd Sv = S.apply(v);
      lam = std::max(lam, v.dot(Sv) / v.dot(A * v));
    }
    SubellipticityCell cell;
    cell.N = N;
    cell.C1 = std::sqrt(lam);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int t = 0; t < opt.trials; ++t) {
      std::vector<double> c(g.n);
      for (int i = 0; i < g.n; ++i) c[i] = (U(rng) - 0.5) * g.L;
      const double r = 0.5 + 2.5 * U(rng);
      const int axis = static_cast<int>(U(rng) * g.n) % g.n;
      const double freq = 3.0 * U(rng);
      Eigen::VectorXd f(D);
      for (int p = 0; p < D; ++p) {
        const auto y = g.point(p);
        double d2 = 0.0;
        for (int i = 0; i < g.n; ++i) d2 += (y[i] - c[i]) * (y[i] - c[i]);
        const double q = d2 / (r * r);
        f(p) = q < 1.0 ? std::exp(-1.0 / (1.0 - q)) * std::cos(2.0 * kPi * freq * y[axis]) : 0.0;
      }
      if (f.norm() == 0.0) continue;
      const double hs = dirichlet_sobolev_norm(g, f, tau);
      const double den = std::sqrt((P.sparse * f).squaredNorm() + f.squaredNorm());
      cell.trial_C1 = std::max(cell.trial_C1, hs / den);
    }
    rep.cells.push_back(cell);
  }
  for (size_t i = 1; i < rep.cells.size(); ++i)
    rep.max_change = std::max(rep.max_change, std::abs(rep.cells[i].C1 / rep.cells[i - 1].C1 - 1.0));
  rep.stable = rep.cells.size() >= 2 && rep.max_change < opt.stable_change;
  return rep;
}

}  // namespace weylab
