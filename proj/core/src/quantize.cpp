#include "weylab/quantize.hpp"

#include <fftw3.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "weylab/parallel.hpp"

namespace weylab {

Grid::Grid(int dim, double half, int points) : n(dim), L(half), N(points) {
  if (dim < 1 || dim > kMaxDim) throw GridError("Grid: dimension out of range");
  if (points < 8 || points % 2) throw GridError("Grid: N must be even and >= 8");
  if (!(half > 0.0)) throw GridError("Grid: L must be positive");
}

int Grid::size() const {
  int d = 1;
  for (int i = 0; i < n; ++i) d *= N;
  return d;
}

std::vector<int> Grid::unflatten(int flat) const {
  std::vector<int> j(n);
  for (int i = 0; i < n; ++i) {
    j[i] = flat % N;
    flat /= N;
  }
  return j;
}

std::vector<double> Grid::point(int flat) const {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = coord(flat % N);
    flat /= N;
  }
  return x;
}

double OperatorMatrix::hermitian_residual() const {
  const double nrm = std::max(a.norm(), 1e-300);
  return (a - a.adjoint()).norm() / nrm;
}

Eigen::MatrixXcd xi_multiplier_1d(const Grid& g) {
  const int N = g.N;
  Eigen::MatrixXcd M(N, N);
  for (int j = 0; j < N; ++j)
    for (int l = 0; l < N; ++l) {
      cdouble s = 0.0;
      for (int k = -N / 2; k < N / 2; ++k) {
        const double ph = 2.0 * kPi * double((j - l) * k % N) / N;
        s += g.frequency(k) * cdouble(std::cos(ph), std::sin(ph));
      }
      M(j, l) = s / double(N);
    }
  return M;
}

namespace {

// (I x .. x B x .. x I) X with B acting on `axis`; axis 0 is the fastest index.
void apply_left_axis(Eigen::MatrixXcd& X, int axis, const Eigen::MatrixXcd& B, int N, int n) {
  int inner = 1;
  for (int i = 0; i < axis; ++i) inner *= N;
  int outer = 1;
  for (int i = axis + 1; i < n; ++i) outer *= N;
  const int cols = static_cast<int>(X.cols());
  parallel_for(cols, [&](std::size_t c) {
    Eigen::VectorXcd col = X.col(c);
    for (int o = 0; o < outer; ++o) {
      Eigen::Map<Eigen::MatrixXcd> Z(col.data() + std::ptrdiff_t(o) * inner * N, inner, N);
      Eigen::MatrixXcd Y = Z * B.transpose();
      Z = Y;
    }
    X.col(c) = col;
  });
}

Eigen::MatrixXcd kron_powers(const std::vector<Eigen::MatrixXcd>& pw, const MultiIndex& e, const Grid& g) {
  const int D = g.size();
  Eigen::MatrixXcd R(D, D);
  std::vector<std::vector<int>> idx(D);
  for (int p = 0; p < D; ++p) idx[p] = g.unflatten(p);
  parallel_for(D, [&](std::size_t j) {
    for (int l = 0; l < D; ++l) {
      cdouble v = 1.0;
      for (int i = 0; i < g.n && v != 0.0; ++i) v *= pw[e[i]](idx[j][i], idx[l][i]);
      R(j, l) = v;
    }
  });
  return R;
}

double tail_fraction(const std::vector<cdouble>& line) {
  const int N = static_cast<int>(line.size());
  double tot = 0.0, tail = 0.0;
  for (int k = -N / 2; k < N / 2; ++k) {
    cdouble c = 0.0;
    for (int j = 0; j < N; ++j) {
      const double ph = -2.0 * kPi * double(j) * k / N;
      c += line[j] * cdouble(std::cos(ph), std::sin(ph));
    }
    const double e = std::norm(c);
    tot += e;
    if (std::abs(k) > N / 4) tail += e;
  }
  return tot > 0.0 ? tail / tot : 0.0;
}

// Max tail fraction of f along axis lines through the center and quarter offsets.
double lines_tail(const Grid& g, const std::function<cdouble(const std::vector<double>&)>& f) {
  double worst = 0.0;
  const int offs[3] = {g.N / 2, g.N / 4, 3 * g.N / 4};
  for (int axis = 0; axis < g.n; ++axis)
    for (int o : offs) {
      std::vector<cdouble> line(g.N);
      std::vector<double> x(g.n, g.coord(o));
      for (int j = 0; j < g.N; ++j) {
        x[axis] = g.coord(j);
        line[j] = f(x);
      }
      worst = std::max(worst, tail_fraction(line));
      if (g.n == 1) break;
    }
  return worst;
}

std::vector<cdouble> coefficient_values(const Coefficient& c, const Grid& g) {
  const int D = g.size();
  std::vector<cdouble> v(D);
  parallel_for(D, [&](std::size_t p) { v[p] = c.value(g.point(static_cast<int>(p))); });
  return v;
}

void boundary_warning(OperatorMatrix& op, const Grid& g, const std::vector<cdouble>& vals, double thr,
                      const std::string& what) {
  double mx = 0.0;
  for (int p = 0; p < g.size(); ++p) {
    const auto j = g.unflatten(p);
    bool edge = false;
    for (int v : j) edge = edge || v == 0 || v == g.N - 1;
    if (edge) mx = std::max(mx, std::abs(vals[p]));
  }
  if (mx > thr) op.warnings.push_back(what + ": boundary magnitude " + std::to_string(mx));
}

}  // namespace

OperatorMatrix tau_quantize(const PolySymbol& s, double tau, const Grid& g, const QuantizeOptions& opt) {
  if (tau < 0.0 || tau > 1.0) throw ArgumentError("tau_quantize: tau must lie in [0,1]");
  if (s.dim() != g.n) throw ArgumentError("tau_quantize: dimension mismatch");
  const int D = g.size();
  const int deg = std::max(s.degree(), 0);
  std::vector<Eigen::MatrixXcd> pw(deg + 1);
  pw[0] = Eigen::MatrixXcd::Identity(g.N, g.N);
  if (deg >= 1) pw[1] = xi_multiplier_1d(g);
  for (int k = 2; k <= deg; ++k) pw[k] = pw[k - 1] * pw[1];

  OperatorMatrix op;
  op.grid = g;
  op.tau = tau;
  op.symbol = "poly";
  op.a = Eigen::MatrixXcd::Zero(D, D);
  bool real = true;
  for (const auto& [alpha, c] : s.terms()) {
    const auto vals = coefficient_values(c, g);
    for (auto v : vals) real = real && v.imag() == 0.0;
    const double tail = lines_tail(g, [&](const std::vector<double>& x) { return c.value(x); });
    if (tail > opt.nyquist_tail) throw GridError("tau_quantize: coefficient not resolved by grid (tail " +
                                                 std::to_string(tail) + ")");
    boundary_warning(op, g, vals, opt.boundary_warn, "coefficient");
    MultiIndex gam{};
    while (true) {
      double w = 1.0;
      MultiIndex rest{};
      for (int i = 0; i < g.n; ++i) {
        rest[i] = alpha[i] - gam[i];
        w *= binomial(alpha[i], gam[i]) * std::pow(1.0 - tau, gam[i]) * std::pow(tau, rest[i]);
      }
      if (w != 0.0) {
        Eigen::MatrixXcd R;
        if (order(rest) == 0) {
          R = Eigen::MatrixXcd::Zero(D, D);
          for (int p = 0; p < D; ++p) R(p, p) = vals[p];
        } else {
          R = kron_powers(pw, rest, g);
          for (int p = 0; p < D; ++p) R.row(p) *= vals[p];
        }
        for (int i = 0; i < g.n; ++i)
          if (gam[i] > 0) apply_left_axis(R, i, pw[gam[i]], g.N, g.n);
        op.a += w * R;
      }
      int v = 0;
      while (v < g.n && ++gam[v] > alpha[v]) gam[v++] = 0;
      if (v == g.n) break;
    }
  }
  op.hermitian = (tau == 0.5) && real;
  return op;
}

OperatorMatrix kn_quantize(const PolySymbol& s, const Grid& g, const QuantizeOptions& opt) {
  return tau_quantize(s, 1.0, g, opt);
}

OperatorMatrix weyl_quantize(const PolySymbol& s, const Grid& g, const QuantizeOptions& opt) {
  return tau_quantize(s, 0.5, g, opt);
}

double bandwidth_tail(const SymbolEvaluator& s, const Grid& g) {
  double worst = 0.0;
  std::vector<std::vector<double>> probes;
  probes.push_back(std::vector<double>(g.n, 0.0));
  for (int i = 0; i < g.n; ++i) {
    std::vector<double> xi(g.n, 0.0);
    xi[i] = g.frequency(g.N / 4);
    probes.push_back(xi);
  }
  for (const auto& xi : probes) {
    worst = std::max(worst, lines_tail(g, [&](const std::vector<double>& x) {
                       return s.value(PhasePoint(x, xi));
                     }));
  }
  return worst;
}

OperatorMatrix kn_quantize(const SymbolEvaluator& s, const Grid& g, const QuantizeOptions& opt) {
  if (s.n != g.n) throw ArgumentError("kn_quantize: dimension mismatch");
  const double tail = bandwidth_tail(s, g);
  if (tail > opt.nyquist_tail)
    throw GridError("kn_quantize: symbol not resolved by grid (tail " + std::to_string(tail) + ")");
  const int D = g.size();
  OperatorMatrix op;
  op.grid = g;
  op.tau = 1.0;
  op.symbol = s.name;
  op.a.resize(D, D);
  std::vector<int> dims(g.n, g.N);
  fftw_complex* in = fftw_alloc_complex(D);
  fftw_complex* out = fftw_alloc_complex(D);
  fftw_plan plan = fftw_plan_dft(g.n, dims.data(), in, out, FFTW_FORWARD, FFTW_ESTIMATE);
  std::vector<std::vector<int>> modes(D);
  for (int p = 0; p < D; ++p) {
    auto kk = g.unflatten(p);
    for (auto& k : kk)
      if (k >= g.N / 2) k -= g.N;
    modes[p] = kk;
  }
  std::vector<double> xi(g.n);
  for (int j = 0; j < D; ++j) {
    const auto x = g.point(j);
    for (int p = 0; p < D; ++p) {
      double ph = 0.0;
      int ksum = 0;
      for (int i = 0; i < g.n; ++i) {
        xi[i] = g.frequency(modes[p][i]);
        ph += 2.0 * kPi * x[i] * xi[i];
        ksum += modes[p][i];
      }
      ph += kPi * ksum;
      const cdouble v = s.value(PhasePoint(x, xi)) * cdouble(std::cos(ph), std::sin(ph)) / double(D);
      in[p][0] = v.real();
      in[p][1] = v.imag();
    }
    fftw_execute(plan);
    for (int l = 0; l < D; ++l) op.a(j, l) = cdouble(out[l][0], out[l][1]);
  }
  fftw_destroy_plan(plan);
  fftw_free(in);
  fftw_free(out);
  return op;
}

OperatorMatrix tau_quantize(const SymbolEvaluator& s, double tau, const Grid& g, const QuantizeOptions& opt) {
  if (tau == 1.0) return kn_quantize(s, g, opt);
  if (!opt.allow_midpoint) throw UnsupportedError("tau_quantize: general symbols need the midpoint path enabled");
  if (tau < 0.0 || tau > 1.0) throw ArgumentError("tau_quantize: tau must lie in [0,1]");
  const double tail = bandwidth_tail(s, g);
  if (tail > opt.nyquist_tail)
    throw GridError("tau_quantize: symbol not resolved by grid (tail " + std::to_string(tail) + ")");
  const int D = g.size();
  if (D > 2048) throw UnsupportedError("tau_quantize: midpoint path limited to 2048 grid points");
  OperatorMatrix op;
  op.grid = g;
  op.tau = tau;
  op.symbol = s.name;
  op.approximate = true;
  op.a.resize(D, D);
  std::vector<std::vector<double>> pts(D), freqs(D);
  for (int p = 0; p < D; ++p) {
    pts[p] = g.point(p);
    auto kk = g.unflatten(p);
    freqs[p].resize(g.n);
    for (int i = 0; i < g.n; ++i) freqs[p][i] = g.frequency(kk[i] >= g.N / 2 ? kk[i] - g.N : kk[i]);
  }
  parallel_for(D, [&](std::size_t j) {
    std::vector<double> mid(g.n);
    for (int l = 0; l < D; ++l) {
      for (int i = 0; i < g.n; ++i) mid[i] = tau * pts[j][i] + (1.0 - tau) * pts[l][i];
      cdouble acc = 0.0;
      for (int p = 0; p < D; ++p) {
        double ph = 0.0;
        for (int i = 0; i < g.n; ++i) ph += 2.0 * kPi * (pts[j][i] - pts[l][i]) * freqs[p][i];
        acc += s.value(PhasePoint(mid, freqs[p])) * cdouble(std::cos(ph), std::sin(ph));
      }
      op.a(j, l) = acc / double(D);
    }
  });
  return op;
}

OperatorMatrix weyl_quantize(const SymbolEvaluator& s, const Grid& g, const QuantizeOptions& opt) {
  OperatorMatrix op = tau_quantize(s, 0.5, g, opt);
  return op;
}

Eigen::MatrixXcd low_mode_basis(const Grid& g, int kmax) {
  if (kmax >= g.N / 2) throw GridError("low_mode_basis: kmax must be below N/2");
  const int D = g.size();
  std::vector<std::vector<int>> ks;
  std::vector<int> k(g.n, -kmax);
  while (true) {
    ks.push_back(k);
    int v = 0;
    while (v < g.n && ++k[v] > kmax) k[v++] = -kmax;
    if (v == g.n) break;
  }
  Eigen::MatrixXcd B(D, ks.size());
  const double s = 1.0 / std::sqrt(double(D));
  for (int p = 0; p < D; ++p) {
    const auto x = g.point(p);
    for (size_t c = 0; c < ks.size(); ++c) {
      double ph = 0.0;
      for (int i = 0; i < g.n; ++i) ph += 2.0 * kPi * x[i] * g.frequency(ks[c][i]);
      B(p, c) = s * cdouble(std::cos(ph), std::sin(ph));
    }
  }
  return B;
}

double weighted_sobolev_norm(const Eigen::VectorXcd& u, const WeightEvaluator& w, double s_power, const Grid& g) {
  const double qw = std::pow(g.spacing(), 0.5 * g.n);
  if (s_power == 0.0) return qw * u.norm();
  QuantizeOptions opt;
  opt.allow_midpoint = true;
  opt.nyquist_tail = 1.0;
  const OperatorMatrix A = weyl_quantize(sym::real_power(weight_symbol(w), s_power), g, opt);
  return qw * (A.a * u).norm();
}

namespace {

template <class T>
void put(std::ofstream& os, T v) {
  if constexpr (std::endian::native == std::endian::big) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    os.write(b, sizeof(T));
  } else {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
}

template <class T>
T get(std::ifstream& is) {
  char b[sizeof(T)];
  is.read(b, sizeof(T));
  if (!is) throw Error("binary read: truncated file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace

void write_operator_binary(const OperatorMatrix& op, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  put<std::int64_t>(os, op.grid.n);
  put<std::int64_t>(os, op.grid.N);
  put<double>(os, op.grid.L);
  put<double>(os, op.tau);
  for (int j = 0; j < op.a.rows(); ++j)
    for (int l = 0; l < op.a.cols(); ++l) {
      put<double>(os, op.a(j, l).real());
      put<double>(os, op.a(j, l).imag());
    }
  if (!os) throw Error("write failed for " + path);
}

OperatorMatrix read_operator_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  OperatorMatrix op;
  const auto n = get<std::int64_t>(is);
  const auto N = get<std::int64_t>(is);
  const double L = get<double>(is);
  op.tau = get<double>(is);
  op.grid = Grid(static_cast<int>(n), L, static_cast<int>(N));
  const int D = op.grid.size();
  op.a.resize(D, D);
  for (int j = 0; j < D; ++j)
    for (int l = 0; l < D; ++l) {
      const double re = get<double>(is);
      const double im = get<double>(is);
      op.a(j, l) = cdouble(re, im);
    }
  return op;
}

void write_operator_csv(const OperatorMatrix& op, const std::string& path) {
  if (op.a.rows() > 4096) throw ArgumentError("write_operator_csv: matrix too large for CSV");
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  write_csv_row(os, {"row", "col", "re", "im"});
  for (int j = 0; j < op.a.rows(); ++j)
    for (int l = 0; l < op.a.cols(); ++l)
      write_csv_row(os, {std::to_string(j), std::to_string(l), csv_number(op.a(j, l).real()),
                         csv_number(op.a(j, l).imag())});
}

void write_vector_binary(const Grid& g, const Eigen::VectorXcd& v, const std::string& path) {
  write_vector_binary(g.n, g.N, g.L, v, path);
}

void write_vector_binary(int n, int N, double L, const Eigen::VectorXcd& v, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  put<std::int64_t>(os, n);
  put<std::int64_t>(os, N);
  put<double>(os, L);
  put<double>(os, std::nan(""));
  for (int j = 0; j < v.size(); ++j) {
    put<double>(os, v(j).real());
    put<double>(os, v(j).imag());
  }
}

}  // namespace weylab
