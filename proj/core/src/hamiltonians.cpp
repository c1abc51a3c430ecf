#include "weylab/hamiltonians.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "weylab/eigensolve.hpp"

namespace weylab {

DirichletGrid::DirichletGrid(int dim, double half, int points) : n(dim), L(half), N(points) {
  if (dim < 1 || dim > kMaxDim) throw GridError("DirichletGrid: dimension out of range");
  if (points < 8) throw GridError("DirichletGrid: N must be >= 8");
  if (!(half > 0.0)) throw GridError("DirichletGrid: L must be positive");
}

int DirichletGrid::size() const {
  int d = 1;
  for (int i = 0; i < n; ++i) d *= N;
  return d;
}

std::vector<double> DirichletGrid::point(int flat) const {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = coord(flat % N);
    flat /= N;
  }
  return x;
}

double HamiltonianMatrix::symmetry_residual() const {
  const Eigen::SparseMatrix<double> t = sparse.transpose();
  const double nrm = std::max(sparse.norm(), 1e-300);
  return (sparse - t).norm() / nrm;
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Trip = Eigen::Triplet<double>;

int stride(const DirichletGrid& g, int axis) {
  int s = 1;
  for (int i = 0; i < axis; ++i) s *= g.N;
  return s;
}

// Node index with Dirichlet data at -1 and N, and odd reflection across them
// for stencil points beyond the walls. Sign 0 marks a wall node.
std::pair<int, double> reflect(int q, int N) {
  if (q == -1 || q == N) return {0, 0.0};
  if (q < -1) return {-2 - q, -1.0};
  if (q > N) return {2 * N - q, -1.0};
  return {q, 1.0};
}

// Staggered difference from nodes to the N+1 half points along `axis`.
// Rows are flat indices of a grid whose `axis` extent is N+1.
Eigen::SparseMatrix<double> staggered(const DirichletGrid& g, int axis, int ord) {
  const int D = g.size();
  const int rows = D / g.N * (g.N + 1);
  const double h = g.h();
  std::vector<Trip> t;
  std::vector<std::pair<int, double>> st;
  if (ord == 2)
    st = {{0, -1.0}, {1, 1.0}};
  else
    st = {{-1, 1.0 / 24.0}, {0, -9.0 / 8.0}, {1, 9.0 / 8.0}, {2, -1.0 / 24.0}};
  const int s = stride(g, axis);
  for (int r = 0; r < rows; ++r) {
    // decode r with axis extent N+1
    int rem = r;
    std::vector<int> idx(g.n);
    for (int i = 0; i < g.n; ++i) {
      const int ext = (i == axis) ? g.N + 1 : g.N;
      idx[i] = rem % ext;
      rem /= ext;
    }
    // half point between node idx[axis]-1 and idx[axis]
    int base = 0;
    for (int i = 0; i < g.n; ++i)
      if (i != axis) base += idx[i] * stride(g, i);
    for (auto [off, w] : st) {
      const auto [node, sign] = reflect(idx[axis] - 1 + off, g.N);
      if (sign != 0.0) t.emplace_back(r, base + node * s, sign * w / h);
    }
  }
  Eigen::SparseMatrix<double> Dm(rows, D);
  Dm.setFromTriplets(t.begin(), t.end());
  return Dm;
}

std::vector<double> half_coord_point(const DirichletGrid& g, int axis, int r) {
  int rem = r;
  std::vector<double> x(g.n);
  for (int i = 0; i < g.n; ++i) {
    const int ext = (i == axis) ? g.N + 1 : g.N;
    const int k = rem % ext;
    rem /= ext;
    x[i] = (i == axis) ? g.coord(k) - 0.5 * g.h() : g.coord(k);
  }
  return x;
}

Eigen::SparseMatrix<double> centered(const DirichletGrid& g, int axis, int ord) {
  const int D = g.size();
  const double h = g.h();
  std::vector<std::pair<int, double>> st;
  if (ord == 2)
    st = {{-1, -0.5}, {1, 0.5}};
  else
    st = {{-2, 1.0 / 12.0}, {-1, -8.0 / 12.0}, {1, 8.0 / 12.0}, {2, -1.0 / 12.0}};
  const int s = stride(g, axis);
  std::vector<Trip> t;
  for (int p = 0; p < D; ++p) {
    const int k = (p / s) % g.N;
    for (auto [off, w] : st) {
      const auto [q, sign] = reflect(k + off, g.N);
      if (sign != 0.0) t.emplace_back(p, p + (q - k) * s, sign * w / h);
    }
  }
  Eigen::SparseMatrix<double> Dm(D, D);
  Dm.setFromTriplets(t.begin(), t.end());
  return Dm;
}

}  // namespace

Potential Potential::zero() { return {"zero", [](std::span<const double>) { return 0.0; }}; }

Potential Potential::constant(double c) {
  return {"constant(" + std::to_string(c) + ")", [c](std::span<const double>) { return c; }};
}

Potential Potential::quadratic() {
  return {"quadratic", [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return s;
          }};
}

Potential Potential::step() {
  return {"step", [](std::span<const double> x) {
            const long long k = static_cast<long long>(std::floor(x[0]));
            return -5.0 + double(((k % 2) + 2) % 2);
          }};
}

Potential Potential::bounded_noise(std::uint64_t seed) {
  return {"bounded_noise(" + std::to_string(seed) + ")", [seed](std::span<const double> x) {
            std::uint64_t h = splitmix(seed);
            for (double v : x) h = splitmix(h ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(std::floor(v))));
            return -1.0 + 2.0 * double(h >> 11) * 0x1.0p-53;
          }};
}

Potential Potential::negative_quartic() {
  return {"negative_quartic", [](std::span<const double> x) {
            double s = 0.0;
            for (double v : x) s += v * v;
            return -s * s;
          }};
}

Potential Potential::table(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("potential table: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> r;
    double v;
    while (ss >> v) r.push_back(v);
    if (r.size() < 2) throw ConfigError("potential table: malformed line: " + line);
    if (!rows.empty() && r.size() != rows[0].size()) throw ConfigError("potential table: ragged rows");
    rows.push_back(r);
  }
  if (rows.empty()) throw ConfigError("potential table: no data in " + path);
  return {"table(" + path + ")", [rows](std::span<const double> x) {
            double best = INFINITY, val = 0.0;
            for (const auto& r : rows) {
              double d = 0.0;
              for (size_t i = 0; i + 1 < r.size() && i < x.size(); ++i) d += (r[i] - x[i]) * (r[i] - x[i]);
              if (d < best) {
                best = d;
                val = r.back();
              }
            }
            return val;
          }};
}

HamiltonianMatrix sum_of_squares_matrix(const HormanderSystem& sys, const DirichletGrid& g,
                                        const AssemblyOptions& opt) {
  if (sys.n != g.n) throw ArgumentError("sum_of_squares_matrix: dimension mismatch");
  if (opt.order != 2 && opt.order != 4) throw ArgumentError("sum_of_squares_matrix: order must be 2 or 4");
  const int D = g.size();
  Eigen::SparseMatrix<double> K(D, D);
  std::string prov = "sum_of_squares{";
  for (const auto& f : sys.fields) {
    prov += f.name + ";";
    std::vector<int> axes;
    for (int i = 0; i < g.n; ++i)
      if (f.coeff[i]) axes.push_back(i);
    if (axes.empty()) continue;
    if (axes.size() == 1) {
      const int a = axes[0];
      const Eigen::SparseMatrix<double> Dm = staggered(g, a, opt.order);
      Eigen::VectorXd w(Dm.rows());
      for (int r = 0; r < Dm.rows(); ++r) {
        const double c = f.coeff[a]->value(half_coord_point(g, a, r));
        w(r) = c * c;
      }
      K += Eigen::SparseMatrix<double>(Dm.transpose() * w.asDiagonal() * Dm);
    } else {
      Eigen::SparseMatrix<double> B(D, D);
      for (int a : axes) {
        Eigen::VectorXd c(D);
        for (int p = 0; p < D; ++p) c(p) = f.coeff[a]->value(g.point(p));
        B += Eigen::SparseMatrix<double>(c.asDiagonal() * centered(g, a, opt.order));
      }
      K += Eigen::SparseMatrix<double>(B.transpose() * B);
    }
  }
  prov += "}";
  K.prune(0.0);
  // Symmetrize exactly; products above are symmetric up to summation order.
  Eigen::SparseMatrix<double> Kt = K.transpose();
  HamiltonianMatrix H;
  H.sparse = 0.5 * (K + Kt);
  H.grid = g;
  H.provenance = prov;
  return H;
}

namespace {
HamiltonianMatrix add_diag(HamiltonianMatrix H, const std::function<double(std::span<const double>)>& V,
                           const std::string& what) {
  const int D = H.size();
  std::vector<Trip> t;
  for (int p = 0; p < D; ++p) t.emplace_back(p, p, V(H.grid.point(p)));
  Eigen::SparseMatrix<double> Vd(D, D);
  Vd.setFromTriplets(t.begin(), t.end());
  H.sparse += Vd;
  H.provenance += " + " + what;
  return H;
}
}  // namespace

HamiltonianMatrix daho_matrix(double c_prime, const DirichletGrid& g, const AssemblyOptions& opt) {
  if (g.n != 2) throw ArgumentError("daho_matrix: n must be 2");
  auto H = sum_of_squares_matrix(grushin_system(std::make_shared<const CutoffProfileSquared>(c_prime)), g, opt);
  H = add_diag(std::move(H), Potential::quadratic().value, "|x|^2");
  H.provenance = "daho(c_prime=" + std::to_string(c_prime) + ")";
  return H;
}

HamiltonianMatrix harmonic_matrix(const DirichletGrid& g, const AssemblyOptions& opt) {
  auto H = sum_of_squares_matrix(full_frame(g.n), g, opt);
  H = add_diag(std::move(H), Potential::quadratic().value, "|x|^2");
  H.provenance = "harmonic";
  return H;
}

HamiltonianMatrix grushin_pure_matrix(const DirichletGrid& g, const AssemblyOptions& opt) {
  auto H = sum_of_squares_matrix(grushin_pure_system(), g, opt);
  H = add_diag(std::move(H), Potential::quadratic().value, "|x|^2");
  H.provenance = "grushin_pure";
  return H;
}

CheckReport validate_p2(const Potential& V, const std::vector<Point>& sample, const P2Options& opt) {
  CheckReport r;
  r.kind = "p2";
  r.sample_size = sample.size();
  if (sample.empty()) {
    r.vacuous = true;
    return r;
  }
  std::vector<double> rad(sample.size()), val(sample.size());
  double vmin = INFINITY, rmax = 0.0;
  for (size_t k = 0; k < sample.size(); ++k) {
    double s = 0.0;
    for (double v : sample[k]) s += v * v;
    rad[k] = std::sqrt(s);
    val[k] = V.value(sample[k]);
    if (!std::isfinite(val[k])) throw ArgumentError("validate_p2: non-finite potential value");
    vmin = std::min(vmin, val[k]);
    rmax = std::max(rmax, rad[k]);
  }
  double C = 0.0;
  for (size_t k = 0; k < sample.size(); ++k)
    if (rad[k] >= opt.C1) C = std::max(C, std::abs(val[k]) / (rad[k] * rad[k]));
  r.constants["C"] = C;
  r.constants["C1"] = opt.C1;
  r.constants["C2"] = std::max(0.0, -vmin);
  r.constants["max_radius"] = rmax;
  if (rmax < 10.0) r.notes.push_back("sample does not reach |x| >= 10");

  // Radial shells between C1 and rmax, geometric.
  const int S = 4;
  const double lo = std::max(opt.C1, 1e-12);
  if (rmax > lo) {
    std::vector<double> q(S, 0.0), d(S, 0.0);
    std::vector<int> cnt(S, 0), qarg(S, -1), darg(S, -1);
    for (size_t k = 0; k < sample.size(); ++k) {
      if (rad[k] < lo) continue;
      int s = static_cast<int>(S * std::log(rad[k] / lo) / std::log(rmax / lo + 1e-300));
      s = std::clamp(s, 0, S - 1);
      ++cnt[s];
      const double qq = std::abs(val[k]) / (rad[k] * rad[k]);
      if (qq > q[s]) {
        q[s] = qq;
        qarg[s] = static_cast<int>(k);
      }
      const double dd = std::max(0.0, -val[k]);
      if (dd > d[s]) {
        d[s] = dd;
        darg[s] = static_cast<int>(k);
      }
    }
    auto growing = [&](const std::vector<double>& v) {
      std::vector<double> seen;
      for (int s = 0; s < S; ++s)
        if (cnt[s]) seen.push_back(v[s]);
      if (seen.size() < 3) return false;
      const size_t m = seen.size();
      return seen[m - 1] > seen[m - 2] && seen[m - 2] > seen[m - 3] &&
             seen[m - 1] > opt.growth_factor * std::max(seen[m - 3], 1e-300);
    };
    if (growing(q)) {
      r.notes.push_back("V1: |V|/|x|^2 grows across radial shells");
      for (int s = 0; s < S; ++s)
        if (qarg[s] >= 0) r.add_witness({sample[qarg[s]], {}, q[s], C, "V1 shell " + std::to_string(s)});
    }
    if (growing(d)) {
      r.notes.push_back("V2: negative part of V unbounded across radial shells");
      for (int s = 0; s < S; ++s)
        if (darg[s] >= 0) r.add_witness({sample[darg[s]], {}, -d[s], -d[0], "V2 shell " + std::to_string(s)});
    }
  }
  r.pass = r.witnesses.empty();
  return r;
}

HamiltonianMatrix hamiltonian_with_potential(const HamiltonianMatrix& kinetic, const Potential& V,
                                             bool override_check) {
  if (!override_check) {
    std::vector<Point> nodes;
    for (int p = 0; p < kinetic.size(); ++p) nodes.push_back(kinetic.grid.point(p));
    const auto rep = validate_p2(V, nodes);
    if (!rep.pass) throw PreconditionError("hamiltonian_with_potential: potential fails the P2 check");
  }
  return add_diag(kinetic, V.value, V.descriptor);
}

Eigen::MatrixXd fractional_power(const Eigen::MatrixXd& H, double beta, double shift) {
  Eigen::MatrixXd A = H;
  A.diagonal().array() += shift;
  const DenseEigen e = dense_eigh(A, true);
  if (e.values.minCoeff() <= 0.0)
    throw PreconditionError("fractional_power: H + shift is not positive definite (shift too small)");
  const Eigen::VectorXd p = e.values.array().pow(beta);
  return e.vectors * p.asDiagonal() * e.vectors.transpose();
}

Eigen::MatrixXd fractional_power(const HamiltonianMatrix& H, double beta, double shift) {
  return fractional_power(H.dense(), beta, shift);
}

}  // namespace weylab
