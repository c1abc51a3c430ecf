#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "weylab/eigensolve.hpp"

namespace weylab {

DenseEigen dense_eigh(const Eigen::MatrixXd& a, bool vectors) {
  if (a.rows() != a.cols()) throw ArgumentError("dense_eigh: matrix not square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  DenseEigen e;
  Eigen::MatrixXd w = a;
  e.values.resize(n);
  if (n == 0) return e;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, w.data(), n, e.values.data());
  if (info != 0) throw SolverError("dense_eigh: dsyevd failed, info = " + std::to_string(info));
  if (vectors) e.vectors = std::move(w);
  return e;
}

DenseEigenC dense_eigh(const Eigen::MatrixXcd& a, bool vectors) {
  if (a.rows() != a.cols()) throw ArgumentError("dense_eigh: matrix not square");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  DenseEigenC e;
  Eigen::MatrixXcd w = a;
  e.values.resize(n);
  if (n == 0) return e;
  const lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n, w.data(), n, e.values.data());
  if (info != 0) throw SolverError("dense_eigh: zheevd failed, info = " + std::to_string(info));
  if (vectors) e.vectors = std::move(w);
  return e;
}

namespace {

using MatVec = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

void orthogonalize(Eigen::VectorXd& w, const Eigen::MatrixXd& Q, int m) {
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd c = Q.leftCols(m).transpose() * w;
    w.noalias() -= Q.leftCols(m) * c;
  }
}

Eigen::VectorXd random_unit(int D, std::mt19937& rng) {
  std::normal_distribution<double> N01;
  Eigen::VectorXd v(D);
  for (int i = 0; i < D; ++i) v(i) = N01(rng);
  return v / v.norm();
}

// Extreme Ritz values of a symmetric operator.
std::pair<double, double> lanczos_extremes(const MatVec& op, int D, int steps, unsigned seed) {
  std::mt19937 rng(seed);
  steps = std::min(steps, D);
  Eigen::MatrixXd Q(D, steps);
  Eigen::VectorXd alpha(steps), beta(steps);
  Q.col(0) = random_unit(D, rng);
  Eigen::VectorXd w(D);
  int m = 0;
  for (int j = 0; j < steps; ++j) {
    op(Q.col(j), w);
    alpha(j) = Q.col(j).dot(w);
    orthogonalize(w, Q, j + 1);
    m = j + 1;
    beta(j) = w.norm();
    if (j + 1 == steps) break;
    if (beta(j) < 1e-12 * std::max(1.0, std::abs(alpha(j)))) break;
    Q.col(j + 1) = w / beta(j);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(alpha.head(m), beta.head(std::max(m - 1, 0)), Eigen::EigenvaluesOnly);
  return {es.eigenvalues()(0), es.eigenvalues()(m - 1)};
}

int count_below(const Eigen::SparseMatrix<double>& H, double mu) {
  Eigen::SparseMatrix<double> A = H;
  Eigen::SparseMatrix<double> I(H.rows(), H.cols());
  I.setIdentity();
  A -= mu * I;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) return -1;
  return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
}

void fill_residuals(SpectralResult& r, const MatVec& op) {
  const int k = static_cast<int>(r.eigenvalues.size());
  r.residuals.assign(k, 0.0);
  Eigen::VectorXd w(r.eigenvectors.rows());
  for (int j = 0; j < k; ++j) {
    op(r.eigenvectors.col(j), w);
    r.residuals[j] = (w - r.eigenvalues(j) * r.eigenvectors.col(j)).norm();
  }
}

void enforce_contract(const SpectralResult& r, double tol) {
  for (size_t j = 0; j < r.residuals.size(); ++j)
    if (!(r.residuals[j] <= tol * r.h_norm))
      throw SolverError("eigensolve: residual " + std::to_string(r.residuals[j]) + " of pair " + std::to_string(j) +
                        " exceeds " + std::to_string(tol) + " * |H| (" + r.solver + ")");
}

SpectralResult dense_lowest(const Eigen::MatrixXd& A, int k) {
  const lapack_int n = static_cast<lapack_int>(A.rows());
  Eigen::MatrixXd a = A;
  Eigen::VectorXd w(n);
  Eigen::MatrixXd z(n, std::max(k, 1));
  std::vector<lapack_int> isuppz(2 * std::max<lapack_int>(k, 1));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'I', 'L', n, a.data(), n, 0.0, 0.0, 1, k, 0.0, &found,
                                         w.data(), z.data(), n, isuppz.data());
  if (info != 0 || found != k) throw SolverError("eigensolve: dsyevr failed, info = " + std::to_string(info));
  SpectralResult r;
  r.eigenvalues = w.head(k);
  r.eigenvectors = z.leftCols(k);
  r.solver = "lapack-dsyevr";
  return r;
}

SpectralResult lanczos_lowest(const Eigen::SparseMatrix<double>& H, int k, const EigensolveOptions& opt, double hnorm) {
  const int D = static_cast<int>(H.rows());
  const MatVec hop = [&H](const Eigen::VectorXd& v, Eigen::VectorXd& w) { w.noalias() = H * v; };
  auto [tmin, tmax] = lanczos_extremes(hop, D, 80, opt.seed + 1);
  double margin = 0.02 * (tmax - tmin) + 1e-3 * std::max(1.0, std::abs(tmin));
  std::vector<std::string> trace;
  for (int attempt = 0; attempt < 4; ++attempt, margin *= 4.0) {
    const double sigma = tmin - margin;
    Eigen::SparseMatrix<double> A = H;
    Eigen::SparseMatrix<double> I(D, D);
    I.setIdentity();
    A -= sigma * I;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
    if (ldlt.info() != Eigen::Success) {
      trace.push_back("attempt " + std::to_string(attempt) + ": factorization failed");
      continue;
    }
    const MatVec inv = [&ldlt](const Eigen::VectorXd& v, Eigen::VectorXd& w) { w = ldlt.solve(v); };

    const int cap = std::min(D, opt.max_krylov > 0 ? opt.max_krylov : std::max(3 * k + 100, 2 * k + 200));
    std::mt19937 rng(opt.seed + 17 * attempt);
    Eigen::MatrixXd Q(D, cap);
    Eigen::VectorXd alpha(cap), beta(cap);
    Q.col(0) = random_unit(D, rng);
    Eigen::VectorXd w(D);
    int next_check = std::min(cap, k + 40);
    for (int j = 0; j < cap; ++j) {
      inv(Q.col(j), w);
      alpha(j) = Q.col(j).dot(w);
      orthogonalize(w, Q, j + 1);
      beta(j) = w.norm();
      const int m = j + 1;
      const bool breakdown = beta(j) < 1e-13 * std::abs(alpha(j));
      if (m >= k && (m == next_check || m == cap || breakdown)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(alpha.head(m), beta.head(m - 1), Eigen::ComputeEigenvectors);
        SpectralResult r;
        r.eigenvalues.resize(k);
        r.eigenvectors.resize(D, k);
        for (int i = 0; i < k; ++i) {
          const int c = m - 1 - i;  // largest theta first
          r.eigenvalues(i) = sigma + 1.0 / es.eigenvalues()(c);
          Eigen::VectorXd y = Q.leftCols(m) * es.eigenvectors().col(c);
          r.eigenvectors.col(i) = y / y.norm();
        }
        r.h_norm = hnorm;
        r.solver = "shift-invert-lanczos";
        fill_residuals(r, hop);
        const double worst = *std::max_element(r.residuals.begin(), r.residuals.end());
        trace.push_back("attempt " + std::to_string(attempt) + " m=" + std::to_string(m) +
                        " worst residual=" + std::to_string(worst));
        if (worst <= opt.residual_tol * hnorm) {
          const double delta = 1e-7 * std::max(1.0, std::abs(r.eigenvalues(k - 1)));
          const double mu = r.eigenvalues(k - 1) - delta;
          const int computed = static_cast<int>((r.eigenvalues.array() < mu).count());
          const int below = count_below(H, mu);
          if (below == computed) {
            if (!opt.vectors) r.eigenvectors.resize(0, 0);
            return r;
          }
          trace.push_back("inertia count " + std::to_string(below) + " != " + std::to_string(computed));
          break;
        }
        next_check = std::min(cap, m + std::max(20, m / 2));
      }
      if (m == cap) break;
      if (breakdown) {
        Eigen::VectorXd v = random_unit(D, rng);
        orthogonalize(v, Q, m);
        beta(j) = 0.0;
        Q.col(j + 1) = v / v.norm();
      } else {
        Q.col(j + 1) = w / beta(j);
      }
    }
  }
  std::string msg = "eigensolve: Lanczos did not converge;";
  for (const auto& t : trace) msg += " [" + t + "]";
  throw SolverError(msg);
}

}  // namespace

double symmetric_norm_estimate(const Eigen::SparseMatrix<double>& H, int steps, unsigned seed) {
  const MatVec op = [&H](const Eigen::VectorXd& v, Eigen::VectorXd& w) { w.noalias() = H * v; };
  auto [lo, hi] = lanczos_extremes(op, static_cast<int>(H.rows()), steps, seed);
  return std::max(std::abs(lo), std::abs(hi));
}

SpectralResult eigensolve(const Eigen::SparseMatrix<double>& H, int k, const EigensolveOptions& opt) {
  const int D = static_cast<int>(H.rows());
  if (H.rows() != H.cols()) throw ArgumentError("eigensolve: matrix not square");
  if (k < 1 || k > D) throw ArgumentError("eigensolve: k must lie in [1, dimension]");
  const double hnorm = symmetric_norm_estimate(H, 60, opt.seed);
  SpectralResult r;
  if (D <= opt.dense_limit) {
    r = dense_lowest(Eigen::MatrixXd(H), k);
    r.h_norm = hnorm;
    fill_residuals(r, [&H](const Eigen::VectorXd& v, Eigen::VectorXd& w) { w.noalias() = H * v; });
    if (!opt.vectors) r.eigenvectors.resize(0, 0);
  } else {
    r = lanczos_lowest(H, k, opt, hnorm);
  }
  enforce_contract(r, opt.residual_tol);
  return r;
}

SpectralResult eigensolve(const HamiltonianMatrix& H, int k, const EigensolveOptions& opt) {
  return eigensolve(H.sparse, k, opt);
}

SpectralResult eigensolve(const Eigen::MatrixXd& H, int k, const EigensolveOptions& opt) {
  const int D = static_cast<int>(H.rows());
  if (H.rows() != H.cols()) throw ArgumentError("eigensolve: matrix not square");
  if (k < 1 || k > D) throw ArgumentError("eigensolve: k must lie in [1, dimension]");
  if (D > opt.dense_limit) return eigensolve(Eigen::SparseMatrix<double>(H.sparseView()), k, opt);
  const MatVec op = [&H](const Eigen::VectorXd& v, Eigen::VectorXd& w) { w.noalias() = H * v; };
  SpectralResult r = dense_lowest(H, k);
  auto [lo, hi] = lanczos_extremes(op, D, 60, opt.seed);
  r.h_norm = std::max(std::abs(lo), std::abs(hi));
  fill_residuals(r, op);
  if (!opt.vectors) r.eigenvectors.resize(0, 0);
  enforce_contract(r, opt.residual_tol);
  return r;
}

}  // namespace weylab
