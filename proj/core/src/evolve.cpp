#include "weylab/evolve.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <ostream>

#include "weylab/parallel.hpp"
#include "weylab/report.hpp"

namespace weylab {

double EvolutionTrace::max_norm_drift() const {
  if (norms.empty()) return 0.0;
  double d = 0.0;
  for (double v : norms) d = std::max(d, std::abs(v - norms[0]));
  return d / norms[0];
}

void EvolutionTrace::write_csv(std::ostream& os) const {
  write_csv_row(os, {"time", "norm", "energy"});
  for (size_t i = 0; i < times.size(); ++i)
    write_csv_row(os, {csv_number(times[i]), csv_number(norms[i]), csv_number(energies[i])});
}

namespace {

double symmetry_defect(const Eigen::MatrixXd& H) {
  return (H - H.transpose()).norm() / std::max(H.norm(), 1e-300);
}

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw ArgumentError("evolve: no times given");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1])) throw ArgumentError("evolve: times must be strictly increasing");
}

Eigen::VectorXcd real_times(const Eigen::MatrixXd& A, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = A * v.real();
  const Eigen::VectorXd im = A * v.imag();
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

Eigen::VectorXcd real_transpose_times(const Eigen::MatrixXd& A, const Eigen::VectorXcd& v) {
  const Eigen::VectorXd re = A.transpose() * v.real();
  const Eigen::VectorXd im = A.transpose() * v.imag();
  Eigen::VectorXcd out(re.size());
  out.real() = re;
  out.imag() = im;
  return out;
}

}  // namespace

Propagator::Propagator(EvolutionKind kind, const Eigen::MatrixXd& H, const EvolveOptions& opt) : kind_(kind), opt_(opt) {
  if (H.rows() != H.cols()) throw ArgumentError("Propagator: matrix not square");
  if (symmetry_defect(H) > 1e-12) throw PreconditionError("Propagator: H is not symmetric");
  if (opt.policy == TimeStepPolicy::CrankNicolson) {
    sparse_ = H.sparseView();
    if (kind == EvolutionKind::Heat) {
      const auto r = eigensolve(sparse_, 1, {.vectors = false});
      values_ = r.eigenvalues;
    } else {
      values_ = Eigen::VectorXd::Zero(1);
    }
  } else {
    const DenseEigen e = dense_eigh(H, true);
    values_ = e.values;
    vectors_ = e.vectors;
  }
  check_contracts();
}

Propagator::Propagator(EvolutionKind kind, const HamiltonianMatrix& H, const EvolveOptions& opt) : kind_(kind), opt_(opt) {
  if (H.symmetry_residual() > 1e-12) throw PreconditionError("Propagator: H is not symmetric");
  if (opt.policy == TimeStepPolicy::CrankNicolson) {
    sparse_ = H.sparse;
    if (kind == EvolutionKind::Heat) {
      const auto r = eigensolve(H.sparse, 1, {.vectors = false});
      values_ = r.eigenvalues;
    } else {
      values_ = Eigen::VectorXd::Zero(1);
    }
  } else {
    const DenseEigen e = dense_eigh(H.dense(), true);
    values_ = e.values;
    vectors_ = e.vectors;
  }
  check_contracts();
}

void Propagator::check_contracts() const {
  if (kind_ == EvolutionKind::Heat && values_.size() && values_.minCoeff() < -1e-9)
    throw PreconditionError("Propagator: heat flow needs H >= 0; lowest eigenvalue " +
                            std::to_string(values_.minCoeff()) + " breaks the contraction contract");
}

Propagator Propagator::fractional(double beta, double shift) const {
  if (opt_.policy != TimeStepPolicy::Eigen) throw UnsupportedError("Propagator::fractional: eigenbasis policy only");
  if (!(beta > 0.0)) throw ArgumentError("Propagator::fractional: beta must be positive");
  if (values_.minCoeff() + shift <= 0.0)
    throw PreconditionError("Propagator::fractional: H + shift is not positive definite (shift too small)");
  Propagator p;
  p.kind_ = kind_;
  p.opt_ = opt_;
  p.vectors_ = vectors_;
  p.values_ = (values_.array() + shift).pow(beta);
  if (beta == 1.0 && shift == 0.0) p.values_ = values_;
  return p;
}

Eigen::VectorXcd Propagator::apply(double t, const Eigen::VectorXcd& f) const {
  if (opt_.policy == TimeStepPolicy::CrankNicolson) {
    if (t == 0.0) return f;
    return evolve_cn(f, {0.0, t}, true).snapshots.back();
  }
  if (f.size() != values_.size()) throw ArgumentError("Propagator::apply: size mismatch");
  Eigen::VectorXcd c = real_transpose_times(vectors_, f);
  for (Eigen::Index k = 0; k < c.size(); ++k) {
    const double l = values_(k);
    c(k) *= kind_ == EvolutionKind::Schrodinger ? std::polar(1.0, -t * l) : cdouble(std::exp(-t * l));
  }
  return real_times(vectors_, c);
}

double Propagator::energy(const Eigen::VectorXcd& u) const {
  if (opt_.policy == TimeStepPolicy::CrankNicolson) {
    const Eigen::VectorXd re = sparse_ * u.real();
    const Eigen::VectorXd im = sparse_ * u.imag();
    return u.real().dot(re) + u.imag().dot(im);
  }
  const Eigen::VectorXcd c = real_transpose_times(vectors_, u);
  double e = 0.0;
  for (Eigen::Index k = 0; k < c.size(); ++k) e += values_(k) * std::norm(c(k));
  return e;
}

EvolutionTrace Propagator::evolve(const Eigen::VectorXcd& f, const std::vector<double>& times) const {
  check_times(times);
  if (f.norm() == 0.0) throw ArgumentError("evolve: initial state is zero");
  if (opt_.policy == TimeStepPolicy::CrankNicolson) return evolve_cn(f, times, opt_.snapshots);
  EvolutionTrace tr;
  tr.kind = kind_;
  tr.times = times;
  tr.convention = kind_ == EvolutionKind::Heat ? "u(t) = exp(-tH) f, H >= 0" : "u(t) = exp(-itH) f";
  tr.policy = "eigenbasis";
  const size_t T = times.size();
  tr.norms.resize(T);
  tr.energies.resize(T);
  if (opt_.snapshots) tr.snapshots.resize(T);
  const Eigen::VectorXcd c0 = real_transpose_times(vectors_, f);
  parallel_for(T, [&](std::size_t i) {
    Eigen::VectorXcd c = c0;
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      const double l = values_(k);
      c(k) *= kind_ == EvolutionKind::Schrodinger ? std::polar(1.0, -times[i] * l) : cdouble(std::exp(-times[i] * l));
    }
    const Eigen::VectorXcd u = real_times(vectors_, c);
    tr.norms[i] = u.norm();
    tr.energies[i] = energy(u);
    if (opt_.snapshots) tr.snapshots[i] = u;
  });
  return tr;
}

EvolutionTrace Propagator::evolve_cn(const Eigen::VectorXcd& f, const std::vector<double>& times, bool keep) const {
  using SpC = Eigen::SparseMatrix<cdouble>;
  const int D = static_cast<int>(sparse_.rows());
  if (f.size() != D) throw ArgumentError("evolve: size mismatch");
  EvolutionTrace tr;
  tr.kind = kind_;
  tr.times = times;
  tr.convention = kind_ == EvolutionKind::Heat ? "u(t) = exp(-tH) f, H >= 0" : "u(t) = exp(-itH) f";
  tr.policy = "crank-nicolson";
  const cdouble unit = kind_ == EvolutionKind::Schrodinger ? cdouble(0.0, 1.0) : cdouble(1.0, 0.0);
  SpC I(D, D);
  I.setIdentity();
  const SpC Hc = sparse_.cast<cdouble>();
  double cached_dt = -1.0;
  Eigen::SparseLU<SpC> lu;
  SpC B;
  Eigen::VectorXcd u = f;
  double now = 0.0;
  for (double t : times) {
    const double span = t - now;
    if (span < 0.0) throw ArgumentError("evolve: negative time under Crank-Nicolson");
    if (span > 0.0) {
      const int steps = std::max(1, static_cast<int>(std::ceil(span / opt_.cn_dt - 1e-9)));
      const double dt = span / steps;
      if (std::abs(dt - cached_dt) > 1e-14 * dt) {
        const SpC A = I + (0.5 * dt) * unit * Hc;
        B = I - (0.5 * dt) * unit * Hc;
        lu.compute(A);
        if (lu.info() != Eigen::Success) throw SolverError("evolve: Crank-Nicolson factorization failed");
        cached_dt = dt;
      }
      for (int s = 0; s < steps; ++s) u = lu.solve(B * u);
      now = t;
    }
    tr.norms.push_back(u.norm());
    tr.energies.push_back(energy(u));
    if (keep) tr.snapshots.push_back(u);
  }
  return tr;
}

EvolutionTrace schrodinger_evolve(const HamiltonianMatrix& H, const Eigen::VectorXcd& f,
                                  const std::vector<double>& times, const EvolveOptions& opt) {
  return Propagator(EvolutionKind::Schrodinger, H, opt).evolve(f, times);
}

EvolutionTrace heat_evolve(const HamiltonianMatrix& H, const Eigen::VectorXcd& f, const std::vector<double>& times,
                           const EvolveOptions& opt) {
  return Propagator(EvolutionKind::Heat, H, opt).evolve(f, times);
}

EvolutionTrace fractional_evolve(const HamiltonianMatrix& H, double beta, double shift, const Eigen::VectorXcd& f,
                                 const std::vector<double>& times, EvolutionKind kind) {
  return Propagator(kind, H).fractional(beta, shift).evolve(f, times);
}

}  // namespace weylab
