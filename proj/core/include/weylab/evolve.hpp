#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <string>
#include <vector>

#include "weylab/eigensolve.hpp"
#include "weylab/hamiltonians.hpp"

namespace weylab {

enum class EvolutionKind { Schrodinger, Heat };

enum class TimeStepPolicy {
  /// Exact propagation in the eigenbasis.
  Eigen,
  /// Crank-Nicolson with a sparse LU factorization; contracts hold to about 1e-6.
  CrankNicolson,
};

struct EvolveOptions {
  TimeStepPolicy policy = TimeStepPolicy::Eigen;
  double cn_dt = 1e-3;
  bool snapshots = false;
};

struct EvolutionTrace {
  EvolutionKind kind = EvolutionKind::Schrodinger;
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<double> energies;
  std::vector<Eigen::VectorXcd> snapshots;
  /// The stored operator H is nonnegative; the heat flow is e^{-tH}.
  std::string convention;
  std::string policy;

  double max_norm_drift() const;  // relative to norms[0] when times start at 0
  void write_csv(std::ostream& os) const;
};

class Propagator {
 public:
  /// H must be symmetric. Heat propagators also require lambda_min >= -1e-9.
  Propagator(EvolutionKind kind, const HamiltonianMatrix& H, const EvolveOptions& opt = {});
  Propagator(EvolutionKind kind, const Eigen::MatrixXd& H, const EvolveOptions& opt = {});

  /// Spectral generator (H + shift)^beta sharing H's eigenvectors.
  Propagator fractional(double beta, double shift) const;

  EvolutionKind kind() const { return kind_; }
  int size() const { return static_cast<int>(values_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return values_; }

  Eigen::VectorXcd apply(double t, const Eigen::VectorXcd& f) const;
  double energy(const Eigen::VectorXcd& u) const;
  EvolutionTrace evolve(const Eigen::VectorXcd& f, const std::vector<double>& times) const;

 private:
  Propagator() = default;
  void check_contracts() const;
  EvolutionTrace evolve_cn(const Eigen::VectorXcd& f, const std::vector<double>& times, bool keep) const;

  EvolutionKind kind_ = EvolutionKind::Schrodinger;
  EvolveOptions opt_;
  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  Eigen::SparseMatrix<double> sparse_;  // generator for the Crank-Nicolson path
};

EvolutionTrace schrodinger_evolve(const HamiltonianMatrix& H, const Eigen::VectorXcd& f,
                                  const std::vector<double>& times, const EvolveOptions& opt = {});
EvolutionTrace heat_evolve(const HamiltonianMatrix& H, const Eigen::VectorXcd& f, const std::vector<double>& times,
                           const EvolveOptions& opt = {});
EvolutionTrace fractional_evolve(const HamiltonianMatrix& H, double beta, double shift, const Eigen::VectorXcd& f,
                                 const std::vector<double>& times, EvolutionKind kind);

}  // namespace weylab
