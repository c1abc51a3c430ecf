#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <functional>
#include <string>

#include "weylab/geometry.hpp"
#include "weylab/report.hpp"

namespace weylab {

/// Interior nodes -L + i h, i = 1..N, h = 2L/(N+1), zero Dirichlet data outside.
/// Flat index runs axis 0 fastest.
struct DirichletGrid {
  int n = 2;
  double L = 8.0;
  int N = 64;

  DirichletGrid() = default;
  DirichletGrid(int dim, double half, int points);

  double h() const { return 2.0 * L / (N + 1); }
  int size() const;
  double coord(int i) const { return -L + (i + 1) * h(); }
  std::vector<double> point(int flat) const;
};

struct Potential {
  std::string descriptor;
  std::function<double(std::span<const double>)> value;

  static Potential zero();
  static Potential constant(double c);
  static Potential quadratic();
  /// -5 + (floor(x1) mod 2)
  static Potential step();
  /// Piecewise constant on unit cells, values uniform in [-1, 1], from a hash of (seed, cell).
  static Potential bounded_noise(std::uint64_t seed);
  /// -|x|^4, a negative control for the lower bound.
  static Potential negative_quartic();
  /// Nearest-node lookup in a text table "x1 ... xn value" per line.
  static Potential table(const std::string& path);
};

struct HamiltonianMatrix {
  Eigen::SparseMatrix<double> sparse;
  DirichletGrid grid;
  std::string provenance;

  int size() const { return static_cast<int>(sparse.rows()); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(sparse); }
  double symmetry_residual() const;
};

struct AssemblyOptions {
  /// 4: staggered fourth-order differences; 2: classic second order.
  int order = 4;
};

/// sum_j X_j^* X_j in divergence form; symmetric positive semidefinite by construction.
HamiltonianMatrix sum_of_squares_matrix(const HormanderSystem& sys, const DirichletGrid& g,
                                        const AssemblyOptions& opt = {});
HamiltonianMatrix daho_matrix(double c_prime, const DirichletGrid& g, const AssemblyOptions& opt = {});
/// -Delta + |x|^2
HamiltonianMatrix harmonic_matrix(const DirichletGrid& g, const AssemblyOptions& opt = {});
HamiltonianMatrix grushin_pure_matrix(const DirichletGrid& g, const AssemblyOptions& opt = {});

struct P2Options {
  /// Radius beyond which |V| <= C |x|^2 is fitted.
  double C1 = 1.0;
  /// Growth beyond quadratic is declared when |V|/|x|^2 keeps rising across radial shells.
  double growth_factor = 1.5;
};

/// Fits (C, C1, C2) for |V| <= C|x|^2 on |x| >= C1 and V >= -C2.
CheckReport validate_p2(const Potential& V, const std::vector<Point>& sample, const P2Options& opt = {});

/// kinetic + diag(V). Requires validate_p2 on the grid nodes unless `override`.
HamiltonianMatrix hamiltonian_with_potential(const HamiltonianMatrix& kinetic, const Potential& V,
                                             bool override_check = false);

/// (H + shift)^beta via full eigendecomposition.
Eigen::MatrixXd fractional_power(const Eigen::MatrixXd& H, double beta, double shift);
Eigen::MatrixXd fractional_power(const HamiltonianMatrix& H, double beta, double shift);

}  // namespace weylab
