#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "weylab/metric.hpp"
#include "weylab/poly_symbol.hpp"
#include "weylab/symbols.hpp"

namespace weylab {

/// Periodic box [-L, L)^n with N points per axis; x_j = -L + j (2L/N), modes
/// k in [-N/2, N/2) at frequency k / (2L). Flat index runs axis 0 fastest.
struct Grid {
  int n = 1;
  double L = 8.0;
  int N = 32;

  Grid() = default;
  Grid(int dim, double half, int points);

  double spacing() const { return 2.0 * L / N; }
  int size() const;
  std::vector<double> point(int flat) const;
  double coord(int j) const { return -L + j * spacing(); }
  double frequency(int k) const { return k / (2.0 * L); }
  /// Per-axis grid indices of a flat index.
  std::vector<int> unflatten(int flat) const;
};

struct QuantizeOptions {
  /// Largest admissible fraction of spectral energy above N/4 along grid lines.
  double nyquist_tail = 1e-2;
  /// Warn when |symbol| on the box boundary exceeds this.
  double boundary_warn = 1e4;
  /// Enable the midpoint-rule path for non-polynomial Weyl / tau symbols.
  bool allow_midpoint = false;
};

struct OperatorMatrix {
  Eigen::MatrixXcd a;
  Grid grid;
  std::string symbol;
  double tau = 1.0;
  bool hermitian = false;
  bool approximate = false;
  std::vector<std::string> warnings;

  double hermitian_residual() const;
};

/// Fourier multiplier xi on one axis: F^{-1} diag(k / 2L) F.
Eigen::MatrixXcd xi_multiplier_1d(const Grid& g);

/// Operator-ordered quantization of c(x) xi^alpha:
///   sum_{gamma <= alpha} prod_i C(alpha_i, gamma_i) (1-tau)^{gamma_i} tau^{alpha_i - gamma_i}
///   D^gamma c D^{alpha - gamma},
/// exact for every tau in the continuum; tau = 1 is Kohn-Nirenberg, tau = 1/2 is Weyl.
OperatorMatrix tau_quantize(const PolySymbol& s, double tau, const Grid& g, const QuantizeOptions& opt = {});
OperatorMatrix kn_quantize(const PolySymbol& s, const Grid& g, const QuantizeOptions& opt = {});
OperatorMatrix weyl_quantize(const PolySymbol& s, const Grid& g, const QuantizeOptions& opt = {});

/// u -> sum_modes e^{2 pi i x xi} s(x, xi) u^(xi), assembled row by row with FFTW.
OperatorMatrix kn_quantize(const SymbolEvaluator& s, const Grid& g, const QuantizeOptions& opt = {});
/// Midpoint rule kernel s(tau x + (1 - tau) y, xi); flagged approximate.
OperatorMatrix tau_quantize(const SymbolEvaluator& s, double tau, const Grid& g, const QuantizeOptions& opt = {});
OperatorMatrix weyl_quantize(const SymbolEvaluator& s, const Grid& g, const QuantizeOptions& opt = {});

/// Largest tail energy fraction of the symbol along axis lines (see QuantizeOptions).
double bandwidth_tail(const SymbolEvaluator& s, const Grid& g);

/// Orthonormal plane waves with |k_i| <= kmax on every axis, as columns.
Eigen::MatrixXcd low_mode_basis(const Grid& g, int kmax);

/// || Op^w(m^s) u ||_2 with the grid quadrature weight; s = 0 gives ||u||_{L^2}.
double weighted_sobolev_norm(const Eigen::VectorXcd& u, const WeightEvaluator& w, double s_power, const Grid& g);

/// Header: int64 n, int64 N, f64 L, f64 tau; then row-major (re, im) f64 pairs, little-endian.
void write_operator_binary(const OperatorMatrix& op, const std::string& path);
OperatorMatrix read_operator_binary(const std::string& path);
void write_operator_csv(const OperatorMatrix& op, const std::string& path);
/// Grid vector in the same layout with tau = NaN and a single column.
void write_vector_binary(const Grid& g, const Eigen::VectorXcd& v, const std::string& path);
void write_vector_binary(int n, int N, double L, const Eigen::VectorXcd& v, const std::string& path);

}  // namespace weylab
