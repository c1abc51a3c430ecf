#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "weylab/hamiltonians.hpp"
#include "weylab/metric.hpp"
#include "weylab/report.hpp"
#include "weylab/seminorm.hpp"

namespace weylab {

// ---------------------------------------------------------------- band probe

struct BandProbeOptions {
  /// Kernel box half-widths per axis; the kernel of a band piece decays on
  /// scale ~1 in x1 and ~R^{-1/2} in x2.
  std::vector<double> kernel_L{6.0, 3.0};
  std::vector<int> min_N{128, 256};
  std::vector<int> max_N{512, 1024};
  int rows_x1 = 17;
  int rows_x2 = 9;
  int trials = 8;
  std::uint64_t seed = 2024;
  int seminorm_order = 2;
  std::size_t seminorm_points = 1500;
  /// Max |q| on the frequency boundary relative to max |q|.
  double nyquist_tol = 1e-12;
};

struct BandProbeResult {
  double R = 0.0;
  std::vector<int> N;
  std::vector<double> L;
  /// max over sampled rows of the exact row l1 norm = sup_f |q(x,D)f|_inf / |f|_inf at those rows
  double ratio = 0.0;
  /// best ratio found by random +-1 and random-phase trials (a lower bound for `ratio`)
  double trial_ratio = 0.0;
  double seminorm = 0.0;
  double quotient = 0.0;  // ratio / seminorm
  std::vector<double> argmax_x;
};

/// q = band_restrict(m^{-(n/2) eps}, R) quantized (Kohn-Nirenberg) on per-axis periodic grids.
std::vector<BandProbeResult> linf_band_probe(const WeightEvaluator& w, double epsilon,
                                             const std::vector<double>& R_list, const BandProbeOptions& opt = {});

/// max/min quotient across the ladder.
double band_quotient_spread(const std::vector<BandProbeResult>& r);

// ---------------------------------------------------------------- Lp window

struct LpNorms {
  double one = 0.0;   // max column l1
  double inf = 0.0;   // max row l1
  double two = 0.0;   // largest singular value
};

LpNorms matrix_norms(const Eigen::MatrixXd& T);
/// Riesz-Thorin interpolation between (1, 2) for p <= 2 and (2, inf) for p >= 2.
double riesz_thorin_upper(const LpNorms& n, double p);
double lp_norm(const Eigen::VectorXd& v, double p);
/// max over random +-1, Gaussian, column and row-sign trials of |Tf|_p / |f|_p.
double lp_lower_bound(const Eigen::MatrixXd& T, double p, int trials, std::uint64_t seed);

struct LpCalibration {
  double beta_prime = 0.0;
  double slope_operator = 0.0;  // d log <phi_X, T phi_X> / d log s along a ray
  double slope_symbol = 0.0;    // d log m(X)^{-beta'} / d log s
  double residual = 0.0;        // |slope_operator / slope_symbol - 1|
  bool pass = false;
};

struct LpProbeOptions {
  double shift = 1.0;
  int trials = 16;
  std::uint64_t seed = 77;
  double calibration_tol = 0.25;
  double stable_change = 0.15;
};

struct LpProbeResult {
  double p = 2.0;
  double beta = 0.0;
  int N = 0;
  double L = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool admissible = false;  // |1/p - 1/2| <= (n/2) beta
  std::string op;
};

struct LpWindowReport {
  LpCalibration calibration;
  std::vector<LpProbeResult> cells;  // grid-major, then p
  /// Per p: whether the upper bound changes by less than stable_change per refinement.
  std::vector<std::pair<double, bool>> stable;
};

using HamiltonianBuilder = std::function<HamiltonianMatrix(int N)>;

/// T = (H + shift)^{-beta'} with beta' = (n/2) beta, after a coherent-state calibration of
/// T against m^{-beta'}; throws PreconditionError when the calibration residual is too large.
LpWindowReport lp_window_probe(const HamiltonianBuilder& build, const WeightEvaluator& w, double beta,
                               const std::vector<double>& p_list, const std::vector<int>& N_ladder,
                               const LpProbeOptions& opt = {});

LpCalibration calibrate_power(const HamiltonianMatrix& H, const Eigen::MatrixXd& T, const WeightEvaluator& w,
                              double beta_prime);

// ---------------------------------------------------------------- subellipticity

struct SubellipticityOptions {
  int power_iterations = 200;
  int trials = 24;
  std::uint64_t seed = 5;
  double stable_change = 0.15;
};

struct SubellipticityCell {
  int N = 0;
  double C1 = 0.0;        // sqrt of the top generalized eigenvalue
  double trial_C1 = 0.0;  // best ratio over random smooth bumps
};

struct SubellipticityReport {
  std::string op;
  double tau = 0.0;
  std::vector<SubellipticityCell> cells;
  double max_change = 0.0;
  bool stable = false;
};

/// sine-transform norm sum_k (1 + |k|^2)^tau |v_k|^2 with k the Dirichlet wave numbers.
double dirichlet_sobolev_norm(const DirichletGrid& g, const Eigen::VectorXd& v, double tau);

/// Fits the smallest C1 with |v|_{H^tau}^2 <= C1^2 (|P v|^2 + |v|^2) over grid functions.
SubellipticityReport subellipticity_probe(const HamiltonianBuilder& kinetic, double tau,
                                          const std::vector<int>& N_ladder,
                                          const SubellipticityOptions& opt = {});

}  // namespace weylab
