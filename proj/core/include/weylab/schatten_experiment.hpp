#pragma once

#include <string>
#include <vector>

#include "weylab/metric.hpp"
#include "weylab/quantize.hpp"

namespace weylab {

struct SchattenMatrixCell {
  int N = 0;
  double L = 0.0;
  double value = 0.0;
  double lambda_min = 0.0;
};

struct BoxIntegralCell {
  double L = 0.0;
  double value = 0.0;
};

struct SchattenTrendOptions {
  std::vector<int> N_ladder{32, 48};
  std::vector<double> L_ladder{8.0, 12.0, 16.0};
  /// Longer boxes used to decide convergence from the decay of increments.
  std::vector<double> tail_L{64.0, 256.0, 1024.0};
  /// Matrix ladder box is sqrt(N)/2 per axis (balanced position/frequency cutoff) unless fixed_L > 0.
  double fixed_L = 0.0;
  double matrix_gate = 0.10;
  int nodes_per_panel = 8;
  double shift = 1.0;
  bool skip_matrix = false;
};

struct SchattenTrend {
  std::string op;
  double mu = 0.0;
  double r = 2.0;
  std::vector<SchattenMatrixCell> matrix;
  std::vector<BoxIntegralCell> integral;  // L_ladder followed by tail_L
  double matrix_change = 0.0;            // max relative change between successive N
  bool matrix_stable = false;
  bool ladder_monotone = false;
  /// Ratio of the last two increments of the tail ladder; >= 1 means no decay.
  double divergence_indicator = 0.0;
  bool integral_converges = false;
  /// Geometric extrapolation of the integral when it converges, +inf otherwise.
  double integral_limit = 0.0;
  std::vector<std::string> notes;
};

/// Integral of m^{-s} over [-L, L]^{2n} by tensor Gauss-Legendre on panels
/// [0, .5, 1, 2, 3, 4, 8, 16, ...]; n <= 2.
double phase_space_integral(const WeightEvaluator& w, double s, double L, int nodes_per_panel = 8);

/// (sum_k (lambda_k + shift)^{-mu r})^{1/r} for lambda the spectrum of the periodic
/// Op^w(a) + (I + Op^w(|x|^2 + |xi|^2))^{1/2}.
SchattenMatrixCell schatten_matrix_value(const WeightEvaluator& w, double mu, double r, int N, double L,
                                         double shift = 1.0);

SchattenTrend schatten_criterion_experiment(const WeightEvaluator& w, double mu, double r,
                                            const SchattenTrendOptions& opt = {});

}  // namespace weylab
