#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>

#include "weylab/report.hpp"
#include "weylab/symbols.hpp"

namespace weylab {

enum class MetricKind {
  /// g = m^{-1} <X>^2 dx^2 + m^{-1} dxi^2
  Weighted,
  /// g_s = dx^2 + dxi^2 / <X>^2
  Shubin,
};

/// m(X) = a2(X) + |x|^2 + <X>, a(X) = a2(X) + |x|^2.
struct WeightEvaluator {
  int n = 0;
  std::string name;
  PolySymbol a2;
  MetricKind kind = MetricKind::Weighted;
  /// Replaces m entirely (negative controls).
  std::function<double(const PhasePoint&)> override_m;

  static WeightEvaluator from_symbol(PolySymbol a2, std::string name);
  static WeightEvaluator daho(double c_prime = 3.0);
  static WeightEvaluator harmonic(int n);
  /// m~ = <X>/2, violates the uncertainty principle.
  static WeightEvaluator broken(int n);
  WeightEvaluator with_kind(MetricKind k) const;
};

/// Block-scalar metric g_X = ax |dx|^2 + axi |dxi|^2.
struct SplitMetricValue {
  double ax = 1.0;
  double axi = 1.0;
  PhasePoint at;

  double operator()(std::span<const double> t, std::span<const double> tau) const;
};

double eval_a(const WeightEvaluator& w, const PhasePoint& p);
double eval_weight(const WeightEvaluator& w, const PhasePoint& p);
/// Exact jet of m in the 2n phase variables (requires no override).
Taylor weight_jet(const WeightEvaluator& w, const PhasePoint& p, int order);
SymbolEvaluator weight_symbol(const WeightEvaluator& w);
SymbolEvaluator a_symbol(const WeightEvaluator& w);

SplitMetricValue eval_metric(const WeightEvaluator& w, const PhasePoint& p);
/// g^sigma = (1/axi) dx^2 + (1/ax) dxi^2
SplitMetricValue eval_dual_metric(const SplitMetricValue& v);
double planck(const WeightEvaluator& w, const PhasePoint& p);

/// sup_W sigma(T,W)^2 / g(W) by projected gradient ascent on the g-unit sphere.
double dual_metric_numeric(const SplitMetricValue& g, std::span<const double> t, std::span<const double> tau,
                           int iterations = 200);

using PhasePair = std::pair<PhasePoint, PhasePoint>;

/// Uniform points in [-half, half]^{2n}.
std::vector<PhasePoint> random_phase_points(int n, double half, std::size_t count, std::uint64_t seed);
/// Pairs with base points at mixed scales (1, 10, 100) and offsets sized so that
/// g_X(X - Y) is log-uniform on [1e-6, 1].
std::vector<PhasePair> slowness_pairs(const WeightEvaluator& w, std::size_t count, std::uint64_t seed);
/// Independent uniform points, mixed scales, inside [-half, half]^{2n}.
std::vector<PhasePair> temperateness_pairs(int n, double half, std::size_t count, std::uint64_t seed);

CheckReport check_uncertainty(const WeightEvaluator& w, const std::vector<PhasePoint>& sample);
CheckReport check_slowness(const WeightEvaluator& w, const std::vector<PhasePair>& pairs, double C);
CheckReport check_temperateness(const WeightEvaluator& w, const std::vector<PhasePair>& pairs, double C, int J);
/// g-continuity and g-temperateness of M.
CheckReport check_gweight(const WeightEvaluator& w, const std::function<double(const PhasePoint&)>& M,
                          const std::vector<PhasePair>& pairs, double C = 10.0, int N = 4);

/// Minimal C passing `holds(C)`, bisected over [lo, hi] to 3 significant figures.
/// Returns +inf when even `hi` fails.
double bisect_constant(const std::function<bool(double)>& holds, double lo, double hi);

}  // namespace weylab
