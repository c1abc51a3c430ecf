#pragma once

#include <vector>

#include "weylab/metric.hpp"

namespace weylab {

struct SeminormEstimate {
  int order = 0;
  double value = 0.0;
  /// sup restricted to |alpha| + |beta| = j, j = 0..order
  std::vector<double> by_order;
  PhasePoint argmax;
  MultiIndex argmax_beta{}, argmax_alpha{};
  std::size_t sample_size = 0;
  std::string sample;
};

/// sup over the sample and |alpha|+|beta| <= k of
///   |d_x^beta d_xi^alpha s| m^{(|alpha|+|beta|)/2} <X>^{-|beta|} / M.
SeminormEstimate smg_seminorm(const SymbolEvaluator& s, const SymbolEvaluator& M, const WeightEvaluator& w,
                              int k, const std::vector<PhasePoint>& sample, const DerivativeOptions& opt = {});

/// Nested samples: the sample for box i is the union of `base` scaled by every
/// half-width up to boxes[i], so suprema are monotone along the ladder.
std::vector<std::vector<PhasePoint>> nested_samples(int n, const std::vector<double>& boxes,
                                                   std::size_t per_box, std::uint64_t seed);

struct MembershipResult {
  bool pass = false;
  std::vector<double> boxes;
  std::vector<SeminormEstimate> profile;
  /// Growth factor per doubling between consecutive boxes.
  std::vector<double> growth;
  double gate = 1.05;
};

MembershipResult class_membership(const SymbolEvaluator& s, const SymbolEvaluator& M, const WeightEvaluator& w,
                                  int k, const std::vector<double>& boxes, std::size_t per_box,
                                  std::uint64_t seed, double gate = 1.05);

/// s(X) chi(m(X)/R), chi = 1 on [1.2, 2.5], 0 outside [1, 3].
SymbolEvaluator band_restrict(const SymbolEvaluator& s, const WeightEvaluator& w, double R);

/// Fraction of `sample` inside the band support 1 <= m/R <= 3.
double band_mass(const WeightEvaluator& w, double R, const std::vector<PhasePoint>& sample);

}  // namespace weylab
