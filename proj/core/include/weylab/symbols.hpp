#pragma once

#include <functional>
#include <string>

#include "weylab/geometry.hpp"
#include "weylab/poly_symbol.hpp"
#include "weylab/report.hpp"

namespace weylab {

/// General symbol on R^n x R^n. `jet`, when set, returns the Taylor expansion
/// in the 2n variables (x first, then xi) and supplies exact derivatives.
struct SymbolEvaluator {
  int n = 0;
  std::string name;
  std::function<cdouble(const PhasePoint&)> value;
  std::function<CTaylor(const PhasePoint&, int)> jet;

  bool has_jet() const { return static_cast<bool>(jet); }
  cdouble operator()(const PhasePoint& p) const { return value(p); }
};

SymbolEvaluator to_evaluator(const PolySymbol& s, std::string name = "poly");

namespace sym {
SymbolEvaluator constant(int n, cdouble c);
/// <X> = (1 + |x|^2 + |xi|^2)^{1/2}
SymbolEvaluator japanese(int n);
/// |x|^2
SymbolEvaluator x_squared(int n);
/// e^{|x|}; no exact jet.
SymbolEvaluator exp_abs_x(int n);
/// Product of two evaluators (jet when both have one).
SymbolEvaluator product(const SymbolEvaluator& a, const SymbolEvaluator& b);
/// Real power s^p of a positive evaluator.
SymbolEvaluator real_power(const SymbolEvaluator& s, double p);
}  // namespace sym

/// a2 = xi1^2 + x~1^2 xi2^2
PolySymbol daho_symbol(double c_prime = 3.0);
PolySymbol daho_symbol(std::shared_ptr<const CutoffProfileSquared> profile);
/// a2 = |xi|^2
PolySymbol harmonic_symbol(int n);
/// a2 = xi1^2 + x1^2 xi2^2
PolySymbol grushin_pure_symbol();
/// a2 = sum_j (sum_i c_{ji}(x) xi_i)^2
PolySymbol sum_of_squares_symbol(const HormanderSystem& sys);
/// a2 + |x|^2
PolySymbol full_symbol(const PolySymbol& a2);
/// |x|^2 as a PolySymbol
PolySymbol x_squared_symbol(int n);

struct DerivativeOptions {
  int max_order = 4;
  double rel_step = 1e-3;
  /// Ignore the exact jet even when available.
  bool force_fd = false;
};

/// d_x^beta d_xi^alpha s at p.
cdouble derivative(const SymbolEvaluator& s, const MultiIndex& beta, const MultiIndex& alpha,
                   const PhasePoint& p, const DerivativeOptions& opt = {});

/// Nonnegative C^2 function on R described by value and first two derivatives.
struct UnivariateC2 {
  std::function<double(double)> f, df, d2f;
};

/// (f')^2 <= constant * ||f''||_inf * f at every sample point. ||f''||_inf is
/// estimated on `covering` (max |f''| over its points).
CheckReport check_glaeser_bound(const UnivariateC2& f, const std::vector<double>& sample,
                         const std::vector<double>& covering, double constant = 2.0);

}  // namespace weylab
