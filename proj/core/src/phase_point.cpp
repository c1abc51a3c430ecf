#include <cmath>

#include "weylab/common.hpp"

namespace weylab {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return std::round(b);
}

PhasePoint::PhasePoint(int dim) : n(dim) {
  if (dim < 1 || dim > kMaxDim) throw ArgumentError("PhasePoint: dimension out of range");
}

PhasePoint::PhasePoint(std::span<const double> xs, std::span<const double> xis) {
  if (xs.size() != xis.size()) throw ArgumentError("PhasePoint: x and xi lengths differ");
  if (xs.empty() || xs.size() > static_cast<size_t>(kMaxDim))
    throw ArgumentError("PhasePoint: dimension out of range");
  n = static_cast<int>(xs.size());
  for (int i = 0; i < n; ++i) {
    x[i] = xs[i];
    xi[i] = xis[i];
  }
}

double PhasePoint::x_sq() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double PhasePoint::xi_sq() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += xi[i] * xi[i];
  return s;
}

double japanese_bracket(const PhasePoint& p) { return std::sqrt(1.0 + p.x_sq() + p.xi_sq()); }

double japanese_xi(const PhasePoint& p) { return std::sqrt(1.0 + p.xi_sq()); }

}  // namespace weylab
