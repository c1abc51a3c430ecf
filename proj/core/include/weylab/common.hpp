#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace weylab {

using cdouble = std::complex<double>;

// Largest configuration-space dimension n handled by the fixed-size point types.
// Desk-scale grids (N^n <= 4096 rows) never need more.
inline constexpr int kMaxDim = 4;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
};

class GridError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Multi-index over n configuration variables.
using MultiIndex = std::array<int, kMaxDim>;

inline int order(const MultiIndex& a) {
  int s = 0;
  for (int v : a) s += v;
  return s;
}

double factorial(int k);
double binomial(int n, int k);

/// A point X = (x, xi) of phase space R^n x R^n.
struct PhasePoint {
  int n = 0;
  std::array<double, kMaxDim> x{};
  std::array<double, kMaxDim> xi{};

  PhasePoint() = default;
  explicit PhasePoint(int dim);
  PhasePoint(std::span<const double> xs, std::span<const double> xis);

  double x_sq() const;
  double xi_sq() const;

  // Flat coordinate i in 0..2n-1: x first, then xi.
  double coord(int i) const { return i < n ? x[i] : xi[i - n]; }
  void set_coord(int i, double v) {
    if (i < n)
      x[i] = v;
    else
      xi[i - n] = v;
  }
  std::span<const double> xs() const { return {x.data(), static_cast<size_t>(n)}; }
  std::span<const double> xis() const { return {xi.data(), static_cast<size_t>(n)}; }
};

/// <X> = (1 + |x|^2 + |xi|^2)^{1/2}
double japanese_bracket(const PhasePoint& p);
/// <xi> = (1 + |xi|^2)^{1/2}
double japanese_xi(const PhasePoint& p);

}  // namespace weylab
