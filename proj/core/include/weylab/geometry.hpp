#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "weylab/report.hpp"
#include "weylab/xfunction.hpp"

namespace weylab {

using Point = std::vector<double>;

/// X = sum_i c_i(x) d/dx_i. A null coefficient means zero.
struct VectorField {
  int n = 0;
  std::vector<XFunctionPtr> coeff;
  std::string name;
  /// False for fields assembled from plain value callbacks; commutators then refuse.
  bool exact_derivatives = true;

  Eigen::VectorXd value(std::span<const double> x) const;
  /// J(i,k) = d c_i / d x_k
  Eigen::MatrixXd jacobian(std::span<const double> x) const;

  static VectorField axis(int n, int i);
  static VectorField scaled_axis(int n, int i, XFunctionPtr c);
  static VectorField from_values(int n, std::vector<std::function<double(std::span<const double>)>> c,
                                 std::string name);
};

struct HormanderSystem {
  int n = 0;
  std::vector<VectorField> fields;

  HormanderSystem() = default;
  HormanderSystem(int dim, std::vector<VectorField> f);

  /// Columns are X_j(x).
  Eigen::MatrixXd frame(std::span<const double> x) const;
  /// [X_i, X_j](x) for i < j, as columns.
  Eigen::MatrixXd commutators(std::span<const double> x) const;
};

/// {d/dx1, x~1 d/dx2}
HormanderSystem grushin_system(std::shared_ptr<const CutoffProfileSquared> profile);
/// {d/dx1, x1 d/dx2}
HormanderSystem grushin_pure_system();
HormanderSystem full_frame(int n);

struct RankOptions {
  double rel_threshold = 1e-10;
};

int numerical_rank(const Eigen::MatrixXd& m, const RankOptions& opt = {});
int pointwise_rank(const HormanderSystem& sys, std::span<const double> x, const RankOptions& opt = {});

CheckReport check_hormander_order2(const HormanderSystem& sys, const std::vector<Point>& sample,
                                   const RankOptions& opt = {});

struct NilpotentData {
  int r0 = 0;
  int Q = 0;
  /// Sum of degrees d_j at a minimal-rank point; -1 when the commutators do not complete the frame there.
  int sum_dj = -1;
  std::vector<std::pair<Point, int>> rank_map;
};

NilpotentData nilpotent_data(const HormanderSystem& sys, const std::vector<Point>& sample,
                             const RankOptions& opt = {});

/// Uniform grid of `per_axis` points per axis over [-half, half]^n (odd counts
/// hit every axis hyperplane), followed by `random_count` uniform points.
std::vector<Point> sample_box(int n, double half, int per_axis, int random_count, std::uint64_t seed);

Point dilate(double a, std::span<const double> v, int r0);
double homogeneous_norm(std::span<const double> vbar, int r0);

struct PointwiseDiagonalization {
  Eigen::MatrixXd theta;          // rows: new coordinates, det = 1
  Eigen::VectorXd eigenvalues;    // all n, descending
  int rank = 0;                   // number of positive eigenvalues
  double reconstruction_error = 0.0;
};

using MatrixField = std::function<Eigen::MatrixXd(std::span<const double>)>;

/// a2(x, xi) = xi^T A(x) xi = sum_{j<=r} lambda_j (theta xi)_j^2
PointwiseDiagonalization pointwise_diagonalize(const MatrixField& a2_matrix, std::span<const double> x,
                                               double tol = 1e-10);

/// A(x) = sum_j c_j c_j^T for the fields of sys.
MatrixField a2_matrix(const HormanderSystem& sys);

}  // namespace weylab
