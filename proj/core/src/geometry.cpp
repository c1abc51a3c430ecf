#include "weylab/geometry.hpp"

#include <cmath>
#include <random>

#include "weylab/parallel.hpp"

namespace weylab {

Eigen::VectorXd VectorField::value(std::span<const double> x) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (coeff[i]) v(i) = coeff[i]->value(x);
  return v;
}

Eigen::MatrixXd VectorField::jacobian(std::span<const double> x) const {
  if (!exact_derivatives) throw ConfigError("vector field '" + name + "' has no derivative evaluators");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> e(n, 0);
  for (int i = 0; i < n; ++i) {
    if (!coeff[i]) continue;
    const Taylor t = coeff[i]->jet(x, 1);
    for (int k = 0; k < n; ++k) {
      e.assign(n, 0);
      e[k] = 1;
      J(i, k) = t.derivative(e);
    }
  }
  return J;
}

VectorField VectorField::axis(int n, int i) {
  VectorField f;
  f.n = n;
  f.coeff.assign(n, nullptr);
  f.coeff[i] = xf::custom("1", n, [n](std::span<const double>, int order) {
    return Taylor::constant(n, order, 1.0);
  });
  f.name = "d" + std::to_string(i + 1);
  return f;
}

VectorField VectorField::scaled_axis(int n, int i, XFunctionPtr c) {
  VectorField f;
  f.n = n;
  f.coeff.assign(n, nullptr);
  f.name = c->name() + " d" + std::to_string(i + 1);
  f.coeff[i] = std::move(c);
  return f;
}

VectorField VectorField::from_values(int n, std::vector<std::function<double(std::span<const double>)>> c,
                                     std::string name) {
  if (static_cast<int>(c.size()) != n) throw ArgumentError("from_values: need n coefficients");
  VectorField f;
  f.n = n;
  f.name = std::move(name);
  f.exact_derivatives = false;
  for (auto& fn : c) {
    f.coeff.push_back(xf::custom("value", n, [n, fn](std::span<const double> x, int order) {
      if (order > 0) throw ConfigError("value-only coefficient has no derivatives");
      return Taylor::constant(n, 0, fn(x));
    }));
  }
  return f;
}

HormanderSystem::HormanderSystem(int dim, std::vector<VectorField> f) : n(dim), fields(std::move(f)) {
  if (fields.empty()) throw ArgumentError("HormanderSystem: empty field list");
  for (const auto& v : fields)
    if (v.n != n || static_cast<int>(v.coeff.size()) != n)
      throw ArgumentError("HormanderSystem: field dimension mismatch");
}

Eigen::MatrixXd HormanderSystem::frame(std::span<const double> x) const {
  Eigen::MatrixXd F(n, fields.size());
  for (size_t j = 0; j < fields.size(); ++j) F.col(j) = fields[j].value(x);
  return F;
}

Eigen::MatrixXd HormanderSystem::commutators(std::span<const double> x) const {
  const size_t k = fields.size();
  std::vector<Eigen::VectorXd> v(k);
  std::vector<Eigen::MatrixXd> J(k);
  for (size_t j = 0; j < k; ++j) {
    v[j] = fields[j].value(x);
    J[j] = fields[j].jacobian(x);
  }
  Eigen::MatrixXd C(n, k * (k - 1) / 2);
  int col = 0;
  for (size_t i = 0; i < k; ++i)
    for (size_t j = i + 1; j < k; ++j) C.col(col++) = J[j] * v[i] - J[i] * v[j];
  return C;
}

HormanderSystem grushin_system(std::shared_ptr<const CutoffProfileSquared> profile) {
  return HormanderSystem(2, {VectorField::axis(2, 0),
                             VectorField::scaled_axis(2, 1, xf::cutoff_odd(2, 0, std::move(profile)))});
}

HormanderSystem grushin_pure_system() {
  return HormanderSystem(2, {VectorField::axis(2, 0), VectorField::scaled_axis(2, 1, xf::coordinate(2, 0))});
}

HormanderSystem full_frame(int n) {
  std::vector<VectorField> f;
  for (int i = 0; i < n; ++i) f.push_back(VectorField::axis(n, i));
  return HormanderSystem(n, std::move(f));
}

int numerical_rank(const Eigen::MatrixXd& m, const RankOptions& opt) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > opt.rel_threshold * s(0)) ++r;
  return r;
}

int pointwise_rank(const HormanderSystem& sys, std::span<const double> x, const RankOptions& opt) {
  return numerical_rank(sys.frame(x), opt);
}

CheckReport check_hormander_order2(const HormanderSystem& sys, const std::vector<Point>& sample,
                                   const RankOptions& opt) {
  for (const auto& f : sys.fields)
    if (!f.exact_derivatives)
      throw ConfigError("check_hormander_order2: field '" + f.name + "' lacks derivative evaluators");
  CheckReport r;
  r.kind = "hormander-order2";
  r.sample_size = sample.size();
  std::vector<int> ranks(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    Eigen::MatrixXd F = sys.frame(sample[i]);
    Eigen::MatrixXd C = sys.commutators(sample[i]);
    Eigen::MatrixXd all(sys.n, F.cols() + C.cols());
    all << F, C;
    ranks[i] = numerical_rank(all, opt);
  });
  int min_rank = sys.n;
  for (size_t i = 0; i < sample.size(); ++i) {
    min_rank = std::min(min_rank, ranks[i]);
    if (ranks[i] < sys.n)
      r.add_witness({sample[i], {}, double(ranks[i]), double(sys.n), "rank of fields and commutators"});
  }
  r.constants["min_rank"] = min_rank;
  r.constants["violations"] = 0;
  for (int k : ranks) r.constants["violations"] += (k < sys.n);
  r.vacuous = sample.empty();
  r.pass = !r.vacuous && r.witnesses.empty();
  return r;
}

NilpotentData nilpotent_data(const HormanderSystem& sys, const std::vector<Point>& sample,
                             const RankOptions& opt) {
  if (sample.empty()) throw ArgumentError("nilpotent_data: empty sample");
  NilpotentData d;
  std::vector<int> ranks(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) { ranks[i] = pointwise_rank(sys, sample[i], opt); });
  d.r0 = sys.n;
  size_t arg = 0;
  for (size_t i = 0; i < sample.size(); ++i) {
    d.rank_map.emplace_back(sample[i], ranks[i]);
    if (ranks[i] < d.r0) {
      d.r0 = ranks[i];
      arg = i;
    }
  }
  if (d.r0 < 1) throw PreconditionError("nilpotent_data: vanishing frame (rank 0) in sample");
  d.Q = 2 * sys.n - d.r0;
  bool have_derivs = true;
  for (const auto& f : sys.fields) have_derivs = have_derivs && f.exact_derivatives;
  if (have_derivs) {
    Eigen::MatrixXd F = sys.frame(sample[arg]);
    Eigen::MatrixXd C = sys.commutators(sample[arg]);
    Eigen::MatrixXd all(sys.n, F.cols() + C.cols());
    all << F, C;
    if (numerical_rank(all, opt) == sys.n) d.sum_dj = d.r0 + 2 * (sys.n - d.r0);
  }
  return d;
}

std::vector<Point> sample_box(int n, double half, int per_axis, int random_count, std::uint64_t seed) {
  std::vector<Point> pts;
  if (per_axis > 0) {
    std::vector<int> idx(n, 0);
    while (true) {
      Point p(n);
      for (int i = 0; i < n; ++i)
        p[i] = per_axis == 1 ? 0.0 : -half + 2.0 * half * idx[i] / (per_axis - 1);
      pts.push_back(p);
      int v = 0;
      while (v < n && ++idx[v] == per_axis) idx[v++] = 0;
      if (v == n) break;
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-half, half);
  for (int k = 0; k < random_count; ++k) {
    Point p(n);
    for (auto& c : p) c = U(rng);
    pts.push_back(p);
  }
  return pts;
}

Point dilate(double a, std::span<const double> v, int r0) {
  if (r0 < 1 || r0 > static_cast<int>(v.size())) throw ArgumentError("dilate: r0 out of range");
  Point r(v.begin(), v.end());
  for (size_t i = 0; i < r.size(); ++i) r[i] *= (static_cast<int>(i) < r0) ? a : a * a;
  return r;
}

double homogeneous_norm(std::span<const double> vbar, int r0) {
  if (r0 < 1 || r0 > static_cast<int>(vbar.size())) throw ArgumentError("homogeneous_norm: r0 out of range");
  double s = 0.0;
  for (size_t i = 0; i < vbar.size(); ++i) {
    const double v2 = vbar[i] * vbar[i];
    s += (static_cast<int>(i) < r0) ? v2 * v2 : v2;
  }
  return std::sqrt(std::sqrt(s));
}

PointwiseDiagonalization pointwise_diagonalize(const MatrixField& a2m, std::span<const double> x, double tol) {
  const Eigen::MatrixXd A = a2m(x);
  if ((A - A.transpose()).norm() > tol * std::max(1.0, A.norm()))
    throw PreconditionError("pointwise_diagonalize: matrix is not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const int n = static_cast<int>(A.rows());
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  PointwiseDiagonalization d;
  d.eigenvalues.resize(n);
  d.theta.resize(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = n - 1 - j;
    double lam = es.eigenvalues()(src);
    if (lam < -tol * scale) throw PreconditionError("pointwise_diagonalize: negative eigenvalue (PSD violation)");
    if (lam <= tol * scale) lam = 0.0;
    d.eigenvalues(j) = lam;
    d.theta.row(j) = es.eigenvectors().col(src).transpose();
    d.rank += lam > 0.0;
  }
  if (d.theta.determinant() < 0.0) d.theta.row(n - 1) *= -1.0;
  const Eigen::MatrixXd back = d.theta.transpose() * d.eigenvalues.asDiagonal() * d.theta;
  d.reconstruction_error = (back - A).norm() / std::max(1e-300, A.norm());
  if (A.norm() == 0.0) d.reconstruction_error = back.norm();
  return d;
}

MatrixField a2_matrix(const HormanderSystem& sys) {
  return [sys](std::span<const double> x) {
    Eigen::MatrixXd F = sys.frame(x);
    return Eigen::MatrixXd(F * F.transpose());
  };
}

}  // namespace weylab
