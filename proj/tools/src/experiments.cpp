#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "weylab/bounds.hpp"
#include "weylab/eigensolve.hpp"
#include "weylab/evolve.hpp"
#include "weylab/hamiltonians.hpp"
#include "weylab/metric.hpp"
#include "weylab/quantize.hpp"
#include "weylab/schatten_experiment.hpp"
#include "weylab/seminorm.hpp"
#include "weylab/spectral.hpp"
#include "weylab_cli/builders.hpp"
#include "weylab_cli/runner.hpp"

namespace weylab::cli {

namespace {

using nlohmann::json;
using Row = std::vector<std::string>;

std::string num(double v) { return csv_number(v); }

// Shortest round-trip form, for check names.
std::string tag_num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

class Csv {
 public:
  explicit Csv(const Row& header) { write_csv_row(os_, header); }
  void row(const Row& r) { write_csv_row(os_, r); }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json report_json(const CheckReport& r) {
  json j;
  j["kind"] = r.kind;
  j["pass"] = r.pass;
  j["vacuous"] = r.vacuous;
  j["sample_size"] = r.sample_size;
  json c = json::object();
  for (const auto& [k, v] : r.constants) c[k] = finite_or_null(v);
  j["constants"] = c;
  j["witness_count"] = r.witnesses.size();
  j["notes"] = r.notes;
  return j;
}

/// Concatenated witness tables under one header.
std::string witness_table(const std::vector<const CheckReport*>& reports) {
  std::string out;
  for (size_t i = 0; i < reports.size(); ++i) {
    std::ostringstream os;
    write_witness_csv(os, *reports[i]);
    std::string s = os.str();
    if (i) s = s.substr(s.find('\n') + 1);
    out += s;
  }
  return out;
}

std::string constants_table(const std::vector<const CheckReport*>& reports) {
  Csv csv({"check", "constant", "value"});
  for (const auto* r : reports)
    for (const auto& [k, v] : r->constants) csv.row({r->kind, k, num(v)});
  return csv.str();
}

Eigen::VectorXcd random_packets(const DirichletGrid& g, std::uint64_t seed, int count = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(-0.4 * g.L, 0.4 * g.L), ph(0.0, 2.0 * kPi), fr(-1.0, 1.0);
  std::vector<std::vector<double>> centers(count, std::vector<double>(g.n));
  std::vector<std::vector<double>> freqs(count, std::vector<double>(g.n));
  std::vector<double> phases(count);
  for (int c = 0; c < count; ++c) {
    for (int a = 0; a < g.n; ++a) {
      centers[c][a] = pos(rng);
      freqs[c][a] = fr(rng);
    }
    phases[c] = ph(rng);
  }
  Eigen::VectorXcd f(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const auto x = g.point(i);
    cdouble v = 0.0;
    for (int c = 0; c < count; ++c) {
      double r2 = 0.0, arg = phases[c];
      for (int a = 0; a < g.n; ++a) {
        r2 += (x[a] - centers[c][a]) * (x[a] - centers[c][a]);
        arg += freqs[c][a] * x[a];
      }
      v += std::exp(-r2 / 2.0) * std::polar(1.0, arg);
    }
    f[i] = v;
  }
  return f / f.norm();
}

// ---------------------------------------------------------------- metric-check

ExperimentResult metric_check(const ExperimentConfig& c) {
  const WeightEvaluator w = make_weight(c);
  const std::uint64_t seed = c.get_seed();
  const auto samples = static_cast<std::size_t>(c.get_int("samples", 100000));
  const double half = c.get_double("box", 100.0);
  const auto pairs = static_cast<std::size_t>(c.get_int("pairs", 10000));
  const double C = c.get_double("C", 1e3);
  const int J = c.get_int("J", 4);
  const auto dual_points = static_cast<std::size_t>(c.get_int("dual_points", 1000));
  const double dual_tol = c.get_double("dual_tol", 1e-6);
  c.check_unused();

  ExperimentResult out;
  const auto pts = random_phase_points(w.n, half, samples, seed);
  const CheckReport unc = check_uncertainty(w, pts);
  const CheckReport slow = check_slowness(w, slowness_pairs(w, pairs, seed + 1), C);
  const CheckReport temp = check_temperateness(w, temperateness_pairs(w.n, half, pairs, seed + 2), C, J);

  CheckReport dual;
  dual.kind = "dual_metric";
  dual.sample_size = std::min(dual_points, pts.size());
  double worst = 0.0;
  std::mt19937_64 rng(seed + 3);
  std::normal_distribution<double> nd;
  for (std::size_t i = 0; i < dual.sample_size; ++i) {
    const PhasePoint& p = pts[i];
    const SplitMetricValue g = eval_metric(w, p);
    const SplitMetricValue gs = eval_dual_metric(g);
    std::vector<double> t(w.n), tau(w.n);
    for (auto& v : t) v = nd(rng);
    for (auto& v : tau) v = nd(rng);
    const double exact = gs(t, tau);
    const double numeric = dual_metric_numeric(g, t, tau);
    const double rel = std::abs(numeric - exact) / std::max(exact, 1e-300);
    worst = std::max(worst, rel);
    if (rel > dual_tol) {
      Witness wi;
      for (int k = 0; k < 2 * w.n; ++k) wi.a.push_back(p.coord(k));
      wi.lhs = numeric;
      wi.rhs = exact;
      wi.detail = "relative mismatch " + num(rel);
      dual.add_witness(std::move(wi));
    }
  }
  dual.constants["max_relative_error"] = worst;
  dual.pass = dual.witnesses.empty();

  const std::vector<const CheckReport*> all{&unc, &slow, &temp, &dual};
  out.files.emplace_back("witnesses.csv", witness_table(all));
  out.files.emplace_back("constants.csv", constants_table(all));
  for (const auto* r : all) {
    out.checks.emplace_back(r->kind, r->pass && !r->vacuous);
    out.summary[r->kind] = report_json(*r);
  }
  out.summary["weight"] = w.name;
  return out;
}

// ---------------------------------------------------------------- class-check

ExperimentResult class_check(const ExperimentConfig& c) {
  const WeightEvaluator w = make_weight(c);
  const std::string symbol = c.get_string("symbol", "a");
  const int order = c.get_int("order", 4);
  const auto boxes = c.get_doubles("boxes", {10.0, 20.0});
  const auto per_box = static_cast<std::size_t>(c.get_int("per_box", 4000));
  const double gate = c.get_double("gate", 1.05);
  const std::uint64_t seed = c.get_seed();
  c.check_unused();

  SymbolEvaluator s;
  if (symbol == "a")
    s = a_symbol(w);
  else if (symbol == "m")
    s = weight_symbol(w);
  else if (symbol == "exp_abs_x")
    s = sym::exp_abs_x(w.n);
  else
    throw ConfigError("unknown symbol builder '" + symbol + "'");

  const MembershipResult r = class_membership(s, weight_symbol(w), w, order, boxes, per_box, seed, gate);
  Csv csv({"symbol", "box", "order", "seminorm"});
  for (size_t b = 0; b < r.profile.size(); ++b)
    for (size_t j = 0; j < r.profile[b].by_order.size(); ++j)
      csv.row({symbol, num(r.boxes[b]), std::to_string(j), num(r.profile[b].by_order[j])});
  ExperimentResult out;
  out.files.emplace_back("membership.csv", csv.str());
  out.checks.emplace_back("membership", r.pass);
  out.summary["symbol"] = symbol;
  out.summary["weight"] = w.name;
  out.summary["growth"] = r.growth;
  out.summary["gate"] = gate;
  return out;
}

// ---------------------------------------------------------------- quantize-identity

PolySymbol random_poly(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), axis(0, n - 1);
  std::uniform_real_distribution<double> ctr(-1.0, 1.0);
  PolySymbol s(n);
  const int terms = 1 + static_cast<int>(rng() % 4);
  for (int t = 0; t < terms; ++t) {
    MultiIndex alpha{}, powers{};
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++alpha[axis(rng)];
    const int px = deg(rng);
    for (int k = 0; k < px; ++k) ++powers[axis(rng)];
    const std::vector<double> center(n, ctr(rng));
    Coefficient cf = Coefficient::of(xf::monomial(n, powers), cdouble(coef(rng), coef(rng)));
    cf = cf * Coefficient::of(xf::gaussian(n, center, 1.0));
    s.add_term(alpha, cf);
  }
  return s;
}

/// max over multi-indices and sample points of |c_alpha(x)| for a - b.
double poly_distance(PolySymbol a, const PolySymbol& b) {
  a -= b;
  a.canonicalize();
  const int n = a.dim();
  double worst = 0.0;
  std::vector<double> x(n);
  for (int i = 0; i < 64; ++i) {
    for (int k = 0; k < n; ++k) x[k] = -3.0 + 6.0 * ((i * (k + 3) * 37) % 64) / 63.0;
    for (const auto& [alpha, cf] : a.terms()) worst = std::max(worst, std::abs(cf.value(x)));
  }
  return worst;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

ExperimentResult quantize_identity(const ExperimentConfig& c) {
  const std::uint64_t seed = c.get_seed();
  const int polys = c.get_int("polys", 50);
  const double L = c.get_double("L", 8.0);
  const auto N_list = c.get_ints("N", {32, 64, 128});
  const double herm_tol = c.get_double("hermitian_tol", 1e-10);
  const double min_order = c.get_double("min_order", 2.0);
  const double floor = c.get_double("floor", 1e-11);
  const double sigma = c.get_double("sigma", 1.0);
  c.check_unused();
  if (N_list.size() < 2) throw ConfigError("key 'N': need at least two grid sizes");

  ExperimentResult out;
  Csv csv({"identity", "parameter", "value", "error", "pass"});

  // Op(1) = I for every tau.
  {
    const Grid g(1, L, N_list.front());
    double err = 0.0;
    for (double tau : {0.0, 0.5, 1.0}) {
      const auto op = tau_quantize(PolySymbol::constant(1, 1.0), tau, g);
      const double e = max_abs(op.a - Eigen::MatrixXcd::Identity(g.size(), g.size()));
      err = std::max(err, e);
      csv.row({"op_identity", "tau", num(tau), num(e), e == 0.0 ? "1" : "0"});
    }
    out.checks.emplace_back("op_identity", err == 0.0);
  }

  std::mt19937_64 rng(seed);

  // Weyl quantization of real symbols is Hermitian.
  {
    double worst = 0.0;
    for (int n : {1, 2}) {
      const Grid g(n, L, N_list.front());
      for (int t = 0; t < 5; ++t) {
        const PolySymbol base = random_poly(n, rng);
        PolySymbol re(n);
        for (const auto& [alpha, cf] : base.terms())
          re.add_term(alpha, Coefficient::of(xf::gaussian(n, std::vector<double>(n, 0.3 * t), 1.0),
                                             cf.max_weight() + 1.0));
        const double res = weyl_quantize(re, g).hermitian_residual();
        worst = std::max(worst, res);
        csv.row({"weyl_hermitian", "n", std::to_string(n), num(res), res <= herm_tol ? "1" : "0"});
      }
    }
    out.checks.emplace_back("weyl_hermitian", worst <= herm_tol);
  }

  // J_s J_t = J_{s+t} on random polynomials.
  {
    std::uniform_real_distribution<double> tt(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < polys; ++k) {
      const int n = 1 + k % 2;
      const PolySymbol a = random_poly(n, rng);
      const double s = tt(rng), t = tt(rng);
      const double e = poly_distance(jt_transport(jt_transport(a, s), t), jt_transport(a, s + t));
      worst = std::max(worst, e);
      csv.row({"jt_semigroup", "poly", std::to_string(k), num(e), e <= 1e-12 ? "1" : "0"});
    }
    out.checks.emplace_back("jt_semigroup", worst <= 1e-12);
  }

  // J_t(x xi) = x xi + i t / (2 pi).
  {
    double worst = 0.0;
    for (double t : {-1.0, 0.25, 1.0, 3.0}) {
      const PolySymbol xxi = PolySymbol::monomial(Coefficient::of(xf::coordinate(1, 0)), MultiIndex{1});
      const PolySymbol oracle = xxi + PolySymbol::constant(1, cdouble(0.0, t / (2.0 * kPi)));
      const double e = poly_distance(jt_transport(xxi, t), oracle);
      worst = std::max(worst, e);
      csv.row({"jt_x_xi", "t", num(t), num(e), e <= 1e-14 ? "1" : "0"});
    }
    out.checks.emplace_back("jt_x_xi", worst <= 1e-14);
  }

  // Weyl composition under refinement, measured on a fixed low-frequency subspace.
  {
    auto gauss = [&](double x0) { return Coefficient::of(xf::gaussian(1, std::vector<double>{x0}, sigma)); };
    PolySymbol a(1), b(1);
    a.add_term(MultiIndex{2}, gauss(0.0));
    a.add_term(MultiIndex{1}, gauss(0.7) * cdouble(0.5, 0.0));
    a.add_term(MultiIndex{0}, gauss(-0.4));
    b.add_term(MultiIndex{1}, gauss(-0.3));
    b.add_term(MultiIndex{0}, gauss(0.5) * cdouble(2.0, 0.0));
    const PolySymbol ab = moyal_sharp(a, b);
    const int kmax = N_list.front() / 4;
    std::vector<double> err;
    for (int N : N_list) {
      const Grid g(1, L, N);
      const Eigen::MatrixXcd B = low_mode_basis(g, kmax);
      const Eigen::MatrixXcd lhs = weyl_quantize(a, g).a * weyl_quantize(b, g).a;
      const Eigen::MatrixXcd rhs = weyl_quantize(ab, g).a;
      const Eigen::MatrixXcd P = B.adjoint() * rhs * B;
      const double e = (B.adjoint() * (lhs - rhs) * B).norm() / P.norm();
      err.push_back(e);
    }
    bool ok = true;
    for (size_t i = 0; i < err.size(); ++i) {
      std::string order = "";
      bool cell = true;
      if (i > 0) {
        const double o = std::log2(err[i - 1] / std::max(err[i], 1e-300)) / std::log2(double(N_list[i]) / N_list[i - 1]);
        order = num(o);
        cell = o >= min_order || err[i] <= floor;
      }
      ok = ok && cell;
      csv.row({"weyl_composition", "N", std::to_string(N_list[i]), num(err[i]), cell ? "1" : "0"});
      out.summary["composition_order"].push_back(order);
    }
    out.summary["composition_error"] = err;
    out.checks.emplace_back("weyl_composition", ok);
  }
  out.files.emplace_back("identities.csv", csv.str());
  return out;
}

// ---------------------------------------------------------------- spectrum / growth-fit

struct SpectrumRun {
  OperatorSpec spec;
  int N = 64;
  int k = 6;
  EigensolveOptions eo;
  HamiltonianMatrix H;
  SpectralResult res;
  double C2 = 0.0;
  bool has_potential = false;
};

SpectrumRun read_spectrum(const ExperimentConfig& c, int default_k) {
  SpectrumRun r;
  r.spec = read_operator_spec(c);
  r.N = c.get_int("N", 64);
  r.k = c.get_int("k", default_k);
  r.eo.residual_tol = c.get_double("residual_tol", 1e-8);
  r.eo.vectors = false;
  if (r.N < 4) throw ConfigError("key 'N': need at least 4 interior nodes");
  if (r.k < 1) throw ConfigError("key 'k': must be positive");
  r.has_potential = !r.spec.potential.empty();
  return r;
}

void solve_spectrum(SpectrumRun& r) {
  r.H = make_hamiltonian(r.spec, r.N);
  if (r.k > r.H.size()) throw ConfigError("key 'k' exceeds the matrix dimension");
  r.res = eigensolve(r.H, r.k, r.eo);
  if (r.has_potential) {
    std::vector<Point> nodes;
    for (int i = 0; i < r.H.grid.size(); ++i) nodes.push_back(r.H.grid.point(i));
    r.C2 = validate_p2(make_potential(r.spec.potential), nodes).constants.at("C2");
  }
}

std::string eigen_table(const SpectralResult& s) {
  Csv csv({"j", "eigenvalue", "residual"});
  for (int j = 0; j < s.eigenvalues.size(); ++j)
    csv.row({std::to_string(j + 1), num(s.eigenvalues[j]), num(s.residuals[j])});
  return csv.str();
}

void spectrum_checks(const SpectrumRun& r, ExperimentResult& out, const std::vector<double>& expected,
                     double tol) {
  bool sorted = true;
  for (int j = 1; j < r.res.eigenvalues.size(); ++j) sorted = sorted && r.res.eigenvalues[j] >= r.res.eigenvalues[j - 1];
  out.checks.emplace_back("ascending", sorted);
  const double rtol = r.eo.residual_tol;
  double worst = 0.0;
  for (double v : r.res.residuals) worst = std::max(worst, v);
  out.checks.emplace_back("residuals", worst <= rtol * std::max(1.0, r.res.h_norm));
  if (r.has_potential) out.checks.emplace_back("lower_bound", r.res.eigenvalues[0] >= -r.C2 - 1e-9);
  if (!expected.empty()) {
    bool ok = static_cast<int>(expected.size()) <= r.res.eigenvalues.size();
    for (size_t j = 0; ok && j < expected.size(); ++j) ok = std::abs(r.res.eigenvalues[j] - expected[j]) <= tol;
    out.checks.emplace_back("expected_values", ok);
  }
  out.summary["operator"] = r.H.provenance;
  out.summary["N"] = r.N;
  out.summary["L"] = r.spec.L;
  out.summary["solver"] = r.res.solver;
  out.summary["h_norm"] = r.res.h_norm;
  out.summary["max_residual"] = worst;
  out.summary["lowest"] = r.res.eigenvalues[0];
  if (r.has_potential) out.summary["C2"] = r.C2;
}

ExperimentResult spectrum(const ExperimentConfig& c) {
  const auto expected = c.get_doubles("expected", {});
  const double tol = c.get_double("expected_tol", 1e-2);
  SpectrumRun r = read_spectrum(c, 6);
  c.check_unused();
  solve_spectrum(r);
  ExperimentResult out;
  out.files.emplace_back("eigenvalues.csv", eigen_table(r.res));
  spectrum_checks(r, out, expected, tol);
  return out;
}

ExperimentResult growth_fit_experiment(const ExperimentConfig& c) {
  const int j_min = c.get_int("j_min", 50);
  const int j_max = c.get_int("j_max", 400);
  const bool has_min = c.has("min_exponent"), has_target = c.has("target_exponent");
  const double min_exp = c.get_double("min_exponent", 0.0);
  const double target = c.get_double("target_exponent", 0.0);
  const double target_tol = c.get_double("target_tol", 0.05);
  SpectrumRun r = read_spectrum(c, j_max);
  c.check_unused();
  solve_spectrum(r);
  const GrowthFit f = growth_fit(r.res, j_min, j_max);
  ExperimentResult out;
  out.files.emplace_back("eigenvalues.csv", eigen_table(r.res));
  Csv csv({"operator", "N", "L", "j_min", "j_max", "exponent", "log_c", "residual"});
  csv.row({r.H.provenance, std::to_string(r.N), num(r.spec.L), std::to_string(f.j_min), std::to_string(f.j_max),
           num(f.exponent), num(f.log_c), num(f.residual)});
  out.files.emplace_back("fit.csv", csv.str());
  spectrum_checks(r, out, {}, 0.0);
  if (has_min) out.checks.emplace_back("exponent_lower_bound", f.exponent >= min_exp);
  if (has_target) out.checks.emplace_back("exponent_target", std::abs(f.exponent - target) <= target_tol);
  out.summary["exponent"] = f.exponent;
  out.summary["fit_residual"] = f.residual;
  return out;
}

// ---------------------------------------------------------------- schatten-sweep

ExperimentResult schatten_sweep(const ExperimentConfig& c) {
  const WeightEvaluator w = make_weight(c);
  const auto mus = c.get_doubles("mu", {});
  const double r = c.get_double("r", 2.0);
  SchattenTrendOptions opt;
  opt.N_ladder = c.get_ints("N", opt.N_ladder);
  opt.L_ladder = c.get_doubles("L_ladder", opt.L_ladder);
  opt.tail_L = c.get_doubles("tail_L", opt.tail_L);
  opt.fixed_L = c.get_double("matrix_L", 0.0);
  opt.matrix_gate = c.get_double("matrix_gate", opt.matrix_gate);
  opt.nodes_per_panel = c.get_int("nodes_per_panel", opt.nodes_per_panel);
  opt.shift = c.get_double("shift", opt.shift);
  opt.skip_matrix = !c.get_bool("matrix", true);
  c.check_unused();
  if (mus.empty()) throw ConfigError("missing required key 'mu'");

  ExperimentResult out;
  Csv csv({"operator", "N", "L", "mu", "r", "schatten_value", "box_integral", "fit_exponent", "residual"});
  json trends = json::array();
  for (double mu : mus) {
    const SchattenTrend t = schatten_criterion_experiment(w, mu, r, opt);
    const std::string na = "";
    for (const auto& m : t.matrix)
      csv.row({w.name, std::to_string(m.N), num(m.L), num(mu), num(r), num(m.value), na, na, num(t.matrix_change)});
    for (const auto& b : t.integral)
      csv.row({w.name, na, num(b.L), num(mu), num(r), na, num(b.value), na, num(t.divergence_indicator)});
    const std::string tag = "mu=" + tag_num(mu);
    out.checks.emplace_back(tag + ":ladder_monotone", t.ladder_monotone);
    if (t.integral_converges && !opt.skip_matrix) out.checks.emplace_back(tag + ":matrix_stable", t.matrix_stable);
    json j;
    j["mu"] = mu;
    j["divergence_indicator"] = t.divergence_indicator;
    j["integral_converges"] = t.integral_converges;
    j["integral_limit"] = finite_or_null(t.integral_limit);
    j["matrix_change"] = t.matrix_change;
    j["matrix_stable"] = t.matrix_stable;
    j["notes"] = t.notes;
    trends.push_back(j);
  }
  out.files.emplace_back("sweep.csv", csv.str());
  out.summary["weight"] = w.name;
  out.summary["trends"] = trends;
  return out;
}

// ---------------------------------------------------------------- evolve

ExperimentResult evolve_experiment(const ExperimentConfig& c) {
  const OperatorSpec spec = read_operator_spec(c);
  const int N = c.get_int("N", 32);
  const std::string kind_s = c.get_string("kind", "schrodinger");
  const double t_end = c.get_double("t_end", 1.0);
  const int steps = c.get_int("steps", 1000);
  const std::uint64_t seed = c.get_seed();
  const std::string policy_s = c.get_string("policy", "eigen");
  EvolveOptions eo;
  eo.cn_dt = c.get_double("cn_dt", eo.cn_dt);
  const bool fractional = c.has("beta");
  const double beta = c.get_double("beta", 1.0);
  const double shift = c.get_double("shift", 1.0);
  const double law_tol = c.get_double("law_tol", 1e-9);
  c.check_unused();

  EvolutionKind kind;
  if (kind_s == "schrodinger")
    kind = EvolutionKind::Schrodinger;
  else if (kind_s == "heat")
    kind = EvolutionKind::Heat;
  else
    throw ConfigError("key 'kind': expected 'schrodinger' or 'heat'");
  if (policy_s == "eigen")
    eo.policy = TimeStepPolicy::Eigen;
  else if (policy_s == "crank-nicolson")
    eo.policy = TimeStepPolicy::CrankNicolson;
  else
    throw ConfigError("key 'policy': expected 'eigen' or 'crank-nicolson'");
  if (steps < 2 || t_end <= 0.0) throw ConfigError("need steps >= 2 and t_end > 0");
  const double drift_tol = c.has("drift_tol") ? c.get_double("drift_tol")
                           : eo.policy == TimeStepPolicy::Eigen ? 1e-10 : 1e-6;

  const HamiltonianMatrix H = make_hamiltonian(spec, N);
  Propagator P(kind, H, eo);
  if (fractional) P = P.fractional(beta, shift);
  const Eigen::VectorXcd f = random_packets(H.grid, seed);
  std::vector<double> times(steps);
  for (int i = 0; i < steps; ++i) times[i] = t_end * i / (steps - 1);
  const EvolutionTrace tr = P.evolve(f, times);

  ExperimentResult out;
  std::ostringstream os;
  tr.write_csv(os);
  out.files.emplace_back("trace.csv", os.str());

  if (kind == EvolutionKind::Schrodinger) {
    out.checks.emplace_back("norm_conservation", tr.max_norm_drift() <= drift_tol);
  } else {
    bool mono = true;
    for (size_t i = 1; i < tr.norms.size(); ++i) mono = mono && tr.norms[i] <= tr.norms[i - 1] * (1.0 + 1e-14);
    out.checks.emplace_back("norm_nonincreasing", mono);
  }
  // Group (semigroup) law on a pair of times.
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> ut(0.0, t_end / 2.0);
  double law = 0.0;
  for (int trial = 0; trial < 4; ++trial) {
    const double s = ut(rng), t = ut(rng);
    const Eigen::VectorXcd a = P.apply(t, P.apply(s, f));
    const Eigen::VectorXcd b = P.apply(s + t, f);
    law = std::max(law, (a - b).norm() / std::max(b.norm(), 1e-300));
  }
  const double law_gate = eo.policy == TimeStepPolicy::Eigen ? law_tol : std::max(law_tol, 1e-6);
  out.checks.emplace_back(kind == EvolutionKind::Schrodinger ? "group_law" : "semigroup_law", law <= law_gate);
  if (!spec.potential.empty()) {
    std::vector<Point> nodes;
    for (int i = 0; i < H.grid.size(); ++i) nodes.push_back(H.grid.point(i));
    const double C2 = validate_p2(make_potential(spec.potential), nodes).constants.at("C2");
    const double lmin = P.eigenvalues().size() ? P.eigenvalues()[0] : eigensolve(H, 1).eigenvalues[0];
    out.checks.emplace_back("lower_bound", fractional || lmin >= -C2 - 1e-9);
    out.summary["C2"] = C2;
    out.summary["lambda_min"] = lmin;
  }
  out.summary["operator"] = H.provenance;
  out.summary["policy"] = tr.policy;
  out.summary["convention"] = tr.convention;
  out.summary["max_norm_drift"] = tr.max_norm_drift();
  out.summary["law_error"] = law;
  return out;
}

// ---------------------------------------------------------------- lp / band / subellipticity

const Row kProbeHeader{"operator", "N", "L", "parameter", "probe", "lower", "upper", "verdict"};

ExperimentResult lp_probe(const ExperimentConfig& c) {
  const OperatorSpec spec = read_operator_spec(c);
  const WeightEvaluator w = make_weight(c);
  const double beta = c.get_double("beta");
  const auto p_list = c.get_doubles("p", {1.0, 1.5, 2.0, 3.0, 4.0});
  const auto N_list = c.get_ints("N", {12, 16, 24});
  LpProbeOptions opt;
  opt.shift = c.get_double("shift", opt.shift);
  opt.trials = c.get_int("trials", opt.trials);
  opt.seed = c.get_seed();
  opt.calibration_tol = c.get_double("calibration_tol", opt.calibration_tol);
  opt.stable_change = c.get_double("stable_change", opt.stable_change);
  c.check_unused();

  const LpWindowReport rep = lp_window_probe([&](int N) { return make_hamiltonian(spec, N); }, w, beta, p_list,
                                             N_list, opt);
  Csv csv(kProbeHeader);
  bool bracket = true;
  for (const auto& cell : rep.cells) {
    bracket = bracket && cell.lower <= cell.upper * (1.0 + 1e-9);
    csv.row({cell.op, std::to_string(cell.N), num(cell.L), num(beta), num(cell.p), num(cell.lower), num(cell.upper),
             cell.admissible ? "admissible" : "outside"});
  }
  ExperimentResult out;
  out.files.emplace_back("lp.csv", csv.str());
  out.checks.emplace_back("calibration", rep.calibration.pass);
  out.checks.emplace_back("bracket", bracket);
  const double window = 0.5 * w.n * beta;
  for (const auto& [p, st] : rep.stable)
    if (std::abs(1.0 / p - 0.5) <= window + 1e-12) out.checks.emplace_back("p=" + tag_num(p) + ":stable", st);
  out.summary["calibration_residual"] = rep.calibration.residual;
  out.summary["beta_prime"] = rep.calibration.beta_prime;
  json st = json::object();
  for (const auto& [p, s] : rep.stable) st[num(p)] = s;
  out.summary["stable"] = st;
  return out;
}

ExperimentResult band_probe(const ExperimentConfig& c) {
  const WeightEvaluator w = make_weight(c);
  const double eps = c.get_double("epsilon", 0.8);
  const auto R_list = c.get_doubles("R", {3.0, 9.0, 27.0});
  const double gate = c.get_double("spread_gate", 2.0);
  BandProbeOptions opt;
  opt.trials = c.get_int("trials", opt.trials);
  opt.seed = c.get_seed();
  opt.seminorm_points = static_cast<std::size_t>(c.get_int("seminorm_points", static_cast<int>(opt.seminorm_points)));
  opt.seminorm_order = c.get_int("seminorm_order", opt.seminorm_order);
  c.check_unused();

  const auto res = linf_band_probe(w, eps, R_list, opt);
  const double spread = band_quotient_spread(res);
  Csv csv(kProbeHeader);
  for (const auto& r : res) {
    std::string Ns, Ls;
    for (size_t a = 0; a < r.N.size(); ++a) {
      Ns += (a ? "x" : "") + std::to_string(r.N[a]);
      Ls += (a ? "x" : "") + num(r.L[a]);
    }
    csv.row({w.name, Ns, Ls, num(eps), num(r.R), num(r.trial_ratio), num(r.ratio), num(r.quotient)});
  }
  ExperimentResult out;
  out.files.emplace_back("band.csv", csv.str());
  out.checks.emplace_back("quotient_spread", spread < gate);
  out.summary["spread"] = spread;
  json ladder = json::array();
  for (const auto& r : res)
    ladder.push_back({{"R", r.R}, {"ratio", r.ratio}, {"seminorm", r.seminorm}, {"quotient", r.quotient}});
  out.summary["ladder"] = ladder;
  return out;
}

ExperimentResult subellipticity(const ExperimentConfig& c) {
  const OperatorSpec spec = read_operator_spec(c);
  const double tau = c.get_double("tau", 0.5);
  const auto N_list = c.get_ints("N", {15, 31, 63});
  SubellipticityOptions opt;
  opt.seed = c.get_seed();
  opt.trials = c.get_int("trials", opt.trials);
  opt.power_iterations = c.get_int("power_iterations", opt.power_iterations);
  opt.stable_change = c.get_double("stable_change", opt.stable_change);
  c.check_unused();
  if (!spec.potential.empty()) throw ConfigError("subellipticity takes a kinetic operator without potential");

  const auto rep = subellipticity_probe([&](int N) { return make_hamiltonian(spec, N); }, tau, N_list, opt);
  Csv csv(kProbeHeader);
  for (const auto& cell : rep.cells)
    csv.row({rep.op, std::to_string(cell.N), num(spec.L), num(tau), "C1", num(cell.trial_C1), num(cell.C1),
             rep.stable ? "stable" : "growing"});
  ExperimentResult out;
  out.files.emplace_back("subellipticity.csv", csv.str());
  out.checks.emplace_back("C1_stable", rep.stable);
  out.summary["max_change"] = rep.max_change;
  out.summary["operator"] = rep.op;
  return out;
}

}  // namespace

bool ExperimentResult::all_pass() const {
  for (const auto& [name, ok] : checks)
    if (!ok) return false;
  return true;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  const std::string& k = c.kind();
  if (k == "metric-check") return metric_check(c);
  if (k == "class-check") return class_check(c);
  if (k == "quantize-identity") return quantize_identity(c);
  if (k == "spectrum") return spectrum(c);
  if (k == "growth-fit") return growth_fit_experiment(c);
  if (k == "schatten-sweep") return schatten_sweep(c);
  if (k == "evolve") return evolve_experiment(c);
  if (k == "lp-probe") return lp_probe(c);
  if (k == "band-probe") return band_probe(c);
  if (k == "subellipticity") return subellipticity(c);
  throw ConfigError("unknown experiment '" + k + "'");
}

}  // namespace weylab::cli
