#include "weylab_cli/builders.hpp"

#include <algorithm>
#include <memory>
#include <sstream>

#include "weylab/geometry.hpp"

namespace weylab::cli {

const std::vector<BuilderInfo>& builder_registry() {
  static const std::vector<BuilderInfo> r{
      {"weight", "daho", {{"c_prime", "real", "3", "plateau level of the x1 cutoff; nonzero"}},
       "degenerate harmonic oscillator weight, a2 = xi1^2 + x~1(x1)^2 xi2^2, n = 2"},
      {"weight", "harmonic", {{"n", "int", "2", "dimension 1..4"}}, "elliptic control, a2 = |xi|^2"},
      {"weight", "grushin_pure", {}, "a2 = xi1^2 + x1^2 xi2^2 without cutoff, n = 2"},
      {"weight", "broken", {{"n", "int", "2", "dimension"}}, "m = <X>/2, violates the uncertainty principle"},
      {"operator", "daho", {{"c_prime", "real", "3", ""}, {"L", "real", "8", "box half-width"},
                            {"N", "int", "64", "interior nodes per axis"}, {"order", "int", "4", "2 or 4"}},
       "-(d1^2 + d2 x~1^2 d2) + |x|^2 on a Dirichlet grid"},
      {"operator", "harmonic", {{"n", "int", "2", ""}, {"L", "real", "8", ""}, {"N", "int", "64", ""},
                                {"order", "int", "4", ""}},
       "-Delta + |x|^2"},
      {"operator", "grushin_pure", {{"L", "real", "8", ""}, {"N", "int", "64", ""}, {"order", "int", "4", ""}},
       "-(d1^2 + x1^2 d2^2) + |x|^2"},
      {"operator", "daho_kinetic", {{"c_prime", "real", "3", ""}, {"L", "real", "8", ""}, {"N", "int", "64", ""}},
       "sum of squares of the daho fields without |x|^2"},
      {"operator", "laplacian", {{"n", "int", "2", ""}, {"L", "real", "8", ""}, {"N", "int", "64", ""}}, "-Delta"},
      {"operator", "single_field", {{"L", "real", "8", ""}, {"N", "int", "64", ""}},
       "-d1^2 in two dimensions (not bracket generating)"},
      {"potential", "zero", {}, "V = 0"},
      {"potential", "constant(c)", {{"c", "real", "", ""}}, "V = c"},
      {"potential", "quadratic", {}, "V = |x|^2"},
      {"potential", "step", {}, "V = -5 + (floor(x1) mod 2)"},
      {"potential", "bounded_noise(seed)", {{"seed", "int", "", "hash seed"}},
       "piecewise constant on unit cells, values in [-1, 1]"},
      {"potential", "negative_quartic", {}, "V = -|x|^4 (fails the lower bound)"},
      {"potential", "table(path)", {{"path", "string", "", "rows 'x1 .. xn value'"}}, "nearest-node lookup"},
      {"symbol", "a", {}, "a2 + |x|^2 of the chosen weight"},
      {"symbol", "m", {}, "the weight itself"},
      {"symbol", "exp_abs_x", {}, "e^{|x|}, negative control for class membership"},
  };
  return r;
}

std::string list_builders_text() {
  std::ostringstream os;
  std::string cat;
  for (const auto& b : builder_registry()) {
    if (b.category != cat) {
      cat = b.category;
      os << cat << ":\n";
    }
    os << "  " << b.name;
    if (!b.params.empty()) {
      os << " [";
      for (size_t i = 0; i < b.params.size(); ++i) {
        const auto& p = b.params[i];
        os << (i ? ", " : "") << p.name << ": " << p.type;
        if (!p.def.empty()) os << " = " << p.def;
      }
      os << "]";
    }
    os << "\n      " << b.doc << "\n";
  }
  return os.str();
}

WeightEvaluator make_weight(const ExperimentConfig& c) {
  const std::string b = c.get_string("builder");
  WeightEvaluator w;
  if (b == "daho") {
    const double cp = c.get_double("c_prime", 3.0);
    if (cp == 0.0) throw ConfigError("daho: c_prime must be nonzero");
    w = WeightEvaluator::daho(cp);
  } else if (b == "harmonic") {
    w = WeightEvaluator::harmonic(c.get_int("n", 2));
  } else if (b == "grushin_pure") {
    w = WeightEvaluator::from_symbol(grushin_pure_symbol(), "grushin_pure");
  } else if (b == "broken") {
    w = WeightEvaluator::broken(c.get_int("n", 2));
  } else {
    throw ConfigError("unknown weight builder '" + b + "'");
  }
  const std::string metric = c.get_string("metric", "weighted");
  if (metric == "shubin")
    w = w.with_kind(MetricKind::Shubin);
  else if (metric != "weighted")
    throw ConfigError("metric must be 'weighted' or 'shubin'");
  return w;
}

OperatorSpec read_operator_spec(const ExperimentConfig& c, double default_L) {
  OperatorSpec s;
  s.builder = c.get_string("builder");
  s.c_prime = c.get_double("c_prime", 3.0);
  s.L = c.get_double("L", default_L);
  s.order = c.get_int("order", 4);
  s.potential = c.get_string("potential", "");
  s.override_p2 = c.get_bool("override_p2", false);
  if (s.c_prime == 0.0) throw ConfigError("c_prime must be nonzero");
  if (s.builder == "harmonic" || s.builder == "laplacian") s.n = c.get_int("n", 2);
  static const std::vector<std::string> known{"daho", "harmonic", "grushin_pure", "daho_kinetic", "laplacian",
                                              "single_field"};
  if (std::find(known.begin(), known.end(), s.builder) == known.end())
    throw ConfigError("unknown operator builder '" + s.builder + "'");
  if (!s.potential.empty()) make_potential(s.potential);
  return s;
}

HamiltonianMatrix make_hamiltonian(const OperatorSpec& s, int N) {
  AssemblyOptions opt;
  opt.order = s.order;
  const std::string& base = s.builder;
  const int n = s.n;
  HamiltonianMatrix H;
  if (base == "daho") {
    H = daho_matrix(s.c_prime, DirichletGrid(2, s.L, N), opt);
  } else if (base == "harmonic") {
    H = harmonic_matrix(DirichletGrid(n, s.L, N), opt);
  } else if (base == "grushin_pure") {
    H = grushin_pure_matrix(DirichletGrid(2, s.L, N), opt);
  } else if (base == "daho_kinetic") {
    H = sum_of_squares_matrix(grushin_system(std::make_shared<const CutoffProfileSquared>(s.c_prime)),
                              DirichletGrid(2, s.L, N), opt);
    H.provenance = "daho_kinetic";
  } else if (base == "laplacian") {
    H = sum_of_squares_matrix(full_frame(n), DirichletGrid(n, s.L, N), opt);
    H.provenance = "laplacian";
  } else if (base == "single_field") {
    H = sum_of_squares_matrix(HormanderSystem(2, {VectorField::axis(2, 0)}), DirichletGrid(2, s.L, N), opt);
    H.provenance = "single_field";
  } else {
    throw ConfigError("unknown operator builder '" + s.builder + "'");
  }
  if (!s.potential.empty()) H = hamiltonian_with_potential(H, make_potential(s.potential), s.override_p2);
  return H;
}

Potential make_potential(const std::string& spec) {
  const auto open = spec.find('(');
  const std::string name = spec.substr(0, open);
  std::string arg;
  if (open != std::string::npos) {
    if (spec.back() != ')') throw ConfigError("potential '" + spec + "': missing ')'");
    arg = spec.substr(open + 1, spec.size() - open - 2);
  }
  auto need_arg = [&]() {
    if (arg.empty()) throw ConfigError("potential '" + name + "' needs an argument");
  };
  try {
    if (name == "zero") return Potential::zero();
    if (name == "quadratic") return Potential::quadratic();
    if (name == "step") return Potential::step();
    if (name == "negative_quartic") return Potential::negative_quartic();
    if (name == "constant") {
      need_arg();
      return Potential::constant(std::stod(arg));
    }
    if (name == "bounded_noise") {
      need_arg();
      return Potential::bounded_noise(std::stoull(arg));
    }
    if (name == "table") {
      need_arg();
      return Potential::table(arg);
    }
  } catch (const std::invalid_argument&) {
    throw ConfigError("potential '" + spec + "': bad argument");
  }
  throw ConfigError("unknown potential '" + spec + "'");
}

}  // namespace weylab::cli
