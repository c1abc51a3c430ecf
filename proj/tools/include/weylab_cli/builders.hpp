#pragma once

#include <string>
#include <vector>

#include "weylab/hamiltonians.hpp"
#include "weylab/metric.hpp"
#include "weylab_cli/config.hpp"

namespace weylab::cli {

struct BuilderParam {
  std::string name;
  std::string type;
  std::string def;
  std::string doc;
};

struct BuilderInfo {
  std::string category;  // weight | operator | potential | symbol
  std::string name;
  std::vector<BuilderParam> params;
  std::string doc;
};

const std::vector<BuilderInfo>& builder_registry();
std::string list_builders_text();

/// Weight from `builder` (+ c_prime, n, metric).
WeightEvaluator make_weight(const ExperimentConfig& c);

struct OperatorSpec {
  std::string builder;
  int n = 2;
  double c_prime = 3.0;
  double L = 8.0;
  int order = 4;
  std::string potential;  // empty: none
  bool override_p2 = false;
};

OperatorSpec read_operator_spec(const ExperimentConfig& c, double default_L = 8.0);
HamiltonianMatrix make_hamiltonian(const OperatorSpec& s, int N);

/// "zero", "constant(c)", "quadratic", "step", "bounded_noise(seed)", "negative_quartic", "table(path)".
Potential make_potential(const std::string& spec);

}  // namespace weylab::cli
