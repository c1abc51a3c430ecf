#include <benchmark/benchmark.h>

#include <random>

#include "weylab/eigensolve.hpp"
#include "weylab/evolve.hpp"
#include "weylab/hamiltonians.hpp"
#include "weylab/quantize.hpp"
#include "weylab/symbols.hpp"

using namespace weylab;

static void BM_DahoAssembly(benchmark::State& st) {
  const DirichletGrid g(2, 8.0, static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(daho_matrix(3.0, g).sparse.nonZeros());
  st.SetComplexityN(g.size());
}
BENCHMARK(BM_DahoAssembly)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BM_Eigensolve(benchmark::State& st) {
  const HamiltonianMatrix H = daho_matrix(3.0, DirichletGrid(2, 8.0, static_cast<int>(st.range(0))));
  EigensolveOptions o;
  o.vectors = false;
  for (auto _ : st) benchmark::DoNotOptimize(eigensolve(H, 20, o).eigenvalues[0]);
}
BENCHMARK(BM_Eigensolve)->Arg(24)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_LanczosEigensolve(benchmark::State& st) {
  const HamiltonianMatrix H = daho_matrix(3.0, DirichletGrid(2, 8.0, static_cast<int>(st.range(0))));
  EigensolveOptions o;
  o.vectors = false;
  o.dense_limit = 0;
  for (auto _ : st) benchmark::DoNotOptimize(eigensolve(H, 20, o).eigenvalues[0]);
}
BENCHMARK(BM_LanczosEigensolve)->Arg(64)->Arg(96)->Unit(benchmark::kMillisecond);

static void BM_WeylQuantize(benchmark::State& st) {
  const Grid g(1, 8.0, static_cast<int>(st.range(0)));
  const PolySymbol s = full_symbol(harmonic_symbol(1));
  for (auto _ : st) benchmark::DoNotOptimize(weyl_quantize(s, g).a(0, 0));
}
BENCHMARK(BM_WeylQuantize)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_KnRowAssembly(benchmark::State& st) {
  const Grid g(2, 6.0, static_cast<int>(st.range(0)));
  const SymbolEvaluator s = sym::real_power(sym::japanese(2), -1.0);
  for (auto _ : st) benchmark::DoNotOptimize(kn_quantize(s, g).a(0, 0));
}
BENCHMARK(BM_KnRowAssembly)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_SchrodingerStep(benchmark::State& st) {
  const HamiltonianMatrix H = daho_matrix(3.0, DirichletGrid(2, 8.0, 24));
  const Propagator P(EvolutionKind::Schrodinger, H);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Eigen::VectorXcd f(H.size());
  for (auto& z : f) z = {nd(rng), nd(rng)};
  for (auto _ : st) benchmark::DoNotOptimize(P.apply(0.5, f)[0]);
}
BENCHMARK(BM_SchrodingerStep)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
