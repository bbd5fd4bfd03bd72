// Serial vs OpenMP kernels, plus end-to-end solver runs.

#include <random>

#include <benchmark/benchmark.h>

#include "mxl/generators.hpp"
#include "mxl/kernels.hpp"
#include "mxl/solver.hpp"

namespace {

using namespace mxl;

GeneratedGraph sbm(std::size_t block) {
  SbmSpec spec;
  spec.sizes.assign(4, block);
  spec.p_in = 0.1;
  spec.p_out = 0.1 / 3.0;
  spec.seed = 7;
  return gen_sbm(spec);
}

FeatureMatrix random_features(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> d;
  FeatureMatrix f{rows, cols, std::vector<double>(rows * cols)};
  for (double& x : f.values) x = d(rng);
  return f;
}

template <auto Kernel>
void BM_modularity(benchmark::State& state) {
  const auto gen = sbm(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(gen.graph, gen.truth));
}

template <auto Kernel>
void BM_correlation(benchmark::State& state) {
  const auto f = random_features(static_cast<std::size_t>(state.range(0)), 64);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(f));
}

void BM_solver(benchmark::State& state) {
  const auto gen = sbm(static_cast<std::size_t>(state.range(0)));
  SolverConfig cfg = preset(Method::MVM, 2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(run(gen.graph, cfg).f);
}

}  // namespace

BENCHMARK(BM_modularity<kernels::modularity_vector_serial>)->Arg(125)->Arg(500);
BENCHMARK(BM_modularity<kernels::modularity_vector>)->Arg(125)->Arg(500);
BENCHMARK(BM_correlation<kernels::correlation_matrix_serial>)->Arg(200)->Arg(800);
BENCHMARK(BM_correlation<kernels::correlation_matrix>)->Arg(200)->Arg(800);
BENCHMARK(BM_solver)->Arg(125)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
