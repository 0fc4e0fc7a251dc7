#include <benchmark/benchmark.h>

#include "gsplit/experiments.hpp"
#include "gsplit/random.hpp"

using namespace gsplit;

namespace {

void BM_MultiplySerial(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Matrix a = gaussian_matrix(n, n, rng), b = gaussian_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(multiply_serial(a, b));
}

void BM_MultiplyParallel(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  const Matrix a = gaussian_matrix(n, n, rng), b = gaussian_matrix(n, n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(multiply(a, b));
}

struct SweepInput {
  Matrix t;
  Vector v0;
  std::vector<double> grid;
};

SweepInput sweep_input(std::size_t nodes) {
  Rng rng(2);
  const ProductSubspace spaces = [&] {
    std::vector<Subspace> f;
    for (std::size_t i = 0; i < nodes; ++i) f.push_back(Subspace::random(4, 2, 10 + i));
    return ProductSubspace(std::move(f));
  }();
  const SplittingOperator op = SplittingOperator::build(GraphPair::same(preset(Preset::complete, nodes)), spaces);
  return {op.matrix(), gaussian_vector(op.dimension(), rng), theta_grid(0.05, 1.95, 0.05)};
}

void BM_SweepSerial(benchmark::State& state) {
  const SweepInput in = sweep_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(theta_sweep_serial(in.t, in.grid, in.v0, 1e-8, 5000));
}

void BM_SweepParallel(benchmark::State& state) {
  const SweepInput in = sweep_input(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(theta_sweep(in.t, in.grid, in.v0, 1e-8, 5000));
}

}  // namespace

BENCHMARK(BM_MultiplySerial)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_MultiplyParallel)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
