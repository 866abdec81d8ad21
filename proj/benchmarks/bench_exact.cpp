#include <benchmark/benchmark.h>

#include "dualmarg/exact.hpp"

using namespace dualmarg;

namespace {

void BM_PrimalExactGrid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Graph g = grid_graph(side, side, true);
  FactorSet fs = ising_factors(g, ModelParams::homogeneous(g, 2, 0.44, 0.15));
  for (auto _ : state) {
    ExactResult res = primal_exact(g, fs);
    benchmark::DoNotOptimize(res.z);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << (side * side)));
}
BENCHMARK(BM_PrimalExactGrid)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_DualExactGrid3(benchmark::State& state) {
  Graph g = grid_graph(3, 3, true);
  FactorSet dual =
      dual_factors(g, ising_factors(g, ModelParams::homogeneous(g, 2, 0.44, 0.15)));
  for (auto _ : state) {
    ExactResult res = dual_exact(g, dual);
    benchmark::DoNotOptimize(res.z);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << 18));
}
BENCHMARK(BM_DualExactGrid3)->Unit(benchmark::kMillisecond);

void BM_PrimalExactPartitioned(benchmark::State& state) {
  Graph g = grid_graph(4, 4, true);
  FactorSet fs = ising_factors(g, ModelParams::homogeneous(g, 2, 0.44, 0.15));
  EnumerationOptions opts;
  opts.partitions = static_cast<int>(state.range(0));
  for (auto _ : state) {
    ExactResult res = primal_exact(g, fs, opts);
    benchmark::DoNotOptimize(res.z);
  }
}
BENCHMARK(BM_PrimalExactPartitioned)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
