#include <benchmark/benchmark.h>

#include "dualmarg/bp.hpp"

using namespace dualmarg;

namespace {

void BM_BpPrimal4x4(benchmark::State& state) {
  Graph g = grid_graph(4, 4, true);
  FactorSet fs = ising_factors(g, ModelParams::homogeneous(g, 2, 0.3, 0.15));
  FactorGraph fg = build_primal_fg(g, fs);
  for (auto _ : state) {
    BpReport rep = run_bp(fg);
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(BM_BpPrimal4x4)->Unit(benchmark::kMillisecond);

void BM_BpDual4x4(benchmark::State& state) {
  Graph g = grid_graph(4, 4, true);
  FactorSet dual =
      dual_factors(g, ising_factors(g, ModelParams::homogeneous(g, 2, 0.3, 0.15)));
  FactorGraph fg = build_dual_fg(g, dual);
  for (auto _ : state) {
    BpReport rep = run_bp(fg);
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(BM_BpDual4x4)->Unit(benchmark::kMillisecond);

void BM_BpDualComplete10(benchmark::State& state) {
  Graph g = complete_graph(10);
  FactorSet dual =
      dual_factors(g, ising_factors(g, ModelParams::homogeneous(g, 2, 0.4, 0.0)));
  FactorGraph fg = build_dual_fg(g, dual);
  for (auto _ : state) {
    BpReport rep = run_bp(fg);
    benchmark::DoNotOptimize(rep.iterations);
  }
}
BENCHMARK(BM_BpDualComplete10)->Unit(benchmark::kMillisecond);

}  // namespace
