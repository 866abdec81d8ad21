#include <benchmark/benchmark.h>

#include "dualmarg/swp.hpp"

using namespace dualmarg;

namespace {

void BM_SwpSteps(benchmark::State& state) {
  Graph g = grid_graph(4, 4, true);
  ModelParams p = ModelParams::homogeneous(g, 2, 0.4, 0.15);
  SwpChain chain(g, p);
  CounterRng rng(1);
  for (auto _ : state) {
    chain.step(rng);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SwpSteps);

void BM_SwpEstimateTriangle(benchmark::State& state) {
  Graph g = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  ModelParams p = ModelParams::homogeneous(g, 2, 0.5, 0.3);
  for (auto _ : state) {
    SwpEstimate est = swp_estimate(g, p, 10000, 100, 7);
    benchmark::DoNotOptimize(est.p_hat[0]);
  }
}
BENCHMARK(BM_SwpEstimateTriangle)->Unit(benchmark::kMillisecond);

}  // namespace
