#include <benchmark/benchmark.h>

#include "dualmarg/bp.hpp"
#include "dualmarg/model.hpp"
#include "dualmarg/rng.hpp"

using namespace dualmarg;

namespace {

void BM_Dft(benchmark::State& state) {
  const int q = static_cast<int>(state.range(0));
  CounterRng rng(5);
  std::vector<double> v(q);
  for (double& x : v) x = rng.uniform(0.1, 2.0);
  for (int a = 1; 2 * a < q; ++a) v[q - a] = v[a];
  FactorTable t{v, Domain::primal};
  for (auto _ : state) {
    FactorTable d = dft(t);
    benchmark::DoNotOptimize(d.values[0]);
  }
}
BENCHMARK(BM_Dft)->Arg(2)->Arg(5)->Arg(16);

void BM_SumKindMessages(benchmark::State& state) {
  const int q = 2;
  const int degree = static_cast<int>(state.range(0));
  CounterRng rng(6);
  std::vector<double> kernel{2.0 * std::cosh(0.15), 2.0 * std::sinh(0.15)};
  std::vector<std::vector<double>> incoming(degree, std::vector<double>(q));
  for (auto& m : incoming) {
    const double x = rng.uniform(0.2, 0.8);
    m = {x, 1.0 - x};
  }
  for (auto _ : state) {
    auto out = sum_kind_messages(kernel, incoming);
    benchmark::DoNotOptimize(out[0][0]);
  }
}
BENCHMARK(BM_SumKindMessages)->Arg(4)->Arg(9);

}  // namespace
