#include <cmath>
#include <map>

#include "doctest.h"
#include "support/test_oracles.hpp"

#include "dualmarg/errors.hpp"
#include "dualmarg/exact.hpp"
#include "dualmarg/mapping.hpp"
#include "dualmarg/swp.hpp"

using namespace dualmarg;

namespace {

Graph triangle() { return graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }

ModelParams triangle_params() {
  Graph g = triangle();
  return ModelParams::homogeneous(g, 2, 0.5, 0.3);
}

}  // namespace

TEST_SUITE("swp") {

TEST_CASE("subset weights") {
  Graph g = triangle();
  ModelParams p = triangle_params();
  CHECK(swp_weight({0, 0, 0}, g, p) == 1.0);  // empty products

  const double tj = std::tanh(0.5);
  const double th = std::tanh(0.3);
  CHECK(swp_weight({1, 0, 0}, g, p) == doctest::Approx(th * th * tj).epsilon(1e-14));
  CHECK(swp_weight({1, 0, 0}, g, p) == doctest::Approx(0.0392167).epsilon(1e-5));
  // full cycle: no odd vertices
  CHECK(swp_weight({1, 1, 1}, g, p) == doctest::Approx(tj * tj * tj).epsilon(1e-14));

  ModelParams bad = p;
  bad.couplings[1] = -0.5;
  CHECK_THROWS_AS(swp_weight({0, 0, 0}, g, bad), ValidationError);
  bad = p;
  bad.fields[0] = 0.0;
  CHECK_THROWS_AS(swp_weight({0, 0, 0}, g, bad), ValidationError);
}

TEST_CASE("toggles move odd_count by -2, 0 or +2") {
  Graph g = grid_graph(3, 3, false);
  ModelParams p = ModelParams::homogeneous(g, 2, 0.4, 0.2);
  SwpChain chain(g, p);
  CounterRng rng(8);
  int prev = chain.state().odd_count;
  for (int s = 0; s < 2000; ++s) {
    chain.step(rng);
    const int diff = chain.state().odd_count - prev;
    CHECK((diff == -2 || diff == 0 || diff == 2));
    prev = chain.state().odd_count;
  }
}

TEST_CASE("incremental log weight matches recomputation after many toggles") {
  Graph g = grid_graph(3, 3, false);
  ModelParams p = ModelParams::homogeneous(g, 2, 0.4, 0.2);
  SwpChain chain(g, p);
  CounterRng rng(9);
  for (int s = 0; s < 100000; ++s) chain.step(rng);
  CHECK(std::abs(chain.state().log_weight - chain.recompute_log_weight()) < 1e-9);
  // cached weight equals the from-definition weight of the current subset
  CHECK(std::exp(chain.state().log_weight) ==
        doctest::Approx(swp_weight(chain.state().in_subset, g, p)).epsilon(1e-9));
}

TEST_CASE("exact subset enumeration equals the dual marginals") {
  Graph g = triangle();
  ModelParams p = triangle_params();
  auto inc = swp_exact_small(g, p);
  CHECK(inc[0] == doctest::Approx(0.13704858649374646).epsilon(1e-12));

  ExactResult de = dual_exact(g, dual_factors(g, ising_factors(g, p)));
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(std::abs(inc[e] - de.edge_marginals[e][1]) < 1e-12);
  }
  // homogeneous triangle: all edges equivalent
  CHECK(inc[1] == doctest::Approx(inc[0]).epsilon(1e-14));
}

TEST_CASE("exact subset probabilities map to the exact primal marginals") {
  CounterRng rng(271);
  for (const Graph& g :
       {triangle(), graph_from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}),
        grid_graph(3, 3, false)}) {
    ModelParams p;
    p.q = 2;
    for (int k = 0; k < g.edge_count(); ++k) p.couplings.push_back(rng.uniform(0.2, 0.8));
    for (int v = 0; v < g.vertex_count; ++v) p.fields.push_back(rng.uniform(0.1, 0.5));
    FactorSet primal = ising_factors(g, p);
    FactorSet dual = dual_factors(g, primal);
    ExactResult pe = primal_exact(g, primal);
    auto inc = swp_exact_small(g, p);
    for (int e = 0; e < g.edge_count(); ++e) {
      const std::vector<double> pi_d{1.0 - inc[e], inc[e]};
      auto mapped = map_edge_dual_to_primal(pi_d, primal.edge[e], dual.edge[e]);
      CHECK(std::abs(mapped[0] - pe.edge_marginals[e][0]) < 1e-10);
      CHECK(std::abs(mapped[1] - pe.edge_marginals[e][1]) < 1e-10);
    }
  }
}

TEST_CASE("empirical state distribution matches the stationary law") {
  // 8 subsets of the triangle; long-run visit frequencies vs exact weights
  Graph g = triangle();
  ModelParams p = triangle_params();
  std::vector<double> w(8);
  double z = 0.0;
  for (int bits = 0; bits < 8; ++bits) {
    std::vector<std::uint8_t> subset{static_cast<std::uint8_t>(bits & 1),
                                     static_cast<std::uint8_t>(bits >> 1 & 1),
                                     static_cast<std::uint8_t>(bits >> 2 & 1)};
    w[bits] = swp_weight(subset, g, p);
    z += w[bits];
  }
  SwpChain chain(g, p);
  CounterRng rng(123);
  const int steps = 1000000;
  std::vector<int> visits(8, 0);
  for (int s = 0; s < steps; ++s) {
    chain.step(rng);
    const auto& in = chain.state().in_subset;
    ++visits[in[0] | in[1] << 1 | in[2] << 2];
  }
  for (int bits = 0; bits < 8; ++bits) {
    const double expected = w[bits] / z;
    const double observed = static_cast<double>(visits[bits]) / steps;
    // loose 4-sigma-ish band with an autocorrelation allowance
    const double band = 4.0 * std::sqrt(expected * (1.0 - expected) * 10.0 / steps);
    CHECK(std::abs(observed - expected) < band);
  }
}

TEST_CASE("mcmc estimate approaches the exact inclusion probabilities") {
  Graph g = triangle();
  ModelParams p = triangle_params();
  auto exact = swp_exact_small(g, p);
  SwpEstimate est = swp_estimate(g, p, 20000, 500, /*seed=*/2718);
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(std::abs(est.p_hat[e] - exact[e]) < 4.0 * est.std_err[e]);
    CHECK(est.p_hat[e] >= 0.0);
    CHECK(est.p_hat[e] <= 1.0);
  }
  CHECK(est.acceptance_rate > 0.0);
  CHECK(est.samples == 20000);
  CHECK(est.steps == (20000 + 500) * 3);
}

TEST_CASE("fixed seeds reproduce bitwise") {
  Graph g = triangle();
  ModelParams p = triangle_params();
  SwpEstimate a = swp_estimate(g, p, 5000, 100, 42);
  SwpEstimate b = swp_estimate(g, p, 5000, 100, 42);
  CHECK(a.p_hat == b.p_hat);
  CHECK(a.std_err == b.std_err);
  SwpEstimate c = swp_estimate(g, p, 5000, 100, 43);
  CHECK(a.p_hat != c.p_hat);
}

TEST_CASE("preconditions") {
  Graph g = triangle();
  ModelParams p = triangle_params();
  p.q = 3;
  CHECK_THROWS_AS(SwpChain(g, p), ValidationError);
  p = triangle_params();
  p.fields[2] = -0.1;
  CHECK_THROWS_AS(swp_estimate(g, p, 100, 10, 1), ValidationError);
  p = triangle_params();
  CHECK_THROWS_AS(swp_exact_small(g, p, /*budget=*/4), ValidationError);
}

}  // TEST_SUITE
