#include <cmath>

#include "doctest.h"
#include "support/test_oracles.hpp"

#include "dualmarg/bp.hpp"
#include "dualmarg/errors.hpp"
#include "dualmarg/exact.hpp"
#include "dualmarg/mapping.hpp"
#include "dualmarg/rng.hpp"

using namespace dualmarg;

namespace {

ModelParams random_ising(const Graph& g, CounterRng& rng, bool ferro_positive) {
  ModelParams p;
  p.q = 2;
  for (int k = 0; k < g.edge_count(); ++k) {
    const double mag = rng.uniform(0.1, 1.0);
    p.couplings.push_back(ferro_positive || rng.next_double() < 0.5 ? mag : -mag);
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    const double mag = rng.uniform(0.1, 0.5);
    p.fields.push_back(ferro_positive || rng.next_double() < 0.5 ? mag : -mag);
  }
  return p;
}

constexpr BpOptions kExactish{0.0, 1e-12, 10000, 0};

}  // namespace

TEST_SUITE("bp") {

TEST_CASE("factor graph construction counts") {
  Graph g = grid_graph(3, 3, true);
  ModelParams p = ModelParams::homogeneous(g, 2, 0.2, 0.15);
  FactorSet primal = ising_factors(g, p);
  FactorGraph fg = build_primal_fg(g, primal);
  CHECK(fg.variable_count == 9);
  CHECK(fg.factors.size() == 18 + 9);

  FactorGraph dfg = build_dual_fg(g, dual_factors(g, primal));
  CHECK(dfg.variable_count == 18);
  CHECK(dfg.factors.size() == 18 + 9);
  int sum_kind = 0;
  for (const auto& f : dfg.factors) {
    if (f.kind == FactorGraph::FactorKind::sum_kind) {
      ++sum_kind;
      CHECK(f.scope.size() == 4);
    }
  }
  CHECK(sum_kind == 9);

  Graph k10 = complete_graph(10);
  FactorGraph kfg = build_primal_fg(
      k10, ising_factors(k10, ModelParams::homogeneous(k10, 2, 0.1, 0.0)));
  int pairwise = 0;
  for (const auto& f : kfg.factors) {
    if (f.kind == FactorGraph::FactorKind::pairwise_diff) ++pairwise;
  }
  CHECK(pairwise == 45);
}

TEST_CASE("negative dual factors are rejected") {
  Graph g = graph_from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
  ModelParams p = ModelParams::homogeneous(g, 2, 0.5, 0.3);
  p.fields[2] = -0.3;  // sinh < 0
  CHECK_THROWS_AS(build_dual_fg(g, dual_factors(g, ising_factors(g, p))),
                  ValidationError);
}

TEST_CASE("bp is exact on trees, both domains") {
  CounterRng rng(2024);
  for (int n : {2, 5, 9, 12}) {
    Graph g = testsupport::random_tree(n, rng);
    ModelParams p = random_ising(g, rng, true);  // positive field: dual is a PMF
    FactorSet primal = ising_factors(g, p);
    FactorSet dual = dual_factors(g, primal);

    ExactResult pe = primal_exact(g, primal);
    FactorGraph pfg = build_primal_fg(g, primal);
    BpReport prep = run_bp(pfg, kExactish);
    CHECK(prep.converged);
    auto pedge = bp_edge_marginals(pfg, prep);
    auto pvert = bp_vertex_marginals(pfg, prep);
    for (int e = 0; e < g.edge_count(); ++e) {
      CHECK(testsupport::max_abs_diff(pedge[e], pe.edge_marginals[e]) < 1e-9);
    }
    for (int v = 0; v < g.vertex_count; ++v) {
      CHECK(testsupport::max_abs_diff(pvert[v], pe.vertex_marginals[v]) < 1e-9);
    }

    ExactResult de = dual_exact(g, dual);
    FactorGraph dfg = build_dual_fg(g, dual);
    BpReport drep = run_bp(dfg, kExactish);
    CHECK(drep.converged);
    auto dedge = bp_edge_marginals(dfg, drep);
    auto dvert = bp_vertex_marginals(dfg, drep);
    for (int e = 0; e < g.edge_count(); ++e) {
      CHECK(testsupport::max_abs_diff(dedge[e], de.edge_marginals[e]) < 1e-9);
    }
    for (int v = 0; v < g.vertex_count; ++v) {
      CHECK(testsupport::max_abs_diff(dvert[v], de.vertex_marginals[v]) < 1e-9);
    }
  }
}

TEST_CASE("bp is exact on a small potts tree") {
  CounterRng rng(5);
  Graph g = testsupport::random_tree(6, rng);
  ModelParams p;
  p.q = 3;
  for (int k = 0; k < g.edge_count(); ++k) p.couplings.push_back(rng.uniform(0.2, 1.0));
  p.fields.assign(g.vertex_count, 0.0);
  FactorSet primal = potts_factors(g, p);
  ExactResult pe = primal_exact(g, primal);
  FactorGraph fg = build_primal_fg(g, primal);
  BpReport rep = run_bp(fg, kExactish);
  auto edges = bp_edge_marginals(fg, rep);
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(testsupport::max_abs_diff(edges[e], pe.edge_marginals[e]) < 1e-9);
  }
  // ferromagnetic potts dual is nonnegative, and its dual FG is also a tree
  FactorSet dual = dual_factors(g, primal);
  ExactResult de = dual_exact(g, dual);
  FactorGraph dfg = build_dual_fg(g, dual);
  BpReport drep = run_bp(dfg, kExactish);
  auto dedges = bp_edge_marginals(dfg, drep);
  for (int e = 0; e < g.edge_count(); ++e) {
    CHECK(testsupport::max_abs_diff(dedges[e], de.edge_marginals[e]) < 1e-9);
  }
}

TEST_CASE("uniform model gives uniform beliefs") {
  Graph g = grid_graph(3, 3, true);
  FactorSet primal = ising_factors(g, ModelParams::homogeneous(g, 2, 0.0, 0.0));
  FactorGraph fg = build_primal_fg(g, primal);
  BpReport rep = run_bp(fg);
  for (const auto& b : bp_edge_marginals(fg, rep)) {
    CHECK(b[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("beliefs normalize after every run") {
  CounterRng rng(31);
  Graph g = grid_graph(3, 3, true);
  ModelParams p = random_ising(g, rng, false);
  FactorGraph fg = build_primal_fg(g, ising_factors(g, p));
  BpReport rep = run_bp(fg);
  for (const auto& b : rep.variable_beliefs) {
    CHECK(b[0] >= 0.0);
    CHECK(b[1] >= 0.0);
    CHECK(std::abs(b[0] + b[1] - 1.0) < 1e-12);
  }
  for (const auto& b : rep.factor_beliefs) {
    CHECK(std::abs(b[0] + b[1] - 1.0) < 1e-12);
  }
}

TEST_CASE("loopy bp tracks the oracle at moderate coupling") {
  Graph g = grid_graph(3, 3, true);
  ModelParams p = ModelParams::homogeneous(g, 2, 0.2, 0.15);
  FactorSet primal = ising_factors(g, p);
  ExactResult pe = primal_exact(g, primal);

  FactorGraph pfg = build_primal_fg(g, primal);
  BpReport prep = run_bp(pfg);
  CHECK(prep.converged);
  auto pedge = bp_edge_marginals(pfg, prep);
  double primal_err = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    primal_err = std::max(primal_err,
                          std::abs(pedge[e][0] - pe.edge_marginals[e][0]));
  }
  CHECK(primal_err < 0.05);  // loopy: approximate, not exact

  // dual beliefs mapped back to the primal domain
  FactorSet dual = dual_factors(g, primal);
  FactorGraph dfg = build_dual_fg(g, dual);
  BpReport drep = run_bp(dfg);
  CHECK(drep.converged);
  auto dedge = bp_edge_marginals(dfg, drep);
  double mapped_err = 0.0;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto mapped = map_edge_dual_to_primal(dedge[e], primal.edge[e], dual.edge[e]);
    CHECK(std::abs(mapped[0] + mapped[1] - 1.0) < 1e-9);
    mapped_err = std::max(mapped_err,
                          std::abs(mapped[0] - pe.edge_marginals[e][0]));
  }
  CHECK(mapped_err < 0.05);
}

TEST_CASE("sum-kind messages: dft path equals direct convolution") {
  CounterRng rng(99);
  for (int q = 2; q <= 5; ++q) {
    for (int d = 2; d <= 6; ++d) {
      std::vector<double> kernel(q);
      for (double& x : kernel) x = rng.uniform(0.0, 2.0);
      std::vector<std::vector<double>> incoming(d, std::vector<double>(q));
      for (auto& m : incoming) {
        double s = 0.0;
        for (double& x : m) {
          x = rng.uniform(0.05, 1.0);
          s += x;
        }
        for (double& x : m) x /= s;
      }
      auto fast = sum_kind_messages(kernel, incoming);
      auto direct = testsupport::sum_kind_messages_direct(kernel, incoming);
      for (int i = 0; i < d; ++i) {
        CHECK(testsupport::max_abs_diff(fast[i], direct[i]) < 1e-12);
      }
    }
  }
}

TEST_CASE("damping levels agree at the fixed point") {
  CounterRng rng(47);
  Graph g = grid_graph(3, 3, true);
  ModelParams p = random_ising(g, rng, true);
  FactorGraph fg = build_primal_fg(g, ising_factors(g, p));
  BpReport a = run_bp(fg, {0.0, 1e-10, 10000, 0});
  BpReport b = run_bp(fg, {0.5, 1e-10, 10000, 0});
  REQUIRE(a.converged);
  REQUIRE(b.converged);
  for (int v = 0; v < fg.variable_count; ++v) {
    CHECK(testsupport::max_abs_diff(a.variable_beliefs[v], b.variable_beliefs[v]) <
          10 * 1e-10);
  }
}

TEST_CASE("non-convergence reports instead of throwing") {
  // field breaks the symmetric fixed point; 3 iterations cannot hit 1e-12
  Graph g = complete_graph(8);
  ModelParams p = ModelParams::homogeneous(g, 2, 1.5, 0.3);
  p.couplings[0] = -1.5;  // frustrated
  FactorGraph fg = build_primal_fg(g, ising_factors(g, p));
  BpReport rep = run_bp(fg, {0.0, 1e-12, 3, 0});
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  CHECK(rep.final_delta > 1e-12);
}

}  // TEST_SUITE
