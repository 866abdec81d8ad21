#include "doctest.h"

#include "dualmarg/errors.hpp"
#include "dualmarg/graph.hpp"

using namespace dualmarg;

TEST_SUITE("graph") {

TEST_CASE("periodic grid has 2N edges") {
  Graph g = grid_graph(3, 3, true);
  CHECK(g.vertex_count == 9);
  CHECK(g.edge_count() == 18);
  for (int v = 0; v < 9; ++v) CHECK(g.degree(v) == 4);

  Graph g44 = grid_graph(4, 4, true);
  CHECK(g44.vertex_count == 16);
  CHECK(g44.edge_count() == 32);
}

TEST_CASE("2-wide periodic grid collapses to duplicate edges") {
  CHECK_THROWS_AS(grid_graph(2, 2, true), ValidationError);
  CHECK_THROWS_WITH_AS(grid_graph(2, 3, true), doctest::Contains("duplicate"),
                       ValidationError);
}

TEST_CASE("open grid") {
  Graph g = grid_graph(3, 3, false);
  CHECK(g.edge_count() == 12);
  Graph path = grid_graph(1, 5, false);
  CHECK(path.edge_count() == 4);
  CHECK(is_tree(path));
}

TEST_CASE("complete graph") {
  Graph g = complete_graph(10);
  CHECK(g.vertex_count == 10);
  CHECK(g.edge_count() == 45);
  // K2 is the 2-vertex tree
  Graph k2 = complete_graph(2);
  CHECK(k2.edge_count() == 1);
  CHECK(is_tree(k2));
}

TEST_CASE("edge list validation") {
  CHECK_THROWS_WITH_AS(graph_from_edges(3, {{0, 0}, {1, 2}}),
                       doctest::Contains("self-loop"), ValidationError);
  CHECK_THROWS_WITH_AS(graph_from_edges(3, {{0, 1}, {1, 0}, {1, 2}}),
                       doctest::Contains("duplicate edge (1,0)"), ValidationError);
  CHECK_THROWS_WITH_AS(graph_from_edges(4, {{0, 1}, {2, 3}}),
                       doctest::Contains("disconnected"), ValidationError);
  CHECK_THROWS_AS(graph_from_edges(2, {{0, 5}}), ValidationError);
}

TEST_CASE("incidence is consistent") {
  Graph g = grid_graph(3, 4, true);
  int total = 0;
  for (int v = 0; v < g.vertex_count; ++v) total += g.degree(v);
  CHECK(total == 2 * g.edge_count());
  for (int v = 0; v < g.vertex_count; ++v) {
    for (int k : g.incidence[v]) {
      CHECK((g.edges[k].i == v || g.edges[k].j == v));
    }
  }
}

TEST_CASE("build_graph dispatches on the spec") {
  CHECK(build_graph(GridSpec{3, 3, true}).edge_count() == 18);
  CHECK(build_graph(CompleteSpec{4}).edge_count() == 6);
  CHECK(build_graph(EdgeListSpec{3, {{0, 1}, {1, 2}, {0, 2}}}).edge_count() == 3);
}

}  // TEST_SUITE
