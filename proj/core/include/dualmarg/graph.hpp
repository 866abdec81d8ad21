#pragma once

#include <string>
#include <variant>
#include <vector>

namespace dualmarg {

// An undirected edge between two distinct vertices. The stored order (i, j)
// fixes the sign of the difference variable y_e = x_i - x_j mod q.
struct Edge {
  int i = 0;
  int j = 0;
};

// Simple connected graph: no self-loops, no duplicate edges.
struct Graph {
  int vertex_count = 0;
  std::vector<Edge> edges;
  // incidence[v] lists the indices of edges touching v.
  std::vector<std::vector<int>> incidence;

  int edge_count() const { return static_cast<int>(edges.size()); }
  int degree(int v) const { return static_cast<int>(incidence[v].size()); }
};

struct GridSpec {
  int rows = 0;
  int cols = 0;
  bool periodic = false;
};

struct CompleteSpec {
  int n = 0;
};

struct EdgeListSpec {
  int vertex_count = 0;
  std::vector<Edge> edges;
};

using GraphSpec = std::variant<GridSpec, CompleteSpec, EdgeListSpec>;

// Validates and builds a graph. Throws ValidationError naming the offending
// edge for self-loops and duplicates, and the unreachable vertex when the
// edge list is disconnected. A periodic grid needs >= 3 vertices per wrapped
// side, otherwise the wrap edge duplicates the direct one.
Graph build_graph(const GraphSpec& spec);

Graph grid_graph(int rows, int cols, bool periodic);
Graph complete_graph(int n);
Graph graph_from_edges(int vertex_count, std::vector<Edge> edges);

// True if the graph is a tree (connected with |E| = N - 1).
bool is_tree(const Graph& g);

std::string describe(const GraphSpec& spec);

}  // namespace dualmarg
