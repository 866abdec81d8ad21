#include "dualmarg/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include "dualmarg/errors.hpp"

namespace dualmarg {

namespace {

std::string edge_str(const Edge& e) {
  return "(" + std::to_string(e.i) + "," + std::to_string(e.j) + ")";
}

void build_incidence(Graph& g) {
  g.incidence.assign(g.vertex_count, {});
  for (int k = 0; k < g.edge_count(); ++k) {
    g.incidence[g.edges[k].i].push_back(k);
    g.incidence[g.edges[k].j].push_back(k);
  }
}

void validate_edges(const Graph& g) {
  if (g.vertex_count < 2) {
    throw ValidationError("graph needs at least 2 vertices");
  }
  if (g.edges.empty()) {
    throw ValidationError("graph has no edges");
  }
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : g.edges) {
    if (e.i < 0 || e.i >= g.vertex_count || e.j < 0 || e.j >= g.vertex_count) {
      throw ValidationError("edge " + edge_str(e) + " references a vertex out of range");
    }
    if (e.i == e.j) {
      throw ValidationError("self-loop at edge " + edge_str(e));
    }
    auto key = std::minmax(e.i, e.j);
    if (!seen.insert(key).second) {
      throw ValidationError("duplicate edge " + edge_str(e));
    }
  }
}

void validate_connectivity(const Graph& g) {
  // BFS from vertex 0
  std::vector<char> visited(g.vertex_count, 0);
  std::queue<int> frontier;
  frontier.push(0);
  visited[0] = 1;
  while (!frontier.empty()) {
    int v = frontier.front();
    frontier.pop();
    for (int k : g.incidence[v]) {
      int w = g.edges[k].i == v ? g.edges[k].j : g.edges[k].i;
      if (!visited[w]) {
        visited[w] = 1;
        frontier.push(w);
      }
    }
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    if (!visited[v]) {
      throw ValidationError("graph is disconnected: vertex " + std::to_string(v) +
                            " is unreachable from vertex 0");
    }
  }
}

}  // namespace

Graph graph_from_edges(int vertex_count, std::vector<Edge> edges) {
  Graph g;
  g.vertex_count = vertex_count;
  g.edges = std::move(edges);
  validate_edges(g);
  build_incidence(g);
  validate_connectivity(g);
  return g;
}

Graph grid_graph(int rows, int cols, bool periodic) {
  if (rows < 1 || cols < 1 || rows * cols < 2) {
    throw ValidationError("grid needs at least 2 vertices");
  }
  auto id = [cols](int r, int c) { return r * cols + c; };
  std::vector<Edge> edges;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        edges.push_back({id(r, c), id(r, c + 1)});
      } else if (periodic && cols > 1) {
        edges.push_back({id(r, c), id(r, 0)});
      }
      if (r + 1 < rows) {
        edges.push_back({id(r, c), id(r + 1, c)});
      } else if (periodic && rows > 1) {
        edges.push_back({id(r, c), id(0, c)});
      }
    }
  }
  // validation rejects the duplicate wrap edges of 2-wide periodic grids
  return graph_from_edges(rows * cols, std::move(edges));
}

Graph complete_graph(int n) {
  if (n < 2) throw ValidationError("complete graph needs n >= 2");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) edges.push_back({i, j});
  }
  return graph_from_edges(n, std::move(edges));
}

Graph build_graph(const GraphSpec& spec) {
  return std::visit(
      [](const auto& s) -> Graph {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GridSpec>) {
          return grid_graph(s.rows, s.cols, s.periodic);
        } else if constexpr (std::is_same_v<T, CompleteSpec>) {
          return complete_graph(s.n);
        } else {
          return graph_from_edges(s.vertex_count, s.edges);
        }
      },
      spec);
}

bool is_tree(const Graph& g) { return g.edge_count() == g.vertex_count - 1; }

std::string describe(const GraphSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GridSpec>) {
          return "grid " + std::to_string(s.rows) + "x" + std::to_string(s.cols) +
                 (s.periodic ? " periodic" : " open");
        } else if constexpr (std::is_same_v<T, CompleteSpec>) {
          return "complete " + std::to_string(s.n);
        } else {
          return "edge list, " + std::to_string(s.vertex_count) + " vertices, " +
                 std::to_string(s.edges.size()) + " edges";
        }
      },
      spec);
}

}  // namespace dualmarg
