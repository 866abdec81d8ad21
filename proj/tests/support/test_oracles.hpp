#pragma once

// Test-side oracles, kept independent of the library paths they check.

#include <cmath>
#include <cstdint>
#include <vector>

#include "dualmarg/graph.hpp"
#include "dualmarg/model.hpp"
#include "dualmarg/rng.hpp"

namespace testsupport {

// Partition function through the Gibbs route: sum_x exp(-betaH(x)). For the
// Ising/Potts factorizations this equals Z_p exactly (constant 1), giving an
// algebraically independent cross-check of the factor-product enumeration.
inline double gibbs_partition(const dualmarg::Model& m) {
  const int q = m.params.q;
  const int n = m.graph.vertex_count;
  std::vector<int> x(n, 0);
  double z = 0.0;
  std::uint64_t total = 1;
  for (int i = 0; i < n; ++i) total *= q;
  for (std::uint64_t c = 0; c < total; ++c) {
    z += std::exp(-dualmarg::hamiltonian(x, m));
    for (int s = 0; s < n; ++s) {
      if (++x[s] == q) {
        x[s] = 0;
      } else {
        break;
      }
    }
  }
  return z;
}

// Direct circular-convolution reference for sum-kind factor messages:
// m_i(a) = sum over the other variables of kernel((a + sum) mod q) * prod mu.
inline std::vector<std::vector<double>> sum_kind_messages_direct(
    const std::vector<double>& kernel,
    const std::vector<std::vector<double>>& incoming) {
  const int q = static_cast<int>(kernel.size());
  const int d = static_cast<int>(incoming.size());
  std::vector<std::vector<double>> out(d, std::vector<double>(q, 0.0));
  std::vector<int> idx(d, 0);
  std::uint64_t total = 1;
  for (int j = 0; j < d; ++j) total *= q;
  for (std::uint64_t c = 0; c < total; ++c) {
    int sum = 0;
    for (int j = 0; j < d; ++j) sum = (sum + idx[j]) % q;
    for (int i = 0; i < d; ++i) {
      double others = 1.0;
      for (int j = 0; j < d; ++j) {
        if (j != i) others *= incoming[j][idx[j]];
      }
      out[i][idx[i]] += kernel[sum] * others;
    }
    for (int s = 0; s < d; ++s) {
      if (++idx[s] == q) {
        idx[s] = 0;
      } else {
        break;
      }
    }
  }
  return out;
}

// Random labeled tree on n vertices from a Pruefer sequence.
inline dualmarg::Graph random_tree(int n, dualmarg::CounterRng& rng) {
  using dualmarg::Edge;
  if (n == 2) return dualmarg::graph_from_edges(2, {{0, 1}});
  std::vector<int> pruefer(n - 2);
  for (int& p : pruefer) p = static_cast<int>(rng.next_below(n));
  std::vector<int> degree(n, 1);
  for (int p : pruefer) ++degree[p];
  std::vector<Edge> edges;
  for (int p : pruefer) {
    for (int v = 0; v < n; ++v) {
      if (degree[v] == 1) {
        edges.push_back({v, p});
        --degree[v];
        --degree[p];
        break;
      }
    }
  }
  int u = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) {
      if (u < 0) {
        u = v;
      } else {
        edges.push_back({u, v});
      }
    }
  }
  return dualmarg::graph_from_edges(n, std::move(edges));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace testsupport
