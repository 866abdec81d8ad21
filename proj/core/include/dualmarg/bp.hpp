#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dualmarg/model.hpp"

namespace dualmarg {

// Reduced factor graph for sum-product BP. Variables carry alphabet size q;
// factors are one of three kinds, each with a length-q kernel:
//   unary          f(x)      = kernel[x]
//   pairwise_diff  f(xi, xj) = kernel[(xi - xj) mod q]
//   sum_kind       f(y1..yd) = kernel[(s1*y1 + ... + sd*yd) mod q], si = +/-1
// This is belief-equivalent to the literal NFG with indicator nodes and
// avoids indicator message passing. The sum-kind signs carry the edge
// orientation of the dual graph (irrelevant mod 2).
struct FactorGraph {
  enum class FactorKind { unary, pairwise_diff, sum_kind };

  struct Factor {
    FactorKind kind;
    std::vector<int> scope;      // variable indices
    std::vector<double> kernel;  // length q
    std::vector<int> scope_sign; // sum_kind only; empty means all +1
  };

  Domain domain = Domain::primal;
  int q = 2;
  int variable_count = 0;
  std::vector<Factor> factors;
  // var_adjacency[v] -> (factor index, slot of v in that factor's scope)
  std::vector<std::vector<std::pair<int, int>>> var_adjacency;

  // Back-references onto the model graph. Primal: variables are vertices,
  // edge_ref[e] = pairwise factor of edge e, vertex_ref[v] = unary of v.
  // Dual: variables are edges (edge_ref[e] = e), vertex_ref[v] = sum-kind
  // factor of vertex v.
  std::vector<int> edge_ref;
  std::vector<int> vertex_ref;
};

// Variables = vertices; factors = {psi_e on (x_i, x_j)} + {phi_v}.
FactorGraph build_primal_fg(const Graph& g, const FactorSet& primal);

// Variables = edges; factors = {unary psi~_e} + one degree-deg(v) sum-kind
// factor per vertex with kernel phi~_v. Dual factors must be nonnegative
// (signed dual factors admit no PMF; see the dual marginal-function remark),
// otherwise ValidationError.
FactorGraph build_dual_fg(const Graph& g, const FactorSet& dual);

struct BpOptions {
  double damping = 0.5;  // in [0, 1)
  double tol = 1e-9;     // max L-inf message change
  int max_iter = 10000;
  std::uint64_t seed = 0;  // reserved for randomized schedules; flooding ignores it
};

struct BpReport {
  std::vector<std::vector<double>> variable_beliefs;
  // Per-factor belief collapsed onto the factor's length-q statistic:
  // its variable (unary), the difference y_e (pairwise), the sum (sum-kind).
  std::vector<std::vector<double>> factor_beliefs;
  bool converged = false;
  int iterations = 0;
  double final_delta = 0.0;
};

// Flooding-schedule sum-product with uniform message init, per-update
// normalization and damping on factor-to-variable messages. Non-convergence
// is reported, not thrown.
BpReport run_bp(const FactorGraph& fg, const BpOptions& opts = {});

// Estimated edge marginals: primal = pairwise-factor belief on y_e,
// dual = variable belief of y~_e. Indexed by model-graph edge.
std::vector<std::vector<double>> bp_edge_marginals(const FactorGraph& fg,
                                                   const BpReport& report);

// Primal = variable belief of x_v; dual = sum-kind factor belief (the x~_v
// distribution). Indexed by model-graph vertex.
std::vector<std::vector<double>> bp_vertex_marginals(const FactorGraph& fg,
                                                     const BpReport& report);

// All outgoing messages of one sum-kind factor, computed by circular
// convolution of the incoming messages through length-q DFTs. Exposed so
// tests can pit it against direct convolution.
std::vector<std::vector<double>> sum_kind_messages(
    std::span<const double> kernel, const std::vector<std::vector<double>>& incoming);

}  // namespace dualmarg
