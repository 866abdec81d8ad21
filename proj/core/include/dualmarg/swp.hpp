#pragma once

#include <cstdint>
#include <vector>

#include "dualmarg/graph.hpp"
#include "dualmarg/model.hpp"
#include "dualmarg/rng.hpp"

namespace dualmarg {

// Edge subset W with cached per-vertex degrees, odd-degree vertex count and
// log weight: log w(W) = sum_{v in odd(W)} log tanh(betaH_v)
//                      + sum_{e in W} log tanh(betaJ_e).
struct SwpState {
  std::vector<std::uint8_t> in_subset;  // per edge
  std::vector<int> degree;              // per vertex, within W
  int odd_count = 0;
  double log_weight = 0.0;
};

// w(W) = prod_{v in odd(W)} tanh(betaH_v) * prod_{e in W} tanh(betaJ_e).
// Requires betaJ_e > 0 and betaH_v > 0 everywhere (the chain is irreducible
// only with a nonzero field).
double swp_weight(const std::vector<std::uint8_t>& subset, const Graph& g,
                  const ModelParams& p);

// Single-edge-toggle Metropolis chain on edge subsets, stationary for w(W).
// One step: pick an edge uniformly, toggle it, accept with min(1, w'/w).
// State updates are O(1) per step.
class SwpChain {
 public:
  SwpChain(const Graph& g, const ModelParams& p);

  // Returns true if the proposal was accepted.
  bool step(CounterRng& rng);
  // One sweep = |E| steps.
  void sweep(CounterRng& rng);

  const SwpState& state() const { return state_; }
  double acceptance_rate() const;
  std::uint64_t steps() const { return proposed_; }

  // From-scratch recomputation, for checking the incremental log weight.
  double recompute_log_weight() const;

 private:
  const Graph* graph_;
  std::vector<double> log_tanh_j_;  // per edge
  std::vector<double> log_tanh_h_;  // per vertex
  SwpState state_;
  std::uint64_t proposed_ = 0;
  std::uint64_t accepted_ = 0;
};

struct SwpEstimate {
  std::vector<double> p_hat;    // per-edge inclusion frequency ~ pi_d,e(1)
  std::vector<double> std_err;  // batch-means standard errors
  std::uint64_t sweeps = 0;
  std::uint64_t burn_in = 0;
  std::uint64_t steps = 0;    // total Metropolis proposals
  std::uint64_t samples = 0;  // post-burn-in sweep samples used
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;
  int batches = 0;
};

// Runs burn_in + sweeps sweeps from the empty subset, sampling the subset
// indicator once per post-burn-in sweep. p_hat estimates pi_d,e(1): the
// subgraphs-world configurations are exactly the dual-NFG configurations,
// with matching weights once the constant prod 2cosh factors cancel.
// Standard errors use batch means over `batches` equal batches.
SwpEstimate swp_estimate(const Graph& g, const ModelParams& p, std::uint64_t sweeps,
                         std::uint64_t burn_in, std::uint64_t seed, int batches = 50);

// Exact inclusion probabilities P(e in W) by summing w(W) over all 2^|E|
// subsets; requires 2^|E| within budget.
std::vector<double> swp_exact_small(const Graph& g, const ModelParams& p,
                                    std::uint64_t budget = std::uint64_t{1} << 24);

}  // namespace dualmarg
