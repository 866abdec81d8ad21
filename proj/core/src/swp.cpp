#include "dualmarg/swp.hpp"

#include <cmath>

#include "dualmarg/errors.hpp"

namespace dualmarg {

namespace {

void check_swp_params(const Graph& g, const ModelParams& p) {
  if (p.q != 2) throw ValidationError("subgraphs-world sampling is Ising-only (q = 2)");
  if (static_cast<int>(p.couplings.size()) != g.edge_count() ||
      static_cast<int>(p.fields.size()) != g.vertex_count) {
    throw ValidationError("parameter lengths do not match the graph");
  }
  for (double bj : p.couplings) {
    if (!(bj > 0.0)) {
      throw ValidationError(
          "subgraphs-world requires ferromagnetic couplings (betaJ_e > 0)");
    }
  }
  for (double bh : p.fields) {
    if (!(bh > 0.0)) {
      throw ValidationError(
          "subgraphs-world requires a strictly positive field (betaH_v > 0); "
          "the chain is irreducible only with a nonzero field");
    }
  }
}

}  // namespace

double swp_weight(const std::vector<std::uint8_t>& subset, const Graph& g,
                  const ModelParams& p) {
  check_swp_params(g, p);
  if (static_cast<int>(subset.size()) != g.edge_count()) {
    throw ValidationError("subset length does not match edge count");
  }
  std::vector<int> degree(g.vertex_count, 0);
  double w = 1.0;
  for (int k = 0; k < g.edge_count(); ++k) {
    if (subset[k]) {
      w *= std::tanh(p.couplings[k]);
      ++degree[g.edges[k].i];
      ++degree[g.edges[k].j];
    }
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    if (degree[v] % 2 == 1) w *= std::tanh(p.fields[v]);
  }
  return w;
}

SwpChain::SwpChain(const Graph& g, const ModelParams& p) : graph_(&g) {
  check_swp_params(g, p);
  log_tanh_j_.reserve(p.couplings.size());
  for (double bj : p.couplings) log_tanh_j_.push_back(std::log(std::tanh(bj)));
  log_tanh_h_.reserve(p.fields.size());
  for (double bh : p.fields) log_tanh_h_.push_back(std::log(std::tanh(bh)));
  state_.in_subset.assign(g.edge_count(), 0);
  state_.degree.assign(g.vertex_count, 0);
  state_.odd_count = 0;
  state_.log_weight = 0.0;  // W = empty, weight 1
}

bool SwpChain::step(CounterRng& rng) {
  const Graph& g = *graph_;
  const int e = static_cast<int>(rng.next_below(g.edge_count()));
  const int i = g.edges[e].i;
  const int j = g.edges[e].j;
  const bool removing = state_.in_subset[e];

  // Toggling e flips the parity of both endpoints; odd_count changes by
  // -2, 0 or +2.
  double dlog = removing ? -log_tanh_j_[e] : log_tanh_j_[e];
  int dodd = 0;
  const bool i_odd = state_.degree[i] % 2 == 1;
  const bool j_odd = state_.degree[j] % 2 == 1;
  dlog += i_odd ? -log_tanh_h_[i] : log_tanh_h_[i];
  dlog += j_odd ? -log_tanh_h_[j] : log_tanh_h_[j];
  dodd += i_odd ? -1 : 1;
  dodd += j_odd ? -1 : 1;

  ++proposed_;
  const bool accept = dlog >= 0.0 || std::log(rng.next_double_open()) <= dlog;
  if (accept) {
    state_.in_subset[e] ^= 1;
    state_.degree[i] += removing ? -1 : 1;
    state_.degree[j] += removing ? -1 : 1;
    state_.odd_count += dodd;
    state_.log_weight += dlog;
    ++accepted_;
  }
  return accept;
}

void SwpChain::sweep(CounterRng& rng) {
  for (int s = 0; s < graph_->edge_count(); ++s) step(rng);
}

double SwpChain::acceptance_rate() const {
  return proposed_ == 0 ? 0.0
                        : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

double SwpChain::recompute_log_weight() const {
  double lw = 0.0;
  for (int k = 0; k < graph_->edge_count(); ++k) {
    if (state_.in_subset[k]) lw += log_tanh_j_[k];
  }
  for (int v = 0; v < graph_->vertex_count; ++v) {
    if (state_.degree[v] % 2 == 1) lw += log_tanh_h_[v];
  }
  return lw;
}

SwpEstimate swp_estimate(const Graph& g, const ModelParams& p, std::uint64_t sweeps,
                         std::uint64_t burn_in, std::uint64_t seed, int batches) {
  if (batches < 2) throw ValidationError("batch means need at least 2 batches");
  if (sweeps < static_cast<std::uint64_t>(batches)) {
    throw ValidationError("need at least one sweep per batch");
  }
  SwpChain chain(g, p);
  CounterRng rng(seed);
  for (std::uint64_t s = 0; s < burn_in; ++s) chain.sweep(rng);

  const std::uint64_t per_batch = sweeps / batches;
  const std::uint64_t used = per_batch * batches;  // remainder dropped
  const int m = g.edge_count();
  std::vector<std::vector<double>> batch_mean(
      batches, std::vector<double>(m, 0.0));
  for (int b = 0; b < batches; ++b) {
    auto& mean = batch_mean[b];
    for (std::uint64_t s = 0; s < per_batch; ++s) {
      chain.sweep(rng);
      for (int k = 0; k < m; ++k) mean[k] += chain.state().in_subset[k];
    }
    for (int k = 0; k < m; ++k) mean[k] /= static_cast<double>(per_batch);
  }

  SwpEstimate est;
  est.p_hat.assign(m, 0.0);
  est.std_err.assign(m, 0.0);
  for (int k = 0; k < m; ++k) {
    double mu = 0.0;
    for (int b = 0; b < batches; ++b) mu += batch_mean[b][k];
    mu /= batches;
    double var = 0.0;
    for (int b = 0; b < batches; ++b) {
      const double d = batch_mean[b][k] - mu;
      var += d * d;
    }
    est.p_hat[k] = mu;
    est.std_err[k] = std::sqrt(var / (static_cast<double>(batches) * (batches - 1)));
  }
  est.sweeps = sweeps;
  est.burn_in = burn_in;
  est.steps = chain.steps();
  est.samples = used;
  est.seed = seed;
  est.acceptance_rate = chain.acceptance_rate();
  est.batches = batches;
  return est;
}

std::vector<double> swp_exact_small(const Graph& g, const ModelParams& p,
                                    std::uint64_t budget) {
  check_swp_params(g, p);
  const int m = g.edge_count();
  if (m >= 63 || (std::uint64_t{1} << m) > budget) {
    throw ValidationError("subset enumeration exceeds the budget");
  }
  std::vector<double> tj(m), th(g.vertex_count);
  for (int k = 0; k < m; ++k) tj[k] = std::tanh(p.couplings[k]);
  for (int v = 0; v < g.vertex_count; ++v) th[v] = std::tanh(p.fields[v]);

  double z = 0.0;
  std::vector<double> inc(m, 0.0);
  std::vector<int> degree(g.vertex_count);
  for (std::uint64_t w_bits = 0; w_bits < (std::uint64_t{1} << m); ++w_bits) {
    std::fill(degree.begin(), degree.end(), 0);
    double w = 1.0;
    for (int k = 0; k < m; ++k) {
      if (w_bits >> k & 1) {
        w *= tj[k];
        ++degree[g.edges[k].i];
        ++degree[g.edges[k].j];
      }
    }
    for (int v = 0; v < g.vertex_count; ++v) {
      if (degree[v] % 2 == 1) w *= th[v];
    }
    z += w;
    for (int k = 0; k < m; ++k) {
      if (w_bits >> k & 1) inc[k] += w;
    }
  }
  if (z <= 0.0) throw NumericError("degenerate subgraphs-world distribution");
  for (double& v : inc) v /= z;
  return inc;
}

}  // namespace dualmarg
