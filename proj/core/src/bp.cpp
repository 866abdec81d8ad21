#include "dualmarg/bp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "dualmarg/errors.hpp"

namespace dualmarg {

namespace {

void normalize(std::vector<double>& v) {
  double s = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;  // clamp DFT round-off; messages stay nonnegative
    s += x;
  }
  if (s <= 0.0) {
    // All-zero message (contradictory hard constraints); fall back to uniform
    // rather than poisoning the run with NaNs.
    std::fill(v.begin(), v.end(), 1.0 / static_cast<double>(v.size()));
    return;
  }
  for (double& x : v) x /= s;
}

std::vector<std::complex<double>> small_dft(std::span<const double> v, bool inverse) {
  const int q = static_cast<int>(v.size());
  std::vector<std::complex<double>> root(q);
  for (int m = 0; m <= q / 2; ++m) {
    root[m] = std::polar(1.0, (inverse ? 2.0 : -2.0) * std::numbers::pi * m / q);
    if (m != 0) root[q - m] = std::conj(root[m]);
  }
  std::vector<std::complex<double>> out(q);
  for (int k = 0; k < q; ++k) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < q; ++l) acc += v[l] * root[(static_cast<long long>(k) * l) % q];
    out[k] = acc;
  }
  return out;
}

// index negation: m'(a) = m((q - a) mod q)
std::vector<double> reversed(const std::vector<double>& m) {
  const int q = static_cast<int>(m.size());
  std::vector<double> out(q);
  for (int a = 0; a < q; ++a) out[a] = m[(q - a) % q];
  return out;
}

std::vector<std::complex<double>> small_dft_c(const std::vector<std::complex<double>>& v,
                                              bool inverse) {
  const int q = static_cast<int>(v.size());
  std::vector<std::complex<double>> root(q);
  for (int m = 0; m <= q / 2; ++m) {
    root[m] = std::polar(1.0, (inverse ? 2.0 : -2.0) * std::numbers::pi * m / q);
    if (m != 0) root[q - m] = std::conj(root[m]);
  }
  std::vector<std::complex<double>> out(q);
  for (int k = 0; k < q; ++k) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < q; ++l) acc += v[l] * root[(static_cast<long long>(k) * l) % q];
    out[k] = acc;
  }
  return out;
}

}  // namespace

FactorGraph build_primal_fg(const Graph& g, const FactorSet& primal) {
  if (primal.domain != Domain::primal) {
    throw ValidationError("build_primal_fg expects primal factors");
  }
  FactorGraph fg;
  fg.domain = Domain::primal;
  fg.q = primal.q;
  fg.variable_count = g.vertex_count;
  fg.edge_ref.resize(g.edge_count());
  fg.vertex_ref.resize(g.vertex_count);
  for (int k = 0; k < g.edge_count(); ++k) {
    fg.edge_ref[k] = static_cast<int>(fg.factors.size());
    fg.factors.push_back({FactorGraph::FactorKind::pairwise_diff,
                          {g.edges[k].i, g.edges[k].j},
                          primal.edge[k].values,
                          {}});
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    fg.vertex_ref[v] = static_cast<int>(fg.factors.size());
    fg.factors.push_back(
        {FactorGraph::FactorKind::unary, {v}, primal.vertex[v].values, {}});
  }
  fg.var_adjacency.assign(fg.variable_count, {});
  for (int f = 0; f < static_cast<int>(fg.factors.size()); ++f) {
    for (int s = 0; s < static_cast<int>(fg.factors[f].scope.size()); ++s) {
      fg.var_adjacency[fg.factors[f].scope[s]].push_back({f, s});
    }
  }
  return fg;
}

FactorGraph build_dual_fg(const Graph& g, const FactorSet& dual) {
  if (dual.domain != Domain::dual) {
    throw ValidationError("build_dual_fg expects dual factors");
  }
  for (const auto& t : dual.edge) {
    for (double v : t.values) {
      if (v < 0.0) {
        throw ValidationError(
            "dual factors take negative values: no PMF exists in the dual domain "
            "(only signed marginal functions), BP is not applicable");
      }
    }
  }
  for (const auto& t : dual.vertex) {
    for (double v : t.values) {
      if (v < 0.0) {
        throw ValidationError(
            "dual factors take negative values: no PMF exists in the dual domain "
            "(only signed marginal functions), BP is not applicable");
      }
    }
  }
  FactorGraph fg;
  fg.domain = Domain::dual;
  fg.q = dual.q;
  fg.variable_count = g.edge_count();
  fg.edge_ref.resize(g.edge_count());
  fg.vertex_ref.resize(g.vertex_count);
  for (int k = 0; k < g.edge_count(); ++k) {
    fg.edge_ref[k] = k;  // variable index, not a factor
    fg.factors.push_back(
        {FactorGraph::FactorKind::unary, {k}, dual.edge[k].values, {}});
  }
  for (int v = 0; v < g.vertex_count; ++v) {
    fg.vertex_ref[v] = static_cast<int>(fg.factors.size());
    std::vector<int> signs;
    signs.reserve(g.incidence[v].size());
    for (int k : g.incidence[v]) signs.push_back(g.edges[k].i == v ? 1 : -1);
    fg.factors.push_back({FactorGraph::FactorKind::sum_kind, g.incidence[v],
                          dual.vertex[v].values, std::move(signs)});
  }
  fg.var_adjacency.assign(fg.variable_count, {});
  for (int f = 0; f < static_cast<int>(fg.factors.size()); ++f) {
    for (int s = 0; s < static_cast<int>(fg.factors[f].scope.size()); ++s) {
      fg.var_adjacency[fg.factors[f].scope[s]].push_back({f, s});
    }
  }
  return fg;
}

std::vector<std::vector<double>> sum_kind_messages(
    std::span<const double> kernel, const std::vector<std::vector<double>>& incoming) {
  const int q = static_cast<int>(kernel.size());
  const int d = static_cast<int>(incoming.size());
  // m_i(a) = sum_s kernel(a + s) C_i(s) with C_i the circular convolution of
  // the other messages; in transform space F[m_i](k) = F[kernel](k) *
  // conj(prod_{j != i} F[mu_j](k)).
  const auto kernel_hat = small_dft(kernel, false);
  std::vector<std::vector<std::complex<double>>> mu_hat(d);
  for (int j = 0; j < d; ++j) mu_hat[j] = small_dft(incoming[j], false);

  std::vector<std::vector<std::complex<double>>> prefix(d + 1),
      suffix(d + 1);
  prefix[0].assign(q, 1.0);
  for (int j = 0; j < d; ++j) {
    prefix[j + 1] = prefix[j];
    for (int k = 0; k < q; ++k) prefix[j + 1][k] *= mu_hat[j][k];
  }
  suffix[d].assign(q, 1.0);
  for (int j = d - 1; j >= 0; --j) {
    suffix[j] = suffix[j + 1];
    for (int k = 0; k < q; ++k) suffix[j][k] *= mu_hat[j][k];
  }

  std::vector<std::vector<double>> out(d);
  std::vector<std::complex<double>> hat(q);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < q; ++k) {
      hat[k] = kernel_hat[k] * std::conj(prefix[i][k] * suffix[i + 1][k]);
    }
    auto m = small_dft_c(hat, true);
    out[i].resize(q);
    for (int a = 0; a < q; ++a) out[i][a] = m[a].real() / q;
  }
  return out;
}

BpReport run_bp(const FactorGraph& fg, const BpOptions& opts) {
  if (opts.damping < 0.0 || opts.damping >= 1.0) {
    throw ValidationError("bp damping must lie in [0, 1)");
  }
  const int q = fg.q;
  const int nf = static_cast<int>(fg.factors.size());
  const double uniform = 1.0 / q;

  // messages indexed [factor][slot]
  std::vector<std::vector<std::vector<double>>> f2v(nf), v2f(nf);
  for (int f = 0; f < nf; ++f) {
    const int d = static_cast<int>(fg.factors[f].scope.size());
    f2v[f].assign(d, std::vector<double>(q, uniform));
    v2f[f].assign(d, std::vector<double>(q, uniform));
  }

  std::vector<std::vector<double>> incoming;
  BpReport report;
  report.iterations = 0;
  report.final_delta = 0.0;

  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    // variable -> factor: product of the other factors' messages, by
    // prefix/suffix products over each variable's adjacency (messages may
    // contain exact zeros, so no division).
    for (int v = 0; v < fg.variable_count; ++v) {
      const auto& adj = fg.var_adjacency[v];
      const int d = static_cast<int>(adj.size());
      std::vector<std::vector<double>> pre(d + 1, std::vector<double>(q, 1.0));
      std::vector<std::vector<double>> suf(d + 1, std::vector<double>(q, 1.0));
      for (int j = 0; j < d; ++j) {
        const auto& m = f2v[adj[j].first][adj[j].second];
        for (int a = 0; a < q; ++a) pre[j + 1][a] = pre[j][a] * m[a];
      }
      for (int j = d - 1; j >= 0; --j) {
        const auto& m = f2v[adj[j].first][adj[j].second];
        for (int a = 0; a < q; ++a) suf[j][a] = suf[j + 1][a] * m[a];
      }
      for (int j = 0; j < d; ++j) {
        auto& out = v2f[adj[j].first][adj[j].second];
        for (int a = 0; a < q; ++a) out[a] = pre[j][a] * suf[j + 1][a];
        normalize(out);
      }
    }

    // factor -> variable
    double delta = 0.0;
    for (int f = 0; f < nf; ++f) {
      const auto& factor = fg.factors[f];
      const int d = static_cast<int>(factor.scope.size());
      std::vector<std::vector<double>> fresh(d, std::vector<double>(q));
      switch (factor.kind) {
        case FactorGraph::FactorKind::unary:
          fresh[0] = factor.kernel;
          break;
        case FactorGraph::FactorKind::pairwise_diff: {
          // to x_i: m(xi) = sum_xj kernel(xi - xj) mu_j(xj); to x_j mirrored.
          const auto& mu_i = v2f[f][0];
          const auto& mu_j = v2f[f][1];
          for (int a = 0; a < q; ++a) {
            double acc_i = 0.0, acc_j = 0.0;
            for (int b = 0; b < q; ++b) {
              acc_i += factor.kernel[(a - b + q) % q] * mu_j[b];
              acc_j += factor.kernel[(b - a + q) % q] * mu_i[b];
            }
            fresh[0][a] = acc_i;
            fresh[1][a] = acc_j;
          }
          break;
        }
        case FactorGraph::FactorKind::sum_kind: {
          // substitute z_j = sign_j * y_j, so the kernel sees a plain sum
          incoming = v2f[f];
          for (int s = 0; s < d; ++s) {
            if (!factor.scope_sign.empty() && factor.scope_sign[s] < 0) {
              incoming[s] = reversed(incoming[s]);
            }
          }
          fresh = sum_kind_messages(factor.kernel, incoming);
          for (int s = 0; s < d; ++s) {
            if (!factor.scope_sign.empty() && factor.scope_sign[s] < 0) {
              fresh[s] = reversed(fresh[s]);
            }
          }
          break;
        }
      }
      for (int s = 0; s < d; ++s) {
        normalize(fresh[s]);
        auto& old = f2v[f][s];
        for (int a = 0; a < q; ++a) {
          const double next = (1.0 - opts.damping) * fresh[s][a] + opts.damping * old[a];
          delta = std::max(delta, std::abs(next - old[a]));
          old[a] = next;
        }
      }
    }

    report.iterations = iter;
    report.final_delta = delta;
    if (delta <= opts.tol) {
      report.converged = true;
      break;
    }
  }

  // beliefs
  report.variable_beliefs.assign(fg.variable_count, std::vector<double>(q, 1.0));
  for (int v = 0; v < fg.variable_count; ++v) {
    for (const auto& [f, s] : fg.var_adjacency[v]) {
      for (int a = 0; a < q; ++a) report.variable_beliefs[v][a] *= f2v[f][s][a];
    }
    normalize(report.variable_beliefs[v]);
  }
  report.factor_beliefs.assign(nf, std::vector<double>(q, 0.0));
  for (int f = 0; f < nf; ++f) {
    const auto& factor = fg.factors[f];
    auto& belief = report.factor_beliefs[f];
    switch (factor.kind) {
      case FactorGraph::FactorKind::unary:
        for (int a = 0; a < q; ++a) belief[a] = factor.kernel[a] * v2f[f][0][a];
        break;
      case FactorGraph::FactorKind::pairwise_diff: {
        // belief on the difference y = xi - xj
        const auto& mu_i = v2f[f][0];
        const auto& mu_j = v2f[f][1];
        for (int a = 0; a < q; ++a) {
          double acc = 0.0;
          for (int b = 0; b < q; ++b) acc += mu_i[(a + b) % q] * mu_j[b];
          belief[a] = factor.kernel[a] * acc;
        }
        break;
      }
      case FactorGraph::FactorKind::sum_kind: {
        // belief on the signed-sum value: kernel(s) * (conv of all incoming)(s)
        const int d = static_cast<int>(factor.scope.size());
        std::vector<std::complex<double>> prod(q, 1.0);
        for (int j = 0; j < d; ++j) {
          const bool neg = !factor.scope_sign.empty() && factor.scope_sign[j] < 0;
          auto hat = small_dft(neg ? reversed(v2f[f][j]) : v2f[f][j], false);
          for (int k = 0; k < q; ++k) prod[k] *= hat[k];
        }
        auto conv = small_dft_c(prod, true);
        for (int a = 0; a < q; ++a) {
          belief[a] = factor.kernel[a] * std::max(0.0, conv[a].real() / q);
        }
        break;
      }
    }
    normalize(belief);
  }
  return report;
}

std::vector<std::vector<double>> bp_edge_marginals(const FactorGraph& fg,
                                                   const BpReport& report) {
  std::vector<std::vector<double>> out(fg.edge_ref.size());
  for (std::size_t e = 0; e < fg.edge_ref.size(); ++e) {
    out[e] = fg.domain == Domain::primal
                 ? report.factor_beliefs[fg.edge_ref[e]]
                 : report.variable_beliefs[fg.edge_ref[e]];
  }
  return out;
}

std::vector<std::vector<double>> bp_vertex_marginals(const FactorGraph& fg,
                                                     const BpReport& report) {
  std::vector<std::vector<double>> out(fg.vertex_ref.size());
  for (std::size_t v = 0; v < fg.vertex_ref.size(); ++v) {
    out[v] = fg.domain == Domain::primal
                 ? report.variable_beliefs[v]
                 : report.factor_beliefs[fg.vertex_ref[v]];
  }
  return out;
}

}  // namespace dualmarg
