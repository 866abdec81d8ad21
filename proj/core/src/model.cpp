#include "dualmarg/model.hpp"

#include <cmath>
#include <numbers>

#include "dualmarg/errors.hpp"

namespace dualmarg {

namespace {

constexpr double kDftTruncationTol = 1e-12;

void check_params(const Graph& g, const ModelParams& p) {
  if (p.q < 2) throw ValidationError("alphabet order q must be >= 2");
  if (static_cast<int>(p.couplings.size()) != g.edge_count()) {
    throw ValidationError("couplings length does not match edge count");
  }
  if (static_cast<int>(p.fields.size()) != g.vertex_count) {
    throw ValidationError("fields length does not match vertex count");
  }
  for (double v : p.couplings) {
    if (!std::isfinite(v)) throw ValidationError("non-finite coupling");
  }
  for (double v : p.fields) {
    if (!std::isfinite(v)) throw ValidationError("non-finite field");
  }
}

}  // namespace

ModelParams ModelParams::homogeneous(const Graph& g, int q, double beta_j,
                                     double beta_h) {
  ModelParams p;
  p.q = q;
  p.couplings.assign(g.edge_count(), beta_j);
  p.fields.assign(g.vertex_count, beta_h);
  return p;
}

FactorSet ising_factors(const Graph& g, const ModelParams& p) {
  check_params(g, p);
  if (p.q != 2) throw ValidationError("ising mode requires q = 2");
  FactorSet fs;
  fs.domain = Domain::primal;
  fs.q = 2;
  fs.edge.reserve(p.couplings.size());
  for (double bj : p.couplings) {
    fs.edge.push_back({{std::exp(bj), std::exp(-bj)}, Domain::primal});
  }
  fs.vertex.reserve(p.fields.size());
  for (double bh : p.fields) {
    fs.vertex.push_back({{std::exp(bh), std::exp(-bh)}, Domain::primal});
  }
  return fs;
}

FactorSet potts_factors(const Graph& g, const ModelParams& p) {
  check_params(g, p);
  for (double bh : p.fields) {
    if (bh != 0.0) {
      throw ValidationError("potts mode supports zero external field only");
    }
  }
  FactorSet fs;
  fs.domain = Domain::primal;
  fs.q = p.q;
  fs.edge.reserve(p.couplings.size());
  for (double bj : p.couplings) {
    std::vector<double> t(p.q, 1.0);
    t[0] = std::exp(bj);
    fs.edge.push_back({std::move(t), Domain::primal});
  }
  fs.vertex.assign(g.vertex_count,
                   {std::vector<double>(p.q, 1.0), Domain::primal});
  return fs;
}

FactorSet make_factors(const Model& m) {
  return m.kind == ModelKind::ising ? ising_factors(m.graph, m.params)
                                    : potts_factors(m.graph, m.params);
}

std::vector<std::complex<double>> dft_complex(std::span<const double> values) {
  const int q = static_cast<int>(values.size());
  // Roots stored conjugate-paired: root[q-m] = conj(root[m]). Symmetric
  // tables then transform to exactly real outputs, the pair contributions
  // cancelling bit for bit.
  std::vector<std::complex<double>> root(q);
  for (int m = 0; m <= q / 2; ++m) {
    root[m] = std::polar(1.0, -2.0 * std::numbers::pi * m / q);
    if (m != 0) root[q - m] = std::conj(root[m]);
  }
  std::vector<std::complex<double>> out(q);
  for (int k = 0; k < q; ++k) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < q; ++l) {
      acc += values[l] * root[(static_cast<long long>(k) * l) % q];
    }
    out[k] = acc;
  }
  return out;
}

FactorTable dft(const FactorTable& t) {
  const int q = t.q();
  if (q < 1) throw ValidationError("empty factor table");
  const Domain out_domain = t.domain == Domain::primal ? Domain::dual : Domain::primal;
  if (q == 2) {
    return {{t.values[0] + t.values[1], t.values[0] - t.values[1]}, out_domain};
  }
  auto c = dft_complex(t.values);
  std::vector<double> re(q);
  for (int k = 0; k < q; ++k) {
    if (std::abs(c[k].imag()) > kDftTruncationTol) {
      throw NumericError("dft output is not real within 1e-12 (non-symmetric table?)");
    }
    re[k] = c[k].real();
  }
  return {std::move(re), out_domain};
}

FactorSet dual_factors(const Graph& g, const FactorSet& primal) {
  if (primal.domain != Domain::primal) {
    throw ValidationError("dual_factors expects a primal factor set");
  }
  (void)g;
  FactorSet fs;
  fs.domain = Domain::dual;
  fs.q = primal.q;
  fs.edge.reserve(primal.edge.size());
  for (const auto& t : primal.edge) fs.edge.push_back(dft(t));
  fs.vertex.reserve(primal.vertex.size());
  for (const auto& t : primal.vertex) fs.vertex.push_back(dft(t));
  return fs;
}

std::vector<int> edge_differences(std::span<const int> x, const Graph& g, int q) {
  std::vector<int> y(g.edge_count());
  for (int k = 0; k < g.edge_count(); ++k) {
    y[k] = ((x[g.edges[k].i] - x[g.edges[k].j]) % q + q) % q;
  }
  return y;
}

std::vector<int> dual_vertex_sums(std::span<const int> y_tilde, const Graph& g, int q) {
  // y~_e couples to its endpoints with opposite signs, following the
  // orientation of y_e = x_i - x_j (mod 2 the signs vanish). The unsigned sum
  // breaks Z_d = alpha(G) Z_p for q >= 3.
  std::vector<int> xt(g.vertex_count, 0);
  for (int k = 0; k < g.edge_count(); ++k) {
    xt[g.edges[k].i] = (xt[g.edges[k].i] + y_tilde[k]) % q;
    xt[g.edges[k].j] = ((xt[g.edges[k].j] - y_tilde[k]) % q + q) % q;
  }
  return xt;
}

double hamiltonian(std::span<const int> x, const Model& m) {
  const Graph& g = m.graph;
  const ModelParams& p = m.params;
  check_params(g, p);
  if (static_cast<int>(x.size()) != g.vertex_count) {
    throw ValidationError("configuration length does not match vertex count");
  }
  double h = 0.0;
  if (m.kind == ModelKind::ising) {
    for (int k = 0; k < g.edge_count(); ++k) {
      const int y = ((x[g.edges[k].i] - x[g.edges[k].j]) % 2 + 2) % 2;
      h -= p.couplings[k] * (y == 0 ? 1.0 : -1.0);
    }
    for (int v = 0; v < g.vertex_count; ++v) {
      h -= p.fields[v] * (x[v] == 0 ? 1.0 : -1.0);
    }
  } else {
    for (int k = 0; k < g.edge_count(); ++k) {
      const int y = ((x[g.edges[k].i] - x[g.edges[k].j]) % p.q + p.q) % p.q;
      if (y == 0) h -= p.couplings[k];
    }
  }
  return h;
}

}  // namespace dualmarg
