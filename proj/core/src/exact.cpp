#include "dualmarg/exact.hpp"

#include <cmath>
#include <string>
#include <thread>
#include <utility>

#include "dualmarg/errors.hpp"
#include "dualmarg/rng.hpp"

namespace dualmarg {

namespace {

// Neumaier compensated accumulator; merge order fixed by the caller keeps
// results bitwise-deterministic for a fixed partition count.
struct Kahan {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x)) {
      comp += (sum - t) + x;
    } else {
      comp += (x - t) + sum;
    }
    sum = t;
  }

  void merge(const Kahan& other) {
    add(other.sum);
    comp += other.comp;
  }

  double value() const { return sum + comp; }
};

std::uint64_t checked_pow(std::uint64_t base, int exp, std::uint64_t budget,
                          const char* what) {
  std::uint64_t n = 1;
  for (int i = 0; i < exp; ++i) {
    if (n > budget / base) {
      throw ValidationError(std::string(what) +
                            " enumeration exceeds the budget of " +
                            std::to_string(budget) + " terms");
    }
    n *= base;
  }
  if (n > budget) {
    throw ValidationError(std::string(what) +
                          " enumeration exceeds the budget of " +
                          std::to_string(budget) + " terms");
  }
  return n;
}

void check_factor_set(const Graph& g, const FactorSet& fs, Domain expected) {
  if (fs.domain != expected) {
    throw ValidationError("factor set has the wrong domain tag");
  }
  if (static_cast<int>(fs.edge.size()) != g.edge_count() ||
      static_cast<int>(fs.vertex.size()) != g.vertex_count) {
    throw ValidationError("factor set size does not match the graph");
  }
  for (const auto& t : fs.edge) {
    if (t.q() != fs.q) throw ValidationError("edge factor table has wrong length");
  }
  for (const auto& t : fs.vertex) {
    if (t.q() != fs.q) throw ValidationError("vertex factor table has wrong length");
  }
  if (expected == Domain::primal) {
    for (const auto& t : fs.edge) {
      for (double v : t.values) {
        if (v < 0.0) throw ValidationError("primal factor tables must be nonnegative");
      }
    }
    for (const auto& t : fs.vertex) {
      for (double v : t.values) {
        if (v < 0.0) throw ValidationError("primal factor tables must be nonnegative");
      }
    }
  }
}

bool has_negative_entry(const FactorSet& fs) {
  for (const auto& t : fs.edge) {
    for (double v : t.values) {
      if (v < 0.0) return true;
    }
  }
  for (const auto& t : fs.vertex) {
    for (double v : t.values) {
      if (v < 0.0) return true;
    }
  }
  return false;
}

struct Accumulators {
  Kahan z;
  std::vector<Kahan> edge;    // edge_count * q bins
  std::vector<Kahan> vertex;  // vertex_count * q bins

  Accumulators(int edges, int vertices, int q)
      : edge(static_cast<std::size_t>(edges) * q),
        vertex(static_cast<std::size_t>(vertices) * q) {}

  void merge(const Accumulators& o) {
    z.merge(o.z);
    for (std::size_t i = 0; i < edge.size(); ++i) edge[i].merge(o.edge[i]);
    for (std::size_t i = 0; i < vertex.size(); ++i) vertex[i].merge(o.vertex[i]);
  }
};

// Walks configurations [begin, end) of the mixed-radix counter over `digits`
// base-q digits. Body sees the digit vector of each configuration.
template <class Body>
void enumerate_range(int q, int digits, std::uint64_t begin, std::uint64_t end,
                     Body&& body) {
  std::vector<int> d(digits, 0);
  std::uint64_t idx = begin;
  for (int s = 0; s < digits; ++s) {
    d[s] = static_cast<int>(idx % q);
    idx /= q;
  }
  for (std::uint64_t i = begin; i < end; ++i) {
    body(d);
    for (int s = 0; s < digits; ++s) {
      if (++d[s] == q) {
        d[s] = 0;
      } else {
        break;
      }
    }
  }
}

// Runs `fill(block_accumulator, begin, end)` over `partitions` contiguous
// blocks (threaded when > 1) and merges in block order.
template <class Fill>
Accumulators partitioned_run(std::uint64_t total, const EnumerationOptions& opts,
                             int edges, int vertices, int q, Fill&& fill) {
  const int parts = std::max(1, opts.partitions);
  if (parts == 1 || total < static_cast<std::uint64_t>(parts) * 2) {
    Accumulators acc(edges, vertices, q);
    fill(acc, std::uint64_t{0}, total);
    return acc;
  }
  std::vector<Accumulators> block(parts, Accumulators(edges, vertices, q));
  std::vector<std::thread> workers;
  workers.reserve(parts);
  for (int b = 0; b < parts; ++b) {
    const std::uint64_t begin = total / parts * b + std::min<std::uint64_t>(b, total % parts);
    const std::uint64_t len = total / parts + (static_cast<std::uint64_t>(b) < total % parts ? 1 : 0);
    workers.emplace_back([&, b, begin, len] { fill(block[b], begin, begin + len); });
  }
  for (auto& w : workers) w.join();
  Accumulators acc = std::move(block[0]);
  for (int b = 1; b < parts; ++b) acc.merge(block[b]);
  return acc;
}

std::vector<std::vector<double>> normalize_bins(const std::vector<Kahan>& bins,
                                                int count, int q) {
  std::vector<std::vector<double>> out(count, std::vector<double>(q));
  for (int i = 0; i < count; ++i) {
    Kahan total;
    for (int a = 0; a < q; ++a) total.add(bins[static_cast<std::size_t>(i) * q + a].value());
    const double t = total.value();
    if (t == 0.0) throw NumericError("degenerate marginal: all bins are zero");
    for (int a = 0; a < q; ++a) {
      out[i][a] = bins[static_cast<std::size_t>(i) * q + a].value() / t;
    }
  }
  return out;
}

}  // namespace

ExactResult primal_exact(const Graph& g, const FactorSet& factors,
                         const EnumerationOptions& opts) {
  check_factor_set(g, factors, Domain::primal);
  const int q = factors.q;
  const int n = g.vertex_count;
  const std::uint64_t total = checked_pow(q, n, opts.budget, "primal");

  auto fill = [&](Accumulators& acc, std::uint64_t begin, std::uint64_t end) {
    enumerate_range(q, n, begin, end, [&](const std::vector<int>& x) {
      double w = 1.0;
      for (int k = 0; k < g.edge_count(); ++k) {
        const int y = ((x[g.edges[k].i] - x[g.edges[k].j]) % q + q) % q;
        w *= factors.edge[k].values[y];
      }
      for (int v = 0; v < n; ++v) w *= factors.vertex[v].values[x[v]];
      acc.z.add(w);
      for (int k = 0; k < g.edge_count(); ++k) {
        const int y = ((x[g.edges[k].i] - x[g.edges[k].j]) % q + q) % q;
        acc.edge[static_cast<std::size_t>(k) * q + y].add(w);
      }
      for (int v = 0; v < n; ++v) {
        acc.vertex[static_cast<std::size_t>(v) * q + x[v]].add(w);
      }
    });
  };

  Accumulators acc = partitioned_run(total, opts, g.edge_count(), n, q, fill);
  ExactResult res;
  res.domain = Domain::primal;
  res.z = acc.z.value();
  if (res.z <= 0.0) throw NumericError("degenerate model: Z_p = 0");
  res.edge_marginals = normalize_bins(acc.edge, g.edge_count(), q);
  res.vertex_marginals = normalize_bins(acc.vertex, n, q);
  res.signed_marginals = false;
  return res;
}

ExactResult dual_exact(const Graph& g, const FactorSet& factors,
                       const EnumerationOptions& opts) {
  check_factor_set(g, factors, Domain::dual);
  const int q = factors.q;
  const int m = g.edge_count();
  const std::uint64_t total = checked_pow(q, m, opts.budget, "dual");

  auto fill = [&](Accumulators& acc, std::uint64_t begin, std::uint64_t end) {
    std::vector<int> xt(g.vertex_count);
    enumerate_range(q, m, begin, end, [&](const std::vector<int>& yt) {
      double w = 1.0;
      for (int k = 0; k < m; ++k) w *= factors.edge[k].values[yt[k]];
      std::fill(xt.begin(), xt.end(), 0);
      for (int k = 0; k < m; ++k) {
        // oriented: + at the tail, - at the head (see dual_vertex_sums)
        xt[g.edges[k].i] = (xt[g.edges[k].i] + yt[k]) % q;
        xt[g.edges[k].j] = ((xt[g.edges[k].j] - yt[k]) % q + q) % q;
      }
      for (int v = 0; v < g.vertex_count; ++v) w *= factors.vertex[v].values[xt[v]];
      acc.z.add(w);
      for (int k = 0; k < m; ++k) {
        acc.edge[static_cast<std::size_t>(k) * q + yt[k]].add(w);
      }
      for (int v = 0; v < g.vertex_count; ++v) {
        acc.vertex[static_cast<std::size_t>(v) * q + xt[v]].add(w);
      }
    });
  };

  Accumulators acc = partitioned_run(total, opts, m, g.vertex_count, q, fill);
  ExactResult res;
  res.domain = Domain::dual;
  res.z = acc.z.value();
  if (res.z == 0.0) throw NumericError("degenerate model: Z_d = 0");
  res.signed_marginals = has_negative_entry(factors);
  // Marginal functions normalize by Z_d itself (which the per-vector bin sums
  // equal up to rounding); entries may be negative in the signed case.
  res.edge_marginals = normalize_bins(acc.edge, m, q);
  res.vertex_marginals = normalize_bins(acc.vertex, g.vertex_count, q);
  return res;
}

namespace {

// Shared clamp-one-position enumeration behind both extrinsic vectors.
// `clamped` selects an edge (primal: y_e, dual: y~_e) or vertex
// (primal: x_v, dual: x~_v); the corresponding factor is excluded.
std::vector<double> extrinsic_impl(const Graph& g, const FactorSet& fs, bool edge_kind,
                                   int index, const EnumerationOptions& opts) {
  const int q = fs.q;
  const bool dual = fs.domain == Domain::dual;
  const int digits = dual ? g.edge_count() : g.vertex_count;
  const std::uint64_t total = checked_pow(q, digits, opts.budget, "extrinsic");

  auto fill = [&](Accumulators& acc, std::uint64_t begin, std::uint64_t end) {
    std::vector<int> xt(g.vertex_count);
    enumerate_range(q, digits, begin, end, [&](const std::vector<int>& conf) {
      double w = 1.0;
      int clamp_value = 0;
      if (!dual) {
        for (int k = 0; k < g.edge_count(); ++k) {
          const int y = ((conf[g.edges[k].i] - conf[g.edges[k].j]) % q + q) % q;
          if (edge_kind && k == index) {
            clamp_value = y;
          } else {
            w *= fs.edge[k].values[y];
          }
        }
        for (int v = 0; v < g.vertex_count; ++v) {
          if (!edge_kind && v == index) {
            clamp_value = conf[v];
          } else {
            w *= fs.vertex[v].values[conf[v]];
          }
        }
      } else {
        for (int k = 0; k < g.edge_count(); ++k) {
          if (edge_kind && k == index) {
            clamp_value = conf[k];
          } else {
            w *= fs.edge[k].values[conf[k]];
          }
        }
        std::fill(xt.begin(), xt.end(), 0);
        for (int k = 0; k < g.edge_count(); ++k) {
          xt[g.edges[k].i] = (xt[g.edges[k].i] + conf[k]) % q;
          xt[g.edges[k].j] = ((xt[g.edges[k].j] - conf[k]) % q + q) % q;
        }
        for (int v = 0; v < g.vertex_count; ++v) {
          if (!edge_kind && v == index) {
            clamp_value = xt[v];
          } else {
            w *= fs.vertex[v].values[xt[v]];
          }
        }
      }
      acc.edge[clamp_value].add(w);
    });
  };

  // Reuse the edge bin array of Accumulators as the q output bins.
  Accumulators acc = partitioned_run(total, opts, 1, 0, q, fill);
  std::vector<double> out(q);
  for (int a = 0; a < q; ++a) out[a] = acc.edge[a].value();
  return out;
}

}  // namespace

ExtrinsicVector extrinsic(const Graph& g, const FactorSet& factors, int edge,
                          const EnumerationOptions& opts) {
  check_factor_set(g, factors, factors.domain);
  if (edge < 0 || edge >= g.edge_count()) {
    throw ValidationError("extrinsic: edge index out of range");
  }
  return {extrinsic_impl(g, factors, true, edge, opts), edge, factors.domain};
}

ExtrinsicVector vertex_extrinsic(const Graph& g, const FactorSet& factors, int vertex,
                                 const EnumerationOptions& opts) {
  check_factor_set(g, factors, factors.domain);
  if (vertex < 0 || vertex >= g.vertex_count) {
    throw ValidationError("vertex_extrinsic: vertex index out of range");
  }
  return {extrinsic_impl(g, factors, false, vertex, opts), vertex, factors.domain};
}

double duality_scale(const Graph& g, const FactorSet& primal,
                     const EnumerationOptions& opts) {
  const ExactResult zp = primal_exact(g, primal, opts);
  const ExactResult zd = dual_exact(g, dual_factors(g, primal), opts);
  return zd.z / zp.z;
}

double duality_scale(const Graph& g, int q, std::uint64_t seed,
                     const EnumerationOptions& opts) {
  CounterRng rng(seed);
  FactorSet fs;
  fs.domain = Domain::primal;
  fs.q = q;
  auto random_table = [&] {
    std::vector<double> t(q);
    for (double& v : t) v = rng.uniform(0.25, 1.25);
    return FactorTable{std::move(t), Domain::primal};
  };
  for (int k = 0; k < g.edge_count(); ++k) fs.edge.push_back(random_table());
  for (int v = 0; v < g.vertex_count; ++v) fs.vertex.push_back(random_table());
  if (q > 2) {
    // Symmetrize so the dual tables are real (the DFT path requires it).
    for (auto& t : fs.edge) {
      for (int a = 1; 2 * a < q; ++a) t.values[q - a] = t.values[a];
    }
    for (auto& t : fs.vertex) {
      for (int a = 1; 2 * a < q; ++a) t.values[q - a] = t.values[a];
    }
  }
  return duality_scale(g, fs, opts);
}

}  // namespace dualmarg
