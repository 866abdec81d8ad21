#pragma once

#include <cstdint>
#include <vector>

#include "dualmarg/model.hpp"

namespace dualmarg {

struct EnumerationOptions {
  // Maximum number of weighted terms (q^N primal, q^|E| dual).
  std::uint64_t budget = std::uint64_t{1} << 24;
  // Configuration range is split into this many blocks, accumulated
  // independently and reduced in block order, so results are
  // bitwise-deterministic for a fixed partition count.
  int partitions = 1;
};

struct ExactResult {
  Domain domain = Domain::primal;
  double z = 0.0;  // Z_p or Z_d
  std::vector<std::vector<double>> edge_marginals;    // [edge][a], sums to 1
  std::vector<std::vector<double>> vertex_marginals;  // [vertex][a]
  // Dual factors took negative values somewhere; the outputs are then signed
  // "marginal functions" rather than densities.
  bool signed_marginals = false;
};

struct ExtrinsicVector {
  std::vector<double> values;  // S_e(a) resp. S~_e(a')
  int edge = 0;
  Domain domain = Domain::primal;
};

// Brute-force oracle over all q^N primal configurations:
// Z_p = sum_x prod_e psi_e(y_e) prod_v phi_v(x_v), edge marginals
// pi_{p,e}(a) = Z_{p,e}(a)/Z_p, vertex marginals analogous.
// Accumulation is compensated (Neumaier) throughout.
ExactResult primal_exact(const Graph& g, const FactorSet& factors,
                         const EnumerationOptions& opts = {});

// Dual oracle over all q^|E| configurations y~, with x~_v = sum of incident
// y~_e mod q.
ExactResult dual_exact(const Graph& g, const FactorSet& factors,
                       const EnumerationOptions& opts = {});

// Extrinsic vector of one edge: the enumeration above with psi_e replaced by
// the clamp delta(y_e - a); satisfies Z = sum_a psi_e(a) S_e(a).
ExtrinsicVector extrinsic(const Graph& g, const FactorSet& factors, int edge,
                          const EnumerationOptions& opts = {});

// Dual extrinsic analog for a vertex (phi_v excluded, x~_v clamped).
ExtrinsicVector vertex_extrinsic(const Graph& g, const FactorSet& factors, int vertex,
                                 const EnumerationOptions& opts = {});

// Measured duality scale alpha(G) = Z_d/Z_p on the given primal factors.
// The value depends only on the topology and q, which tests verify by
// varying the factors.
double duality_scale(const Graph& g, const FactorSet& primal,
                     const EnumerationOptions& opts = {});

// Same ratio measured on seeded random strictly-positive factor tables.
double duality_scale(const Graph& g, int q, std::uint64_t seed = 1,
                     const EnumerationOptions& opts = {});

}  // namespace dualmarg
