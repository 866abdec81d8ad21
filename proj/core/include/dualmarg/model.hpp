#pragma once

#include <complex>
#include <span>
#include <vector>

#include "dualmarg/graph.hpp"

namespace dualmarg {

enum class Domain { primal, dual };
enum class ModelKind { ising, potts };

// Dimensionless parameters: the inverse temperature is absorbed into the
// per-edge couplings betaJ_e and per-vertex fields betaH_v.
struct ModelParams {
  int q = 2;
  std::vector<double> couplings;  // per edge
  std::vector<double> fields;     // per vertex

  static ModelParams homogeneous(const Graph& g, int q, double beta_j, double beta_h);
};

// Length-q weight table attached to one edge or one vertex. Primal tables are
// nonnegative; dual tables are the DFTs of primal ones, kept real (every
// in-scope primal table is symmetric, so its DFT is real).
struct FactorTable {
  std::vector<double> values;
  Domain domain = Domain::primal;

  int q() const { return static_cast<int>(values.size()); }
};

struct FactorSet {
  Domain domain = Domain::primal;
  int q = 2;
  std::vector<FactorTable> edge;    // one per edge of the graph
  std::vector<FactorTable> vertex;  // one per vertex
};

struct Model {
  Graph graph;
  ModelKind kind = ModelKind::ising;
  ModelParams params;
};

// Edge factors psi_e = [e^{betaJ}, e^{-betaJ}], vertex factors
// phi_v = [e^{betaH}, e^{-betaH}]. Requires q = 2.
FactorSet ising_factors(const Graph& g, const ModelParams& p);

// Edge factors psi_e = [e^{betaJ}, 1, ..., 1], all-ones vertex factors.
// Requires zero fields; q >= 2.
FactorSet potts_factors(const Graph& g, const ModelParams& p);

FactorSet make_factors(const Model& m);

// q-point DFT, w_{k,l} = exp(-2*pi*i*k*l/q). For q = 2 this is exactly
// [v0 + v1, v0 - v1] in real arithmetic. For q > 2 the transform is complex;
// imaginary parts below 1e-12 are truncated and anything larger throws
// NumericError (in-scope tables are symmetric, their DFTs are real).
// The domain tag flips.
FactorTable dft(const FactorTable& t);

// Untruncated transform, used by the validation path and tests.
std::vector<std::complex<double>> dft_complex(std::span<const double> values);

FactorSet dual_factors(const Graph& g, const FactorSet& primal);

// Difference variables y_e = x_i - x_j mod q for a primal configuration.
std::vector<int> edge_differences(std::span<const int> x, const Graph& g, int q);

// Dual vertex values: the oriented sum of incident y~_e mod q (+ where v is
// the edge tail, - where it is the head). Equals the plain sum for q = 2.
std::vector<int> dual_vertex_sums(std::span<const int> y_tilde, const Graph& g, int q);

// Dimensionless energy betaH(x) of a primal configuration.
// Ising: -sum_e betaJ_e (2 delta(y_e) - 1) - sum_v betaH_v (2 delta(x_v) - 1);
// Potts: -sum_e betaJ_e delta(y_e).
double hamiltonian(std::span<const int> x, const Model& m);

}  // namespace dualmarg
