#pragma once

#include <array>
#include <span>
#include <vector>

#include "dualmarg/model.hpp"

namespace dualmarg {

enum class MapDirection { dual_to_primal, primal_to_dual };

// The local mapping between edge marginals in the two domains:
// pi_p,e(a)/psi_e(a) and pi_d,e(a')/psi~_e(a') are DFT pairs. The output sums
// to 1 by construction (no renormalization). All factor entries must be
// nonzero, otherwise the mapping is singular (for Ising: betaJ_e = 0 makes
// psi~_e(1) = 2 sinh(0) = 0) and a ValidationError is thrown.
//
// q = 2 uses the closed 2x2 real matrix; q > 2 with symmetric tables uses the
// O(q) reduced system on (value at 0, common value at 1..q-1); anything else
// goes through the full complex W_q path and must truncate to real.
std::vector<double> map_edge_dual_to_primal(std::span<const double> pi_d,
                                            const FactorTable& psi,
                                            const FactorTable& psi_dual);

std::vector<double> map_edge_primal_to_dual(std::span<const double> pi_p,
                                            const FactorTable& psi,
                                            const FactorTable& psi_dual);

// Vertex analog (pi_p,v/phi_v and pi_d,v/phi~_v are DFT pairs). For Ising,
// betaH_v = 0 makes phi~_v(1) = 0 and the mapping singular.
std::vector<double> map_vertex(std::span<const double> pi, const FactorTable& phi,
                               const FactorTable& phi_dual, MapDirection direction);

// Full W_q path without the symmetry reduction; validation only.
std::vector<double> map_edge_full(std::span<const double> pi, const FactorTable& fwd,
                                  const FactorTable& bwd, MapDirection direction);

// 2x2 edge mapping matrix for Ising, row-major. dual_to_primal is
//   [ e^{bJ}/(2cosh bJ)   e^{bJ}/(2sinh bJ) ]
//   [ e^{-bJ}/(2cosh bJ) -e^{-bJ}/(2sinh bJ) ]
// and primal_to_dual its inverse. Applied to a vector summing to 1 the result
// sums to 1.
struct MappingMatrix {
  std::array<double, 4> entries;
  MapDirection direction;
};
MappingMatrix ising_edge_matrix(double beta_j, MapDirection direction);

// Marginal vector invariant under the edge mapping at the same parameters.
struct FixedPoint {
  int q = 2;
  double beta_j = 0.0;
  std::vector<double> vector;
};

// [e^{bJ} cosh bJ, e^{-bJ} sinh bJ] / (1 + sinh 2bJ); requires betaJ > 0.
FixedPoint ising_fixed_point(double beta_j);

// pi*(0) = e^{bJ}(e^{bJ}-1+q)/D, pi*(t>=1) = (e^{bJ}-1)/D,
// D = e^{2bJ} - 2(1-q)e^{bJ} + 1 - q; requires betaJ > 0, q >= 2.
FixedPoint potts_fixed_point(double beta_j, int q);

// Lower bounds for ferromagnetic models in a nonnegative field:
// pi_p,e(0) >= 1/(1+e^{-2bJ}) and pi_d,e(0) >= (1+e^{-2bJ})/2.
// The two curves intersect at betaJ_c where both equal 1/sqrt(2).
struct IsingBounds {
  double primal_zero;
  double dual_zero;
};
IsingBounds ising_bounds(double beta_j_e);

// Product bound pi_p,e(0) * pi_d,e(0) >= 1/2 on measured marginals.
double uncertainty_product(double pi_p_zero, double pi_d_zero);

// Critical coupling of the 2D model: ln(1+sqrt(2))/2 for Ising,
// ln(1+sqrt(q)) for Potts. The conventions differ (potts at q=2 is twice
// the ising value); both are exposed, labeled by model kind.
double critical_coupling(ModelKind kind, int q = 2);

// Average internal energy per site of the 2D zero-field Ising model in the
// thermodynamic limit (standard closed form; see README for the prefactor
// note). Exactly -sqrt(2) at criticality via the vanishing-prefactor branch.
double onsager_internal_energy(double beta_j);

}  // namespace dualmarg
