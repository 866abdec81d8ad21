#include "dualmarg/mapping.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "dualmarg/errors.hpp"

namespace dualmarg {

namespace {

constexpr double kSumTol = 1e-6;
constexpr double kSymmetryTol = 1e-9;
constexpr double kImagTol = 1e-9;

void check_mapping_inputs(std::span<const double> pi, const FactorTable& fwd,
                          const FactorTable& bwd) {
  const int q = fwd.q();
  if (bwd.q() != q || static_cast<int>(pi.size()) != q) {
    throw ValidationError("mapping inputs must share the alphabet size");
  }
  double s = 0.0;
  for (double v : pi) s += v;
  if (std::abs(s - 1.0) > kSumTol) {
    throw ValidationError("mapping input must sum to 1");
  }
  for (double v : fwd.values) {
    if (v == 0.0) {
      throw ValidationError(
          "singular mapping: a factor entry is zero (betaJ_e = 0 or betaH_v = 0)");
    }
  }
  for (double v : bwd.values) {
    if (v == 0.0) {
      throw ValidationError(
          "singular mapping: a factor entry is zero (betaJ_e = 0 or betaH_v = 0)");
    }
  }
}

bool is_symmetric_reducible(const FactorTable& t) {
  for (int a = 2; a < t.q(); ++a) {
    const double ref = std::max({1.0, std::abs(t.values[1]), std::abs(t.values[a])});
    if (std::abs(t.values[a] - t.values[1]) > kSymmetryTol * ref) return false;
  }
  return true;
}

// Dual->primal with `from` the dual tables; primal->dual goes through the
// inverse DFT, conj(W_q)/q.
std::vector<double> map_generic(std::span<const double> pi, const FactorTable& to_table,
                                const FactorTable& from_table, bool inverse) {
  const int q = to_table.q();
  std::vector<double> ratio(q);
  for (int a = 0; a < q; ++a) ratio[a] = pi[a] / from_table.values[a];

  if (q == 2) {
    // Two-point DFT; its inverse is itself over 2.
    const double u0 = ratio[0] + ratio[1];
    const double u1 = ratio[0] - ratio[1];
    const double scale = inverse ? 0.5 : 1.0;
    return {to_table.values[0] * u0 * scale, to_table.values[1] * u1 * scale};
  }

  if (is_symmetric_reducible(from_table) && is_symmetric_reducible(to_table)) {
    // O(q) reduced system on (ratio at 0, mean ratio at 1..q-1); exact when
    // the inputs carry the difference symmetry, and the round trip is an
    // identity by construction.
    double tail = 0.0;
    for (int a = 1; a < q; ++a) tail += ratio[a];
    tail /= q - 1;
    double u0, ut;
    if (!inverse) {
      u0 = ratio[0] + (q - 1) * tail;
      ut = ratio[0] - tail;
    } else {
      u0 = (ratio[0] + (q - 1) * tail) / q;
      ut = (ratio[0] - tail) / q;
    }
    std::vector<double> out(q);
    out[0] = to_table.values[0] * u0;
    for (int a = 1; a < q; ++a) out[a] = to_table.values[a] * ut;
    return out;
  }

  // Full W_q path for inputs without the symmetry.
  std::vector<double> out(q);
  for (int k = 0; k < q; ++k) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < q; ++l) {
      const double ang = 2.0 * std::numbers::pi * ((static_cast<long long>(k) * l) % q) / q;
      const std::complex<double> w =
          inverse ? std::polar(1.0, ang) : std::polar(1.0, -ang);
      acc += w * ratio[l];
    }
    if (inverse) acc /= static_cast<double>(q);
    if (std::abs(acc.imag()) > kImagTol) {
      throw NumericError("mapping produced a non-real marginal (input lacks the "
                         "difference symmetry)");
    }
    out[k] = to_table.values[k] * acc.real();
  }
  return out;
}

}  // namespace

std::vector<double> map_edge_dual_to_primal(std::span<const double> pi_d,
                                            const FactorTable& psi,
                                            const FactorTable& psi_dual) {
  check_mapping_inputs(pi_d, psi, psi_dual);
  return map_generic(pi_d, psi, psi_dual, /*inverse=*/false);
}

std::vector<double> map_edge_primal_to_dual(std::span<const double> pi_p,
                                            const FactorTable& psi,
                                            const FactorTable& psi_dual) {
  check_mapping_inputs(pi_p, psi, psi_dual);
  return map_generic(pi_p, psi_dual, psi, /*inverse=*/true);
}

std::vector<double> map_vertex(std::span<const double> pi, const FactorTable& phi,
                               const FactorTable& phi_dual, MapDirection direction) {
  check_mapping_inputs(pi, phi, phi_dual);
  if (direction == MapDirection::dual_to_primal) {
    return map_generic(pi, phi, phi_dual, /*inverse=*/false);
  }
  return map_generic(pi, phi_dual, phi, /*inverse=*/true);
}

std::vector<double> map_edge_full(std::span<const double> pi, const FactorTable& psi,
                                  const FactorTable& psi_dual, MapDirection direction) {
  check_mapping_inputs(pi, psi, psi_dual);
  const int q = psi.q();
  const bool inverse = direction == MapDirection::primal_to_dual;
  const FactorTable& from = inverse ? psi : psi_dual;
  const FactorTable& to = inverse ? psi_dual : psi;
  std::vector<double> ratio(q);
  for (int a = 0; a < q; ++a) ratio[a] = pi[a] / from.values[a];
  std::vector<double> out(q);
  for (int k = 0; k < q; ++k) {
    std::complex<double> acc = 0.0;
    for (int l = 0; l < q; ++l) {
      const double ang = 2.0 * std::numbers::pi * ((static_cast<long long>(k) * l) % q) / q;
      acc += (inverse ? std::polar(1.0, ang) : std::polar(1.0, -ang)) * ratio[l];
    }
    if (inverse) acc /= static_cast<double>(q);
    if (std::abs(acc.imag()) > kImagTol) {
      throw NumericError("mapping produced a non-real marginal");
    }
    out[k] = to.values[k] * acc.real();
  }
  return out;
}

MappingMatrix ising_edge_matrix(double beta_j, MapDirection direction) {
  if (beta_j == 0.0) {
    throw ValidationError("singular mapping: betaJ_e = 0");
  }
  const double ep = std::exp(beta_j);
  const double em = std::exp(-beta_j);
  const double ch = 2.0 * std::cosh(beta_j);
  const double sh = 2.0 * std::sinh(beta_j);
  if (direction == MapDirection::dual_to_primal) {
    return {{ep / ch, ep / sh, em / ch, -em / sh}, direction};
  }
  // Inverse: pi_d(a') = psi~(a') * (1/2) sum_a (+/-) pi_p(a)/psi(a).
  return {{ch / (2.0 * ep), ch / (2.0 * em), sh / (2.0 * ep), -sh / (2.0 * em)},
          direction};
}

FixedPoint ising_fixed_point(double beta_j) {
  if (!(beta_j > 0.0)) throw ValidationError("ising_fixed_point requires betaJ > 0");
  const double denom = 1.0 + std::sinh(2.0 * beta_j);
  return {2, beta_j,
          {std::exp(beta_j) * std::cosh(beta_j) / denom,
           std::exp(-beta_j) * std::sinh(beta_j) / denom}};
}

FixedPoint potts_fixed_point(double beta_j, int q) {
  if (!(beta_j > 0.0)) throw ValidationError("potts_fixed_point requires betaJ > 0");
  if (q < 2) throw ValidationError("potts_fixed_point requires q >= 2");
  const double e = std::exp(beta_j);
  const double denom = e * e - 2.0 * (1.0 - q) * e + 1.0 - q;
  std::vector<double> v(q, (e - 1.0) / denom);
  v[0] = e * (e - 1.0 + q) / denom;
  return {q, beta_j, std::move(v)};
}

IsingBounds ising_bounds(double beta_j_e) {
  if (!(beta_j_e > 0.0)) throw ValidationError("ising_bounds requires betaJ_e > 0");
  const double t = std::exp(-2.0 * beta_j_e);
  return {1.0 / (1.0 + t), (1.0 + t) / 2.0};
}

double uncertainty_product(double pi_p_zero, double pi_d_zero) {
  return pi_p_zero * pi_d_zero;
}

double critical_coupling(ModelKind kind, int q) {
  if (kind == ModelKind::ising) {
    return std::log(1.0 + std::numbers::sqrt2) / 2.0;
  }
  if (q < 2) throw ValidationError("critical_coupling requires q >= 2");
  return std::log(1.0 + std::sqrt(static_cast<double>(q)));
}

namespace {

// Adaptive Simpson with absolute tolerance; depth-capped.
double adaptive_simpson(double (*f)(double, double), double k, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  if (depth > 60) {
    throw NumericError("onsager quadrature did not converge (depth limit)");
  }
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm, k);
  const double frm = f(rm, k);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson(f, k, a, m, fa, flm, fm, left, tol / 2.0, depth + 1) +
         adaptive_simpson(f, k, m, b, fm, frm, fb, right, tol / 2.0, depth + 1);
}

double elliptic_integrand(double theta, double k) {
  const double s = std::sin(theta);
  return 1.0 / std::sqrt(1.0 - k * k * s * s);
}

// Complete elliptic integral of the first kind, K(k), by adaptive quadrature
// with absolute tolerance 1e-9. Diverges as k -> 1; callers branch there.
double elliptic_k(double k) {
  const double a = 0.0;
  const double b = std::numbers::pi / 2.0;
  const double fa = elliptic_integrand(a, k);
  const double fm = elliptic_integrand(0.5 * (a + b), k);
  const double fb = elliptic_integrand(b, k);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(elliptic_integrand, k, a, b, fa, fm, fb, whole, 1e-9, 0);
}

}  // namespace

double onsager_internal_energy(double beta_j) {
  if (!(beta_j > 0.0)) {
    throw ValidationError("onsager_internal_energy requires betaJ > 0");
  }
  const double x = 2.0 * beta_j;
  const double coth = std::cosh(x) / std::sinh(x);
  const double tanh2 = std::tanh(x) * std::tanh(x);
  const double prefactor = 2.0 * tanh2 - 1.0;
  const double kappa = 2.0 * std::sinh(x) / (std::cosh(x) * std::cosh(x));
  // At criticality kappa = 1: the elliptic integral diverges but its
  // prefactor vanishes, and the product tends to 0. Branch instead of
  // evaluating the singular integral.
  if (std::abs(beta_j - critical_coupling(ModelKind::ising)) < 1e-12 ||
      kappa >= 1.0) {
    return -coth;
  }
  const double integral = elliptic_k(kappa);
  if (!std::isfinite(integral)) {
    throw NumericError("onsager quadrature returned a non-finite value at betaJ = " +
                       std::to_string(beta_j));
  }
  return -coth * (1.0 + (2.0 / std::numbers::pi) * prefactor * integral);
}

}  // namespace dualmarg
