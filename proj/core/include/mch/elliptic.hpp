#pragma once

// Complete elliptic integrals and Jacobi elliptic functions.
//
// Every function here takes the MODULUS k, never the parameter m = k².
// Boost, GSL and scipy differ on this (scipy.special.ellipk takes m); mixing
// conventions silently squares the modulus. Callers porting formulas from
// other sources must convert before calling.

namespace mch::elliptic {

/// Moduli above this are rejected by complete_k and jacobi: K(k) diverges
/// logarithmically at k = 1.
inline constexpr double kMaxModulus = 1.0 - 1e-12;

/// K(k) = ∫₀^{π/2} dθ / √(1 − k² sin²θ), by the arithmetic–geometric mean.
/// Throws DomainError unless 0 ≤ k ≤ kMaxModulus.
double complete_k(double k);

/// E(k) = ∫₀^{π/2} √(1 − k² sin²θ) dθ, by the AGM with the Gauss sum.
/// Accepts 0 ≤ k ≤ 1 (E(1) = 1); throws DomainError otherwise.
double complete_e(double k);

/// dK/dk = (E − (1 − k²)K) / (k(1 − k²)); dK/dk(0) = 0.
double complete_k_derivative(double k);

struct JacobiTriple {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn of (u; k) by the descending Landen (AGM) ladder.
/// Throws DomainError for non-finite u or k outside [0, kMaxModulus].
JacobiTriple jacobi(double u, double k);

}  // namespace mch::elliptic
