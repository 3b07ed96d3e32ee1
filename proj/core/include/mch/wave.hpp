#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "mch/errors.hpp"

namespace mch {

/// One exact periodic traveling wave φ(x − ct) of the mCH equation,
///
///   φ(x) = a + b (dn²(2K(k)x/L; k) − E(k)/K(k)),
///
/// with (a, b, c) the closed-form parameter maps and A the integration
/// constant of (φ − c)φ″ + φ′²/2 − φ³ + cφ = A. k is the elliptic modulus.
struct WaveParams {
  double k = 0.0;
  double L = 0.0;
  double a = 0.0;  ///< mean level: (1/L)∫φ = a
  double b = 0.0;  ///< dnoidal amplitude, always negative
  double c = 0.0;  ///< speed, 0 < c < 3/2
  double A = 0.0;  ///< integration constant, from the profile ODE at x = 0
  double A_closed_form = 0.0;  ///< long closed form for A; cross-check only
  double K = 0.0;              ///< K(k), cached
  double E = 0.0;              ///< E(k), cached
};

/// φ = α + β sn²(2Kx/L; k), the snoidal rewrite of the same profile.
struct SnoidalParams {
  double alpha = 0.0;
  double beta = 0.0;
};

struct ProfileValue {
  double phi;
  double phi1;  ///< dφ/dx
  double phi2;  ///< d²φ/dx²
};

struct ValidityReport {
  double discriminant = 0.0;
  bool discriminant_ok = false;
  double ineq_i_value = std::numeric_limits<double>::quiet_NaN();    ///< c² − 3c + 32π⁴/L⁴
  double ineq_ii_margin = std::numeric_limits<double>::quiet_NaN();  ///< max(φ − c) on the samples
  bool all_ok = false;
};

struct ParamDerivatives {
  double da = 0.0;
  double db = 0.0;
  double dc = 0.0;
  double dA = 0.0;
  double max_rel_change = 0.0;  ///< worst component change under h → h/2
};

/// Δ(k, L) = 9L⁴ − 2048 K(k)⁴ (1 − k² + k⁴); waves exist only where Δ > 0.
double discriminant(double k, double L);

/// Parameters of the wave with modulus k ∈ (0, 1) and period L > 0.
/// Throws DomainError when Δ(k, L) ≤ 0 ("period too small for this modulus").
WaveParams wave_params(double k, double L);

/// The k → 0⁺ limit: a constant state φ ≡ a with the limiting c and A.
/// At L = 2π this is a = −1, b = −2, c = 1, A = 0.
WaveParams constant_wave(double L);

/// The printed closed form of A in terms of (k, L). Kept only to cross-check
/// the ODE evaluation stored in WaveParams::A.
double integration_constant_closed_form(double k, double L);

ProfileValue profile(const WaveParams& p, double x);

SnoidalParams snoidal_form(const WaveParams& p);

/// α + β sn²(2Kx/L; k).
double snoidal_value(const WaveParams& p, const SnoidalParams& s, double x);

/// max over n uniform samples of |(φ−c)φ″ + φ′²/2 − φ³ + cφ − A|.
double ode_residual(const WaveParams& p, int n);

/// Diagnoses (k, L) without throwing: Δ > 0, c² − 3c + 32π⁴/L⁴ < 0 and
/// φ − c < 0 on n samples.
ValidityReport validity(double k, double L, int n);
ValidityReport validity(const WaveParams& p, int n);

/// Fixed-L k-derivatives of (a, b, c, A) by Richardson-extrapolated central
/// differences; see richardson_dk.
ParamDerivatives params_dk(double k, double L, double h);

/// Result of a Richardson-extrapolated derivative. `fine` uses step h/2 and
/// is the reported value; `coarse` uses h.
template <std::size_t N>
struct FdResult {
  std::array<double, N> fine{};
  std::array<double, N> coarse{};
  double max_rel_change = 0.0;
};

/// Step-halving consistency threshold shared by every k-derivative.
inline constexpr double kFdRelTolerance = 0.01;

/// d/dk of a vector-valued function at k with one Richardson level:
///   D(s) = (f(k+s) − f(k−s)) / 2s,   R(s) = (4 D(s) − D(2s)) / 3,
/// evaluated at s = h and s = h/2. Each component must satisfy
/// |R(h) − R(h/2)| ≤ 1% · |R(h/2)| + roundoff floor, otherwise AccuracyError.
/// The stencil spans [k − 2h, k + 2h]; f is responsible for rejecting points
/// outside its domain.
template <std::size_t N, class Fn>
FdResult<N> richardson_dk(Fn&& f, double k, double h) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  const std::array<double, N> m2 = f(k - 2 * h);
  const std::array<double, N> m1 = f(k - h);
  const std::array<double, N> mh = f(k - 0.5 * h);
  const std::array<double, N> ph = f(k + 0.5 * h);
  const std::array<double, N> p1 = f(k + h);
  const std::array<double, N> p2 = f(k + 2 * h);

  FdResult<N> out;
  for (std::size_t i = 0; i < N; ++i) {
    const double d_h = (p1[i] - m1[i]) / (2 * h);
    const double d_2h = (p2[i] - m2[i]) / (4 * h);
    const double d_half = (ph[i] - mh[i]) / h;
    out.coarse[i] = (4 * d_h - d_2h) / 3;
    out.fine[i] = (4 * d_half - d_h) / 3;

    const double scale = std::max({std::abs(m2[i]), std::abs(p2[i]), std::abs(mh[i])});
    const double floor = 64 * kEps * scale / h;
    const double change = std::abs(out.coarse[i] - out.fine[i]);
    if (change > kFdRelTolerance * std::abs(out.fine[i]) + floor) {
      throw AccuracyError("finite-difference step-halving gate failed for component " +
                          std::to_string(i) + " at k=" + std::to_string(k));
    }
    if (std::abs(out.fine[i]) > floor) {
      out.max_rel_change = std::max(out.max_rel_change, change / std::abs(out.fine[i]));
    }
  }
  return out;
}

/// Largest step ≤ h_max whose stencil [k − 2h, k + 2h] stays inside (0, 1).
double fd_step_for(double k, double h_max);

}  // namespace mch
