#include "mch/wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mch/elliptic.hpp"

namespace mch {
namespace {

using std::numbers::pi;

double quartic_factor(double k) {
  const double k2 = k * k;
  return 1.0 - k2 + k2 * k2;
}

// Parameter maps valid for 0 ≤ k < 1; k = 0 is the constant limit.
WaveParams build(double k, double L) {
  WaveParams p;
  p.k = k;
  p.L = L;
  p.K = elliptic::complete_k(k);
  p.E = elliptic::complete_e(k);

  const double delta = discriminant(k, L);
  if (!(delta > 0.0)) {
    throw DomainError("period too small for this modulus: discriminant " + std::to_string(delta) +
                      " <= 0 at k=" + std::to_string(k) + ", L=" + std::to_string(L));
  }
  const double root = std::sqrt(delta);
  const double L2 = L * L;
  const double K = p.K;
  const double E = p.E;
  const double k2 = k * k;

  p.b = -32.0 * K * K / L2;
  p.c = (1.5 * L2 - 0.5 * root) / L2;
  p.a = -(-32.0 * (2.0 - k2) * K * K + 96.0 * E * K + 1.5 * L2 - 0.5 * root) / (3.0 * L2);

  // A from the profile ODE at x = 0, where φ′ = 0 and dn = 1.
  const ProfileValue at0 = profile(p, 0.0);
  p.A = (at0.phi - p.c) * at0.phi2 + 0.5 * at0.phi1 * at0.phi1 - at0.phi * at0.phi * at0.phi +
        p.c * at0.phi;
  p.A_closed_form = integration_constant_closed_form(k, L);
  return p;
}

}  // namespace

double discriminant(double k, double L) {
  const double K = elliptic::complete_k(k);
  const double K2 = K * K;
  const double L2 = L * L;
  return 9.0 * L2 * L2 - 2048.0 * K2 * K2 * quartic_factor(k);
}

WaveParams wave_params(double k, double L) {
  if (!(k > 0.0 && k < 1.0)) {
    throw DomainError("wave_params: modulus must lie in (0, 1), got k=" + std::to_string(k));
  }
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw DomainError("wave_params: period must be positive, got L=" + std::to_string(L));
  }
  return build(k, L);
}

WaveParams constant_wave(double L) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw DomainError("constant_wave: period must be positive");
  }
  return build(0.0, L);
}

double integration_constant_closed_form(double k, double L) {
  const double K = elliptic::complete_k(k);
  const double k2 = k * k;
  const double k4 = k2 * k2;
  const double k6 = k4 * k2;
  const double K4 = K * K * K * K;
  const double K6 = K4 * K * K;
  const double L2 = L * L;
  const double L4 = L2 * L2;
  const double L6 = L4 * L2;
  const double inner = 2048.0 * (-1.0 + k2 - k4) * K4 + 9.0 * L4;
  if (!(inner >= 0.0)) return std::numeric_limits<double>::quiet_NaN();
  return ((1280.0 * (-1.0 + k2 - k4) * K4 + 9.0 * L4) * std::sqrt(inner) +
          (-16384.0 - 16384.0 * k6 + 24576.0 * k2 + 24576.0 * k4) * K6 +
          6912.0 * L2 * (1.0 - k2 + k4) * K4 - 27.0 * L6) /
         (27.0 * L6);
}

ProfileValue profile(const WaveParams& p, double x) {
  const double w = 2.0 * p.K / p.L;
  const auto [sn, cn, dn] = elliptic::jacobi(w * x, p.k);
  const double k2 = p.k * p.k;
  // (dn²)′ = −2k² sn cn dn,  (sn cn dn)′ = cn²dn² − sn²dn² − k² sn²cn².
  const double d_dn2 = -2.0 * k2 * sn * cn * dn;
  const double dd_dn2 = -2.0 * k2 * (cn * cn * dn * dn - sn * sn * dn * dn - k2 * sn * sn * cn * cn);
  return {p.a + p.b * (dn * dn - p.E / p.K), p.b * d_dn2 * w, p.b * dd_dn2 * w * w};
}

SnoidalParams snoidal_form(const WaveParams& p) {
  return {p.a + p.b * (1.0 - p.E / p.K), -p.b * p.k * p.k};
}

double snoidal_value(const WaveParams& p, const SnoidalParams& s, double x) {
  const double sn = elliptic::jacobi(2.0 * p.K * x / p.L, p.k).sn;
  return s.alpha + s.beta * sn * sn;
}

double ode_residual(const WaveParams& p, int n) {
  if (n < 16) throw DomainError("ode_residual: need at least 16 samples");
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = p.L * j / n;
    const auto [phi, phi1, phi2] = profile(p, x);
    const double r = (phi - p.c) * phi2 + 0.5 * phi1 * phi1 - phi * phi * phi + p.c * phi - p.A;
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

ValidityReport validity(const WaveParams& p, int n) {
  ValidityReport r;
  r.discriminant = discriminant(p.k, p.L);
  r.discriminant_ok = r.discriminant > 0.0;
  const double L4 = p.L * p.L * p.L * p.L;
  r.ineq_i_value = p.c * p.c - 3.0 * p.c + 32.0 * std::pow(pi, 4) / L4;
  double margin = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    margin = std::max(margin, profile(p, p.L * j / n).phi - p.c);
  }
  r.ineq_ii_margin = margin;
  r.all_ok = r.discriminant_ok && r.ineq_i_value < 0.0 && r.ineq_ii_margin < 0.0;
  return r;
}

ValidityReport validity(double k, double L, int n) {
  ValidityReport r;
  if (!(k >= 0.0 && k < 1.0) || !(L > 0.0) || !std::isfinite(L) ||
      k > elliptic::kMaxModulus) {
    return r;
  }
  r.discriminant = discriminant(k, L);
  r.discriminant_ok = r.discriminant > 0.0;
  if (!r.discriminant_ok) return r;
  return validity(build(k, L), n);
}

double fd_step_for(double k, double h_max) {
  return std::min({h_max, k / 4.0, (1.0 - k) / 4.0});
}

ParamDerivatives params_dk(double k, double L, double h) {
  if (!(h > 0.0)) throw DomainError("params_dk: step must be positive");
  if (!(k - 2 * h > 0.0 && k + 2 * h < 1.0)) {
    throw DomainError("params_dk: stencil [k-2h, k+2h] leaves (0, 1)");
  }
  if (!(discriminant(k - 2 * h, L) > 0.0 && discriminant(k + 2 * h, L) > 0.0)) {
    throw DomainError("params_dk: stencil leaves the region where the wave exists");
  }
  const auto fd = richardson_dk<4>(
      [L](double kk) {
        const WaveParams p = wave_params(kk, L);
        return std::array<double, 4>{p.a, p.b, p.c, p.A};
      },
      k, h);
  return {fd.fine[0], fd.fine[1], fd.fine[2], fd.fine[3], fd.max_rel_change};
}

}  // namespace mch
