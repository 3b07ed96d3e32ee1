#include "mch/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mch/errors.hpp"

namespace mch::elliptic {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// The AGM converges quadratically; 12 rungs cover every k ≤ kMaxModulus.
constexpr int kMaxRungs = 12;

void require_modulus(double k, double upper, const char* what) {
  if (!(k >= 0.0 && k <= upper)) {
    throw DomainError(std::string(what) + ": modulus k=" + std::to_string(k) +
                      " outside the supported range");
  }
}

// Complementary modulus without cancellation near k = 1.
double complementary(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

}  // namespace

double complete_k(double k) {
  require_modulus(k, kMaxModulus, "complete_k");
  double a = 1.0;
  double b = complementary(k);
  for (int i = 0; i < kMaxRungs && std::abs(a - b) > 4 * kEps * a; ++i) {
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
  }
  return std::numbers::pi / (a + b);
}

double complete_e(double k) {
  require_modulus(k, 1.0, "complete_e");
  if (k == 1.0) return 1.0;
  double a = 1.0;
  double b = complementary(k);
  // E = K (1 − Σ 2^{n−1} c_n²), c_0 = k, c_{n+1} = (a_n − b_n)/2.
  double sum = 0.5 * k * k;
  double weight = 0.5;
  for (int i = 0; i < kMaxRungs && std::abs(a - b) > 4 * kEps * a; ++i) {
    const double c = 0.5 * (a - b);
    const double next = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = next;
    weight *= 2.0;
    sum += weight * c * c;
  }
  const double K = std::numbers::pi / (a + b);
  return K * (1.0 - sum);
}

double complete_k_derivative(double k) {
  if (k == 0.0) return 0.0;
  const double K = complete_k(k);
  const double E = complete_e(k);
  const double kc2 = (1.0 - k) * (1.0 + k);
  return (E - kc2 * K) / (k * kc2);
}

JacobiTriple jacobi(double u, double k) {
  require_modulus(k, kMaxModulus, "jacobi");
  if (!std::isfinite(u)) throw DomainError("jacobi: non-finite argument");
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};

  std::array<double, kMaxRungs + 1> a{};
  std::array<double, kMaxRungs + 1> c{};
  a[0] = 1.0;
  double b = complementary(k);
  c[0] = k;
  int n = 0;
  while (n < kMaxRungs && std::abs(c[n]) > kEps) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }

  // Reduce modulo the real period 4K = 2π / a_N before amplifying by 2^N a_N.
  const double period = 2.0 * std::numbers::pi / a[n];
  u -= period * std::round(u / period);

  double phi = std::ldexp(a[n] * u, n);
  for (int i = n; i > 0; --i) {
    phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // cn / cos(φ₁ − φ₀) is 0/0 at u = K; 1 − k·sn ≥ 1 − k keeps this one exact.
  const double dn = std::sqrt((1.0 - k * sn) * (1.0 + k * sn));
  return {sn, cn, dn};
}

}  // namespace mch::elliptic
