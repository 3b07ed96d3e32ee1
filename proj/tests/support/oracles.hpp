#pragma once

// Independent references used only by the tests: adaptive quadrature for the
// complete integrals, Boost.Math for Jacobi functions, and a second-order
// finite-difference discretization of the Sturm–Liouville operator.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/ellint_2.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "mch/wave.hpp"

namespace oracle {

inline double quad_k(double k) {
  auto f = [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2,
                                                                      15, 1e-15);
}

inline double quad_e(double k) {
  auto f = [k](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2,
                                                                      15, 1e-15);
}

// Boost takes the modulus k here, same as mch::elliptic.
inline double boost_k(double k) { return boost::math::ellint_1(k); }
inline double boost_e(double k) { return boost::math::ellint_2(k); }

struct Jacobi {
  double sn, cn, dn;
};
inline Jacobi boost_jacobi(double u, double k) {
  double cn = 0.0, dn = 0.0;
  const double sn = boost::math::jacobi_elliptic(k, u, &cn, &dn);
  return {sn, cn, dn};
}

// Conservative three-point discretization of ∂(p ∂v) + q v with p = φ − c
// taken at midpoints from the analytic profile. Eigenvalues ascending.
inline Eigen::VectorXd fd_sturm_liouville(const mch::WaveParams& p, int n) {
  const double h = p.L / n;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const double pl = mch::profile(p, (j - 0.5) * h).phi - p.c;
    const double pr = mch::profile(p, (j + 0.5) * h).phi - p.c;
    const mch::ProfileValue v = mch::profile(p, j * h);
    const int jl = (j + n - 1) % n;
    const int jr = (j + 1) % n;
    m(j, jl) += pl / (h * h);
    m(j, jr) += pr / (h * h);
    m(j, j) += -(pl + pr) / (h * h) + p.c - 3.0 * v.phi * v.phi + v.phi2;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

// Seeded sample of (k, L) pairs on which the wave exists and satisfies every
// validity check.
inline std::vector<std::pair<double, double>> valid_points(int count, unsigned long seed,
                                                          double k_lo = 0.1, double k_hi = 0.8,
                                                          double L_lo = 3 * std::numbers::pi,
                                                          double L_hi = 10 * std::numbers::pi) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dk(k_lo, k_hi);
  std::uniform_real_distribution<double> dl(L_lo, L_hi);
  std::vector<std::pair<double, double>> out;
  while (static_cast<int>(out.size()) < count) {
    const double k = dk(gen);
    const double L = dl(gen);
    if (mch::validity(k, L, 512).all_ok) out.emplace_back(k, L);
  }
  return out;
}

}  // namespace oracle
