#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <span>
#include <string>
#include <vector>

#include "mch/errors.hpp"
#include "mch/wave.hpp"

namespace mch {

/// Uniform grid x_j = jL/n on one period; n even and ≥ 16.
class PeriodicGrid {
 public:
  PeriodicGrid(double period, int n);

  double period() const { return period_; }
  int size() const { return n_; }
  double spacing() const { return period_ / n_; }
  double node(int j) const { return period_ * j / n_; }
  /// κ_m = 2πm/L.
  double wavenumber(int m) const;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  double period_;
  int n_;
};

/// Real samples of an L-periodic function. Values are finite on construction;
/// binary operations require identical grids.
class PeriodicField {
 public:
  PeriodicField(PeriodicGrid grid, std::vector<double> values);
  static PeriodicField constant(const PeriodicGrid& grid, double value);

  const PeriodicGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](int j) const { return values_[j]; }
  int size() const { return grid_.size(); }
  double sup_norm() const;

  PeriodicField& operator+=(const PeriodicField& other);
  PeriodicField& operator-=(const PeriodicField& other);
  PeriodicField& operator*=(double s);

  friend PeriodicField operator+(PeriodicField a, const PeriodicField& b) { return a += b; }
  friend PeriodicField operator-(PeriodicField a, const PeriodicField& b) { return a -= b; }
  friend PeriodicField operator*(double s, PeriodicField a) { return a *= s; }

 private:
  void require_same_grid(const PeriodicField& other) const;

  PeriodicGrid grid_;
  std::vector<double> values_;
};

/// values[j] = f(x_j); throws DataError on a non-finite sample.
template <std::invocable<double> Fn>
PeriodicField sample(Fn&& f, const PeriodicGrid& grid) {
  std::vector<double> v(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    v[j] = static_cast<double>(f(grid.node(j)));
    if (!std::isfinite(v[j])) {
      throw DataError("sample: non-finite value at x=" + std::to_string(grid.node(j)));
    }
  }
  return PeriodicField(grid, std::move(v));
}

/// φ, φ′, φ″ of a wave sampled from the analytic profile.
struct ProfileFields {
  PeriodicField phi;
  PeriodicField phi1;
  PeriodicField phi2;
};
ProfileFields sample_profile(const WaveParams& p, const PeriodicGrid& grid);

/// Unnormalized half spectrum (n/2 + 1 coefficients) of u.
std::vector<std::complex<double>> half_spectrum(const PeriodicField& u);

/// Fourier derivative of order 1, 2 or 3: multiply by (iκ_m)^order, with the
/// Nyquist coefficient zeroed for odd orders.
PeriodicField derivative(const PeriodicField& u, int order);

/// Trapezoid rule (L/n) Σ u_j.
double integrate(const PeriodicField& u);

double l2_inner(const PeriodicField& u, const PeriodicField& v);
/// ∫ uv + u_x v_x with spectral u_x; ‖v‖² = 2F(v).
double h1_inner(const PeriodicField& u, const PeriodicField& v);
double h1_norm(const PeriodicField& u);

/// u(· + s) by Fourier phase factors; exact for band-limited data.
PeriodicField shift(const PeriodicField& u, double s);

struct Functionals {
  double E;  ///< −∫ u⁴/4 + u u_x²/2
  double F;  ///< ½∫ u² + u_x²
  double V;  ///< ∫ u
};
Functionals functionals(const PeriodicField& u);

/// G(u) = E(u) + cF(u) − A V(u).
double augmented(const PeriodicField& u, double c, double A);

/// Coefficients of Q(u) = dA/dk · V(u) − dc/dk · F(u).
struct QCoefficients {
  double dA_dk;
  double dc_dk;
};
double charge(const PeriodicField& u, const QCoefficients& q);

/// B(u) = G(u) − G(φ) + N (Q(u) − Q(φ))², φ sampled on u's grid.
double lyapunov(const PeriodicField& u, const WaveParams& p, double N, const QCoefficients& q);

struct SemiDistance {
  double rho;    ///< inf_y ‖u − φ(·+y)‖_{H¹}
  double shift;  ///< minimizing y in [0, L)
};

/// Orbital semi-distance to the translates of p's profile: a coarse scan over
/// the n grid shifts followed by golden-section refinement to 1e−10·L.
SemiDistance semidistance(const PeriodicField& u, const WaveParams& p);
/// Same against an already sampled profile on u's grid.
SemiDistance semidistance(const PeriodicField& u, const PeriodicField& phi);

}  // namespace mch
