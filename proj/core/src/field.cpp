#include "mch/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "mch/fourier.hpp"

namespace mch {

PeriodicGrid::PeriodicGrid(double period, int n) : period_(period), n_(n) {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw DomainError("PeriodicGrid: period must be positive and finite");
  }
  if (n < 16 || n % 2 != 0) {
    throw DomainError("PeriodicGrid: n must be even and >= 16, got " + std::to_string(n));
  }
}

double PeriodicGrid::wavenumber(int m) const { return 2.0 * std::numbers::pi * m / period_; }

PeriodicField::PeriodicField(PeriodicGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_.size()) {
    throw DataError("PeriodicField: value count does not match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("PeriodicField: non-finite value");
  }
}

PeriodicField PeriodicField::constant(const PeriodicGrid& grid, double value) {
  return PeriodicField(grid, std::vector<double>(grid.size(), value));
}

double PeriodicField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void PeriodicField::require_same_grid(const PeriodicField& other) const {
  if (!(grid_ == other.grid_)) throw DomainError("fields live on different grids");
}

PeriodicField& PeriodicField::operator+=(const PeriodicField& other) {
  require_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] += other.values_[j];
  return *this;
}

PeriodicField& PeriodicField::operator-=(const PeriodicField& other) {
  require_same_grid(other);
  for (std::size_t j = 0; j < values_.size(); ++j) values_[j] -= other.values_[j];
  return *this;
}

PeriodicField& PeriodicField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ProfileFields sample_profile(const WaveParams& p, const PeriodicGrid& grid) {
  std::vector<double> phi(grid.size());
  std::vector<double> phi1(grid.size());
  std::vector<double> phi2(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    const ProfileValue v = profile(p, grid.node(j));
    phi[j] = v.phi;
    phi1[j] = v.phi1;
    phi2[j] = v.phi2;
  }
  return {PeriodicField(grid, std::move(phi)), PeriodicField(grid, std::move(phi1)),
          PeriodicField(grid, std::move(phi2))};
}

std::vector<std::complex<double>> half_spectrum(const PeriodicField& u) {
  const RealFft& fft = fft_for(u.size());
  std::vector<std::complex<double>> spec(fft.spectrum_size());
  fft.forward(u.values(), spec);
  return spec;
}

PeriodicField derivative(const PeriodicField& u, int order) {
  if (order < 1 || order > 3) throw DomainError("derivative: order must be 1, 2 or 3");
  const PeriodicGrid& g = u.grid();
  const int half = g.size() / 2;
  std::vector<std::complex<double>> spec = half_spectrum(u);
  for (int m = 0; m <= half; ++m) {
    const std::complex<double> ik(0.0, g.wavenumber(m));
    std::complex<double> factor = ik;
    for (int o = 1; o < order; ++o) factor *= ik;
    spec[m] *= factor;
  }
  if (order % 2 == 1) spec[half] = 0.0;
  std::vector<double> out(g.size());
  fft_for(g.size()).inverse(spec, out);
  return PeriodicField(g, std::move(out));
}

double integrate(const PeriodicField& u) {
  double s = 0.0;
  for (double v : u.values()) s += v;
  return s * u.grid().spacing();
}

double l2_inner(const PeriodicField& u, const PeriodicField& v) {
  if (!(u.grid() == v.grid())) throw DomainError("l2_inner: fields live on different grids");
  double s = 0.0;
  for (int j = 0; j < u.size(); ++j) s += u[j] * v[j];
  return s * u.grid().spacing();
}

double h1_inner(const PeriodicField& u, const PeriodicField& v) {
  return l2_inner(u, v) + l2_inner(derivative(u, 1), derivative(v, 1));
}

double h1_norm(const PeriodicField& u) { return std::sqrt(std::max(0.0, h1_inner(u, u))); }

PeriodicField shift(const PeriodicField& u, double s) {
  const PeriodicGrid& g = u.grid();
  const int half = g.size() / 2;
  std::vector<std::complex<double>> spec = half_spectrum(u);
  for (int m = 0; m < half; ++m) spec[m] *= std::polar(1.0, g.wavenumber(m) * s);
  // A real Nyquist mode can only keep its cosine part under a shift.
  spec[half] *= std::cos(g.wavenumber(half) * s);
  std::vector<double> out(g.size());
  fft_for(g.size()).inverse(spec, out);
  return PeriodicField(g, std::move(out));
}

Functionals functionals(const PeriodicField& u) {
  const PeriodicField ux = derivative(u, 1);
  double e = 0.0;
  double f = 0.0;
  double v = 0.0;
  for (int j = 0; j < u.size(); ++j) {
    const double uj = u[j];
    const double dj = ux[j];
    e += 0.25 * uj * uj * uj * uj + 0.5 * uj * dj * dj;
    f += uj * uj + dj * dj;
    v += uj;
  }
  const double h = u.grid().spacing();
  return {-e * h, 0.5 * f * h, v * h};
}

double augmented(const PeriodicField& u, double c, double A) {
  const Functionals q = functionals(u);
  return q.E + c * q.F - A * q.V;
}

double charge(const PeriodicField& u, const QCoefficients& q) {
  const Functionals f = functionals(u);
  return q.dA_dk * f.V - q.dc_dk * f.F;
}

double lyapunov(const PeriodicField& u, const WaveParams& p, double N, const QCoefficients& q) {
  if (!(N > 0.0)) throw DomainError("lyapunov: N must be positive");
  const PeriodicField phi = sample_profile(p, u.grid()).phi;
  const double dq = charge(u, q) - charge(phi, q);
  return augmented(u, p.c, p.A) - augmented(phi, p.c, p.A) + N * dq * dq;
}

namespace {

// ‖u − φ(·+y)‖²_{H¹} from the two half spectra, without cancellation.
class ShiftObjective {
 public:
  ShiftObjective(const PeriodicField& u, const PeriodicField& phi)
      : grid_(u.grid()), u_(half_spectrum(u)), phi_(half_spectrum(phi)) {}

  double operator()(double y) const {
    const int half = grid_.size() / 2;
    double s = 0.0;
    for (int m = 0; m <= half; ++m) {
      const double kappa = grid_.wavenumber(m);
      std::complex<double> rotated;
      double weight;
      if (m == 0) {
        rotated = phi_[0];
        weight = 1.0;
      } else if (m == half) {
        rotated = phi_[m] * std::cos(kappa * y);
        weight = 1.0;  // u_x has no Nyquist content
      } else {
        rotated = phi_[m] * std::polar(1.0, kappa * y);
        weight = 2.0 * (1.0 + kappa * kappa);
      }
      s += weight * std::norm(u_[m] - rotated);
    }
    const double n = grid_.size();
    return s * grid_.period() / (n * n);
  }

 private:
  PeriodicGrid grid_;
  std::vector<std::complex<double>> u_;
  std::vector<std::complex<double>> phi_;
};

}  // namespace

SemiDistance semidistance(const PeriodicField& u, const PeriodicField& phi) {
  if (!(u.grid() == phi.grid())) throw DomainError("semidistance: fields live on different grids");
  const PeriodicGrid& g = u.grid();
  const ShiftObjective objective(u, phi);

  int best = 0;
  double best_value = objective(0.0);
  for (int j = 1; j < g.size(); ++j) {
    const double v = objective(g.node(j));
    if (v < best_value) {
      best_value = v;
      best = j;
    }
  }

  // Golden section on one grid cell either side of the coarse minimizer.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = g.node(best) - g.spacing();
  double hi = g.node(best) + g.spacing();
  double x1 = hi - invphi * (hi - lo);
  double x2 = lo + invphi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  const double target = 1e-10 * g.period();
  while (hi - lo > target) {
    if (f1 < f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - invphi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + invphi * (hi - lo);
      f2 = objective(x2);
    }
  }
  double y = 0.5 * (lo + hi);
  double value = objective(y);
  if (best_value <= value) {
    y = g.node(best);
    value = best_value;
  }
  y = std::fmod(y, g.period());
  if (y < 0.0) y += g.period();
  return {std::sqrt(std::max(0.0, value)), y};
}

SemiDistance semidistance(const PeriodicField& u, const WaveParams& p) {
  if (std::abs(u.grid().period() - p.L) > 1e-12 * p.L) {
    throw DomainError("semidistance: field period differs from the wave period");
  }
  return semidistance(u, sample_profile(p, u.grid()).phi);
}

}  // namespace mch
