#include "mch/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <string>

#include "mch/fourier.hpp"
#include "mch/linop.hpp"

namespace mch {
namespace {

using cplx = std::complex<double>;
using Vec = std::vector<double>;

bool all_finite(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Evaluates the smoothed right-hand side on raw grid values. Returns false if
// a non-finite value appears.
bool rhs_values(const PeriodicGrid& grid, const Vec& u, int pad, Vec& out) {
  const int n = grid.size();
  const int half = n / 2;
  const int big = pad * n;
  const RealFft& fft = fft_for(n);
  const RealFft& fine = fft_for(big);

  std::vector<cplx> spec(fft.spectrum_size());
  fft.forward(u, spec);

  // Zero-padded spectra of u, u_x, u_xx on the refined grid. The Nyquist
  // coefficient of a real signal is shared by ±n/2 and is split evenly.
  const double scale = static_cast<double>(big) / n;
  std::vector<cplx> s0(fine.spectrum_size(), 0.0);
  std::vector<cplx> s1(fine.spectrum_size(), 0.0);
  std::vector<cplx> s2(fine.spectrum_size(), 0.0);
  for (int m = 0; m <= half; ++m) {
    const double kappa = grid.wavenumber(m);
    const cplx c = spec[m] * (m == half ? 0.5 * scale : scale);
    s0[m] = c;
    s1[m] = m == half ? cplx(0.0) : cplx(0.0, kappa) * c;
    s2[m] = -kappa * kappa * c;
  }
  Vec v0(big), v1(big), v2(big);
  fine.inverse(s0, v0);
  fine.inverse(s1, v1);
  fine.inverse(s2, v2);

  Vec q(big);
  for (int j = 0; j < big; ++j) {
    q[j] = v0[j] * v2[j] + 0.5 * v1[j] * v1[j] - v0[j] * v0[j] * v0[j];
  }
  if (!all_finite(q)) return false;

  std::vector<cplx> sq(fine.spectrum_size());
  fine.forward(q, sq);
  std::vector<cplx> res(fft.spectrum_size(), 0.0);
  for (int m = 1; m < half; ++m) {
    const double kappa = grid.wavenumber(m);
    res[m] = sq[m] / scale * cplx(0.0, kappa / (1.0 + kappa * kappa));
  }
  out.resize(n);
  fft.inverse(res, out);
  return all_finite(out);
}

double rel_drift(double now, double start) {
  const double denom = std::abs(start);
  return denom > 0.0 ? std::abs(now - start) / denom : std::abs(now - start);
}

double l2_norm(const Eigen::VectorXd& v, double h) { return std::sqrt(h * v.squaredNorm()); }

double largest_singular_value(const Eigen::MatrixXd& a) {
  Eigen::VectorXd x = Eigen::VectorXd::Ones(a.cols());
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += 0.1 * std::sin(1.7 * i);
  double sigma = 0.0;
  for (int it = 0; it < 100; ++it) {
    Eigen::VectorXd y = a.transpose() * (a * x);
    const double nrm = y.norm();
    if (nrm == 0.0) return 0.0;
    const double next = std::sqrt(nrm / x.norm());
    x = y / nrm;
    if (std::abs(next - sigma) <= 1e-6 * next) return next;
    sigma = next;
  }
  return sigma;
}

}  // namespace

void validate(const EvolutionConfig& cfg) {
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw DomainError("t_end must be positive");
  if (!std::isfinite(cfg.dt)) throw DomainError("dt must be finite");
  if (cfg.dealias_pad < 2) throw DomainError("dealias_pad must be at least 2");
  if (cfg.monitor_every < 1) throw DomainError("monitor_every must be at least 1");
  if (!(cfg.blowup_threshold > 0.0)) throw DomainError("blowup_threshold must be positive");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::completed:
      return "completed";
    case Termination::blowup:
      return "blowup";
    case Termination::instability_detected:
      return "instability_detected";
  }
  return "unknown";
}

double StabilityRunReport::max_rho() const {
  return rho.empty() ? 0.0 : *std::max_element(rho.begin(), rho.end());
}

double StabilityRunReport::max_drift() const {
  double m = 0.0;
  for (const auto* v : {&drift_E, &drift_F, &drift_V}) {
    for (double d : *v) m = std::max(m, d);
  }
  return m;
}

PeriodicField rhs(const PeriodicField& u, int pad) {
  if (pad < 2) throw DomainError("rhs: pad must be at least 2");
  Vec out;
  const Vec in(u.values().begin(), u.values().end());
  if (!rhs_values(u.grid(), in, pad, out)) throw NumericalError("rhs: non-finite intermediate");
  return PeriodicField(u.grid(), std::move(out));
}

double default_dt(const PeriodicField& u0, double c) {
  return 0.5 * u0.grid().spacing() / std::max(1.0, u0.sup_norm() + std::abs(c));
}

RunResult run(const PeriodicField& u0, const EvolutionConfig& cfg, const RunMonitor& monitor) {
  validate(cfg);
  if (monitor.reference && !(monitor.reference->grid() == u0.grid())) {
    throw DomainError("run: reference profile lives on a different grid");
  }
  const PeriodicGrid grid = u0.grid();
  const int n = grid.size();
  const double dt_req = cfg.dt > 0.0 ? cfg.dt : default_dt(u0, cfg.speed_hint);
  const long steps = std::max(1L, static_cast<long>(std::ceil(cfg.t_end / dt_req - 1e-9)));
  const double dt = cfg.t_end / steps;

  RunResult result{u0, {}, {}};
  StabilityRunReport& rep = result.report;
  rep.dt = dt;
  const Functionals q0 = functionals(u0);

  auto record = [&](double t, const PeriodicField& u) {
    const Functionals q = functionals(u);
    rep.times.push_back(t);
    rep.drift_E.push_back(rel_drift(q.E, q0.E));
    rep.drift_F.push_back(rel_drift(q.F, q0.F));
    rep.drift_V.push_back(rel_drift(q.V, q0.V));
    if (cfg.keep_snapshots) result.snapshots.push_back({t, u});
    if (monitor.observer) monitor.observer(t, u);
    if (monitor.reference) {
      const double r = semidistance(u, *monitor.reference).rho;
      rep.rho.push_back(r);
      if (r > monitor.rho_limit) return false;
    }
    return true;
  };

  if (!record(0.0, u0)) {
    rep.terminated = Termination::instability_detected;
    return result;
  }

  Vec u(u0.values().begin(), u0.values().end());
  Vec k1, k2, k3, k4, tmp(n);
  auto stage = [&](const Vec& base, const Vec& slope, double w) {
    for (int j = 0; j < n; ++j) tmp[j] = base[j] + w * slope[j];
  };
  for (long s = 1; s <= steps; ++s) {
    bool ok = rhs_values(grid, u, cfg.dealias_pad, k1);
    if (ok) {
      stage(u, k1, 0.5 * dt);
      ok = rhs_values(grid, tmp, cfg.dealias_pad, k2);
    }
    if (ok) {
      stage(u, k2, 0.5 * dt);
      ok = rhs_values(grid, tmp, cfg.dealias_pad, k3);
    }
    if (ok) {
      stage(u, k3, dt);
      ok = rhs_values(grid, tmp, cfg.dealias_pad, k4);
    }
    if (ok) {
      for (int j = 0; j < n; ++j) u[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
      ok = all_finite(u);
    }
    rep.steps = s;
    if (ok) {
      const double sup = std::abs(*std::max_element(u.begin(), u.end(), [](double a, double b) {
        return std::abs(a) < std::abs(b);
      }));
      ok = sup <= cfg.blowup_threshold;
    }
    if (!ok) {
      rep.terminated = Termination::blowup;
      return result;
    }
    result.final_state = PeriodicField(grid, u);
    if (s % cfg.monitor_every == 0 || s == steps) {
      if (!record(s * dt, result.final_state)) {
        rep.terminated = Termination::instability_detected;
        return result;
      }
    }
  }
  return result;
}

LinearGrowthReport linear_growth(const Eigen::MatrixXd& a, const PeriodicField& v0, double t_end,
                                 double dt, int monitor_every) {
  if (a.rows() != v0.size() || a.cols() != v0.size()) {
    throw DomainError("linear_growth: matrix and field sizes differ");
  }
  if (!(t_end > 0.0)) throw DomainError("linear_growth: t_end must be positive");
  if (monitor_every < 1) throw DomainError("linear_growth: monitor_every must be at least 1");
  const double h = v0.grid().spacing();
  Eigen::VectorXd v(v0.size());
  for (int j = 0; j < v0.size(); ++j) v[j] = v0[j];
  const double n0 = l2_norm(v, h);
  if (!(n0 > 0.0)) throw DomainError("linear_growth: initial vector is zero");

  if (!(dt > 0.0)) {
    const double sigma = largest_singular_value(a);
    dt = sigma > 0.0 ? 1.0 / (0.75 * sigma) : t_end;
  }
  const long steps = std::max(1L, static_cast<long>(std::ceil(t_end / dt - 1e-9)));
  dt = t_end / steps;

  LinearGrowthReport r;
  r.dt = dt;
  r.steps = steps;
  r.times.push_back(0.0);
  r.log_norms.push_back(std::log(n0));
  double log_offset = 0.0;  // accumulated log of rescalings
  for (long s = 1; s <= steps; ++s) {
    const Eigen::VectorXd k1 = a * v;
    const Eigen::VectorXd k2 = a * (v + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = a * (v + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = a * (v + dt * k3);
    v += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double nv = l2_norm(v, h);
    if (!std::isfinite(nv) || nv == 0.0) throw NumericalError("linear_growth: norm degenerated");
    if (nv > 1e100) {
      v /= nv;
      log_offset += std::log(nv);
    }
    if (s % monitor_every == 0 || s == steps) {
      const double ln = log_offset + std::log(l2_norm(v, h));
      r.times.push_back(s * dt);
      r.log_norms.push_back(ln);
      r.norm_ratio_max_dev = std::max(r.norm_ratio_max_dev, std::abs(std::exp(ln - std::log(n0)) - 1.0));
    }
  }
  r.rate_overall = (r.log_norms.back() - r.log_norms.front()) / t_end;

  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  int cnt = 0;
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    if (r.times[i] < 0.5 * t_end) continue;
    st += r.times[i];
    sy += r.log_norms[i];
    stt += r.times[i] * r.times[i];
    sty += r.times[i] * r.log_norms[i];
    ++cnt;
  }
  const double den = cnt * stt - st * st;
  r.rate_fit = cnt >= 2 && den > 0.0 ? (cnt * sty - st * sy) / den : r.rate_overall;
  return r;
}

LinearGrowthReport linearized_run(const PeriodicField& v0, const WaveParams& p,
                                  const EvolutionConfig& cfg) {
  validate(cfg);
  if (std::abs(v0.grid().period() - p.L) > 1e-12 * p.L) {
    throw DomainError("linearized_run: field period differs from the wave period");
  }
  const ProfileFields f = sample_profile(p, v0.grid());
  const OperatorMatrix dxl = assemble_dxl(f.phi, f.phi2, p.c);
  const double mean = integrate(v0) / v0.grid().period();
  const PeriodicField w = v0 - PeriodicField::constant(v0.grid(), mean);
  return linear_growth(dxl.matrix, w, cfg.t_end, cfg.dt, cfg.monitor_every);
}

PeriodicField random_perturbation(const PeriodicGrid& grid, std::uint64_t seed, int modes) {
  if (modes < 1 || modes >= grid.size() / 2) {
    throw DomainError("random_perturbation: modes must lie in [1, n/2)");
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> alpha(modes), beta(modes);
  for (int m = 0; m < modes; ++m) {
    alpha[m] = normal(gen);
    beta[m] = normal(gen);
  }
  const PeriodicField w = sample(
      [&](double x) {
        double s = 0.0;
        for (int m = 0; m < modes; ++m) {
          const double t = grid.wavenumber(m + 1) * x;
          s += alpha[m] * std::cos(t) + beta[m] * std::sin(t);
        }
        return s;
      },
      grid);
  return (1.0 / h1_norm(w)) * w;
}

RunResult orbital_experiment(const WaveParams& p, double delta, std::uint64_t seed, int n,
                             const EvolutionConfig& cfg, const OrbitalOptions& opts) {
  if (!(delta >= 0.0) || !std::isfinite(delta)) {
    throw DomainError("orbital_experiment: delta must be non-negative");
  }
  const PeriodicGrid grid(p.L, n);
  const PeriodicField phi = sample_profile(p, grid).phi;
  PeriodicField u0 = phi;
  if (delta > 0.0) u0 += delta * random_perturbation(grid, seed, opts.modes);

  EvolutionConfig c = cfg;
  c.speed_hint = p.c;
  RunMonitor mon;
  mon.reference = phi;
  if (delta > 0.0) mon.rho_limit = opts.rho_factor * delta;
  return run(u0, c, mon);
}

}  // namespace mch
