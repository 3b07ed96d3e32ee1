#include "mchcli/checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mch/elliptic.hpp"
#include "mch/evolve.hpp"
#include "mch/indices.hpp"
#include "mch/linop.hpp"
#include "mchcli/serialize.hpp"

namespace mch::cli {
namespace {

using std::numbers::pi;

struct Verdict {
  bool pass;
  std::string detail;
};

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double quad_k(double k) {
  auto f = [k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi / 2, 15, 1e-15);
}

double quad_e(double k) {
  auto f = [k](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, pi / 2, 15, 1e-15);
}

Verdict elliptic_kernel() {
  double err = 0.0;
  double legendre = 0.0;
  for (double k : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    err = std::max(err, std::abs(elliptic::complete_k(k) - quad_k(k)));
    err = std::max(err, std::abs(elliptic::complete_e(k) - quad_e(k)));
    const double kp = std::sqrt(1.0 - k * k);
    const double K = elliptic::complete_k(k);
    const double E = elliptic::complete_e(k);
    const double Kp = elliptic::complete_k(kp);
    const double Ep = elliptic::complete_e(kp);
    legendre = std::max(legendre, std::abs(E * Kp + Ep * K - K * Kp - pi / 2));
  }
  return {err < 1e-12 && legendre < 1e-10,
          "max |K,E - quadrature| = " + g(err) + ", Legendre defect = " + g(legendre)};
}

Verdict exact_solutions() {
  int valid = 0;
  double ode = 0.0, mean = 0.0, snoidal = 0.0;
  bool signs = true;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const double k = 0.05 + i * 0.75 / 9;
      const double L = 3 * pi + j * 7 * pi / 9;
      if (!validity(k, L, 512).all_ok) continue;
      ++valid;
      const WaveParams p = wave_params(k, L);
      ode = std::max(ode, ode_residual(p, 512));
      const PeriodicGrid grid(L, 512);
      const PeriodicField phi = sample_profile(p, grid).phi;
      mean = std::max(mean, std::abs(integrate(phi) / L - p.a));
      const SnoidalParams s = snoidal_form(p);
      for (int m = 0; m < 512; ++m) {
        const double x = grid.node(m);
        snoidal = std::max(snoidal, std::abs(snoidal_value(p, s, x) - phi[m]));
      }
      signs = signs && p.c > 0.0 && p.c < 1.5 && p.b < 0.0;
    }
  }
  return {valid > 0 && ode < 1e-8 && mean < 1e-10 && snoidal < 1e-12 && signs,
          std::to_string(valid) + "/100 valid; ODE residual " + g(ode) + ", |mean - a| " + g(mean) +
              ", snoidal/dnoidal " + g(snoidal) + ", 0<c<3/2 and b<0: " + (signs ? "yes" : "no")};
}

Verdict constant_limit() {
  const PeriodicGrid grid(2 * pi, 128);
  const OperatorMatrix l = assemble_l(PeriodicField::constant(grid, -1.0),
                                      PeriodicField::constant(grid, 0.0), 1.0);
  std::vector<double> expected;
  for (int m = -63; m <= 64; ++m) expected.push_back(2.0 * m * m - 2.0);
  std::sort(expected.begin(), expected.end());

  const SpectralReport full = spectrum(l);
  double err = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    err = std::max(err, std::abs(full.eigenvalues[i].real() - expected[i]));
  }
  const SpectralReport restricted = restricted_spectrum(l, full.tol);
  double rerr = 0.0;
  for (std::size_t i = 1; i < expected.size(); ++i) {
    rerr = std::max(rerr, std::abs(restricted.eigenvalues[i - 1].real() - expected[i]));
  }
  const PairingResult pr = inv_one_pairing(l, {std::nullopt, true});
  const MorseReport m = morse_check(l, true);
  const bool eq29 = m.n_L == 1 && !m.pairing_zero && m.pairing < 0.0 && m.n_Y0_direct == 0 &&
                    m.n_Y0_formula == 0;
  return {err < 1e-8 && rerr < 1e-8 && std::abs(pr.value + pi) < 1e-8 && eq29,
          "spectrum err " + g(err) + ", restricted err " + g(rerr) + ", pairing + pi = " +
              g(pr.value + pi) + ", n(L|Y0) = " + std::to_string(m.n_Y0_direct) + " = " +
              std::to_string(m.n_L) + " - 1 - 0"};
}

struct LemmaCounts {
  int n_neg;
  int z_dim;
  double cosine;
};

LemmaCounts lemma_counts(const WaveParams& p, int n) {
  const ProfileFields f = sample_profile(p, PeriodicGrid(p.L, n));
  const SpectralReport s = spectrum(assemble_l(f.phi, f.phi2, p.c));
  double cosine = 0.0;
  if (s.z_dim == 1) {
    int idx = 0;
    for (int i = 0; i < static_cast<int>(s.eigenvalues.size()); ++i) {
      if (std::abs(s.eigenvalues[i]) <= s.tol) idx = i;
    }
    Eigen::VectorXd dphi(n);
    for (int j = 0; j < n; ++j) dphi[j] = f.phi1[j];
    cosine = std::abs(s.lowest_vectors.col(idx).dot(dphi)) / dphi.norm();
  }
  return {s.n_neg, s.z_dim, cosine};
}

Verdict lemma_counts_check() {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const LemmaCounts a = lemma_counts(p, 256);
  const LemmaCounts b = lemma_counts(p, 512);
  return {a.n_neg == 1 && a.z_dim == 1 && a.cosine > 0.999999 && b.n_neg == 1 && b.z_dim == 1,
          "n=256: n_neg " + std::to_string(a.n_neg) + ", z " + std::to_string(a.z_dim) +
              ", |cos| 1-" + g(1.0 - a.cosine) + "; n=512: n_neg " + std::to_string(b.n_neg) +
              ", z " + std::to_string(b.z_dim)};
}

Verdict figure_one() {
  bool ok = true;
  std::string detail;
  for (const auto& [k, L] : {std::pair<Range, Range>{{0.01, 0.2}, {3 * pi, 6 * pi}},
                             std::pair<Range, Range>{{0.05, 0.8}, {6 * pi, 10 * pi}}}) {
    const IndexScan scan = index_scan(k, L, 20, 20);
    const ScanSummary& s = scan.summary;
    ok = ok && s.count_valid > 0 && s.count_positive == 0 && s.max_I < 0.0 &&
         s.count_fd_failed == 0 && s.max_fd_rel_change < 0.01 && s.max_I_rel_change < 0.01;
    if (!detail.empty()) detail += "; ";
    detail += "k(" + g(k.lo) + "," + g(k.hi) + "]: " + std::to_string(s.count_valid) +
              " valid, max I " + g(s.max_I) + ", fd change " + g(s.max_I_rel_change) + ", " +
              std::to_string(s.count_fd_failed) + " fd failures";
  }
  return {ok, detail};
}

Verdict morse_identity() {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> dk(0.1, 0.8);
  std::uniform_real_distribution<double> dl(3 * pi, 10 * pi);
  int tested = 0;
  int held = 0;
  int attempts = 0;
  while (tested < 10 && attempts < 1000) {
    ++attempts;
    const double k = dk(gen);
    const double L = dl(gen);
    if (!validity(k, L, 512).all_ok) continue;
    MorseReport m;
    try {
      m = morse_check(k, L, 256);
    } catch (const RankError&) {
      ++tested;
      continue;
    }
    if (m.pairing_zero) continue;
    ++tested;
    if (m.holds) ++held;
  }
  return {tested == 10 && held == 10,
          std::to_string(held) + "/" + std::to_string(tested) + " points satisfy both identities"};
}

Verdict evolution_exactness() {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicGrid grid(p.L, 256);
  const PeriodicField phi = sample_profile(p, grid).phi;
  double err[2] = {0.0, 0.0};
  double drift[2] = {0.0, 0.0};
  for (int pass = 0; pass < 2; ++pass) {
    EvolutionConfig cfg;
    cfg.t_end = 5.0;
    cfg.monitor_every = 1;
    cfg.dt = default_dt(phi, p.c) / (pass + 1);
    RunMonitor mon;
    mon.observer = [&](double t, const PeriodicField& u) {
      err[pass] = std::max(err[pass], (u - shift(phi, -p.c * t)).sup_norm());
    };
    const RunResult r = run(phi, cfg, mon);
    if (r.report.terminated != Termination::completed) return {false, "run did not complete"};
    drift[pass] = r.report.max_drift();
  }
  const double ratio = drift[1] > 0.0 ? drift[0] / drift[1] : 0.0;
  const bool halving = ratio >= 8.0 && ratio <= 32.0;
  return {err[0] < 1e-5 && drift[0] < 1e-7 && halving,
          "sup error " + g(err[0]) + ", max drift " + g(drift[0]) + " (dt) / " + g(drift[1]) +
              " (dt/2), ratio " + g(ratio) + " (want 8..32)"};
}

Verdict orbital_stability() {
  const WaveParams p = wave_params(0.5, 6 * pi);
  EvolutionConfig cfg;
  cfg.t_end = 50.0;
  const RunResult a = orbital_experiment(p, 1e-3, 1, 256, cfg);
  const RunResult b = orbital_experiment(p, 5e-4, 1, 256, cfg);
  const double sa = a.report.max_rho();
  const double sb = b.report.max_rho();
  const double ratio = sa / sb;
  const bool completed = a.report.terminated == Termination::completed &&
                         b.report.terminated == Termination::completed;
  return {completed && sa < 20e-3 && ratio >= 1.5 && ratio <= 3.0,
          "sup rho/delta " + g(sa / 1e-3) + ", halving ratio " + g(ratio)};
}

Verdict cross_check() {
  bool ok = true;
  std::string detail;
  struct Case {
    double k, L;
    int n;
  };
  int compared = 0;
  for (const Case c : {Case{0.5, 6 * pi, 256}, Case{0.8, 10 * pi, 64}, Case{0.9, 10 * pi, 64}}) {
    const WaveParams p = wave_params(c.k, c.L);
    const PeriodicGrid grid(c.L, c.n);
    const ProfileFields f = sample_profile(p, grid);
    const double max_re = restricted_spectrum(assemble_dxl(f.phi, f.phi2, p.c)).max_real_part;
    detail += "(" + g(c.k) + "," + g(c.L / pi) + "pi) max Re " + g(max_re);
    if (max_re > 0.01) {
      EvolutionConfig cfg;
      cfg.t_end = 3000.0;
      cfg.monitor_every = 50;
      const LinearGrowthReport r = linearized_run(random_perturbation(grid, 7), p, cfg);
      const double rel = std::abs(r.rate_fit - max_re) / max_re;
      ok = ok && rel < 0.1;
      ++compared;
      detail += " vs growth " + g(r.rate_fit) + " (rel " + g(rel) + ")";
    }
    detail += "; ";
  }
  const PeriodicGrid grid(2 * pi, 64);
  const OperatorMatrix dxl = assemble_dxl(PeriodicField::constant(grid, -1.0),
                                          PeriodicField::constant(grid, 0.0), 1.0);
  const LinearGrowthReport r = linear_growth(dxl.matrix, random_perturbation(grid, 3, 4), 1.0);
  ok = ok && compared > 0 && r.norm_ratio_max_dev < 1e-8;
  detail += "constant case L2 deviation " + g(r.norm_ratio_max_dev);
  return {ok, detail};
}

struct Entry {
  const char* title;
  double budget;
  std::function<Verdict()> fn;
};

const Entry& entry(int id) {
  static const Entry table[kCriterionCount] = {
      {"elliptic kernel", 1.0, elliptic_kernel},
      {"exact-solution verification", 30.0, exact_solutions},
      {"constant-limit analytic oracle", 5.0, constant_limit},
      {"Morse and kernel counts at (0.5, 6pi)", 20.0, lemma_counts_check},
      {"index scans I < 0", 300.0, figure_one},
      {"Morse identity on Y0", 120.0, morse_identity},
      {"evolution exactness", 120.0, evolution_exactness},
      {"orbital stability experiment", 300.0, orbital_stability},
      {"spectral/temporal cross-check", 120.0, cross_check},
  };
  return table[id - 1];
}

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kCriterionCount) throw DomainError("criterion id out of range");
  const Entry& e = entry(id);
  CriterionResult r;
  r.id = id;
  r.title = e.title;
  r.budget_seconds = e.budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Verdict v = e.fn();
    r.pass = v.pass;
    r.detail = v.detail;
  } catch (const std::exception& ex) {
    r.pass = false;
    r.detail = std::string("exception: ") + ex.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.seconds > r.budget_seconds) {
    r.pass = false;
    r.detail += "; over time budget " + g(r.budget_seconds) + " s";
  }
  return r;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << " [" << r.id << "] " << r.title << " (" << g(r.seconds)
     << " s): " << r.detail;
  return os.str();
}

}  // namespace mch::cli
