#include "mch/indices.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace mch {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Integrals {
  double E;
  double F;
  double V;
};

// Trapezoid sums of the analytic profile on `points` uniform nodes.
Integrals profile_integrals(const WaveParams& p, int points) {
  const double h = p.L / points;
  double e = 0.0;
  double f = 0.0;
  double v = 0.0;
  for (int j = 0; j < points; ++j) {
    const ProfileValue pv = profile(p, j * h);
    const double s = pv.phi;
    const double d = pv.phi1;
    e += 0.25 * s * s * s * s + 0.5 * s * d * d;
    f += s * s + d * d;
    v += s;
  }
  return {-e * h, 0.5 * f * h, v * h};
}

IndexSample invalid_cell(double k, double L, std::string note) {
  IndexSample s;
  s.k = k;
  s.L = L;
  s.valid = false;
  s.I = s.I_coarse = s.I_direct_v = kNaN;
  s.note = std::move(note);
  return s;
}

IndexSample scan_cell(double k, double L, const IndexOptions& opts) {
  const ValidityReport vr = validity(k, L, opts.validity_points);
  if (!vr.discriminant_ok) return invalid_cell(k, L, "no wave: discriminant <= 0");
  if (!vr.all_ok) return invalid_cell(k, L, "outside validity region");
  try {
    return stability_index(k, L, opts);
  } catch (const AccuracyError& e) {
    IndexSample s = invalid_cell(k, L, std::string("fd gate failed: ") + e.what());
    s.valid = true;
    return s;
  } catch (const DomainError& e) {
    return invalid_cell(k, L, std::string("stencil left the domain: ") + e.what());
  }
}

// Bisection to the resolution of doubles; a is monotone only locally, so the
// caller supplies a bracket with a sign change.
double bisect_mean(double k, double lo, double hi, double a_lo) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double a_mid = wave_params(k, mid).a;
    if (a_mid == 0.0) return mid;
    if ((a_mid < 0.0) == (a_lo < 0.0)) {
      lo = mid;
      a_lo = a_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

IndexSample stability_index(double k, double L, const IndexOptions& opts) {
  if (!(k > 0.0 && k < 1.0)) throw DomainError("stability_index: k must lie in (0, 1)");
  if (opts.quadrature_points < 16) throw DomainError("stability_index: too few quadrature points");
  const double h = fd_step_for(k, opts.h);

  auto f = [&](double kk) {
    const WaveParams p = wave_params(kk, L);
    const Integrals q = profile_integrals(p, opts.quadrature_points);
    return std::array<double, 5>{p.a, p.c, p.A, q.F, q.V};
  };
  const FdResult<5> d = richardson_dk<5>(f, k, h);

  IndexSample s;
  s.k = k;
  s.L = L;
  s.h = h;
  s.valid = validity(k, L, opts.validity_points).all_ok;
  s.components.dA_dk = d.fine[2];
  s.components.dc_dk = d.fine[1];
  s.components.dV_dk = L * d.fine[0];
  s.components.dF_dk = d.fine[3];
  const IndexComponents& c = s.components;
  s.I = c.dA_dk * c.dV_dk - c.dc_dk * c.dF_dk;
  s.I_coarse = d.coarse[2] * L * d.coarse[0] - d.coarse[1] * d.coarse[3];
  s.I_direct_v = c.dA_dk * d.fine[4] - c.dc_dk * c.dF_dk;
  s.fd_rel_change = d.max_rel_change;
  s.I_rel_change = s.I != 0.0 ? std::abs(s.I - s.I_coarse) / std::abs(s.I) : 0.0;
  if (!s.valid) s.note = "outside validity region";
  return s;
}

IndexScan index_scan(Range k, Range L, int nk, int nL, const IndexOptions& opts,
                     unsigned threads) {
  if (nk < 1 || nL < 1) throw DomainError("index_scan: grid sizes must be positive");
  if (!(k.lo >= 0.0 && k.hi < 1.0 && k.lo < k.hi)) {
    throw DomainError("index_scan: k range must lie in (0, 1)");
  }
  if (!(L.lo > 0.0 && L.lo <= L.hi)) throw DomainError("index_scan: bad L range");

  IndexScan out;
  out.nk = nk;
  out.nL = nL;
  const int total = nk * nL;
  out.cells.resize(total);

  auto k_at = [&](int i) { return k.lo + (i + 1) * (k.hi - k.lo) / nk; };
  auto L_at = [&](int j) { return nL == 1 ? L.lo : L.lo + j * (L.hi - L.lo) / (nL - 1); };

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int idx = next++; idx < total; idx = next++) {
      out.cells[idx] = scan_cell(k_at(idx / nL), L_at(idx % nL), opts);
    }
  };
  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = std::min<unsigned>(workers, static_cast<unsigned>(total));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
  }

  ScanSummary& s = out.summary;
  s.min_I = std::numeric_limits<double>::infinity();
  s.max_I = -std::numeric_limits<double>::infinity();
  for (const IndexSample& c : out.cells) {
    if (!c.valid) {
      ++s.count_invalid;
      continue;
    }
    if (std::isnan(c.I)) {
      ++s.count_fd_failed;
      continue;
    }
    ++s.count_valid;
    s.min_I = std::min(s.min_I, c.I);
    s.max_I = std::max(s.max_I, c.I);
    if (c.I > 0.0) ++s.count_positive;
    s.max_fd_rel_change = std::max(s.max_fd_rel_change, c.fd_rel_change);
    s.max_I_rel_change = std::max(s.max_I_rel_change, c.I_rel_change);
  }
  if (s.count_valid == 0) s.min_I = s.max_I = kNaN;
  return out;
}

MorseReport morse_check(const OperatorMatrix& l, bool allow_degenerate_kernel) {
  const SpectralReport full = spectrum(l);
  if (full.z_dim != 1 && !allow_degenerate_kernel) {
    throw RankError("morse_check: z(L) = " + std::to_string(full.z_dim) + ", expected 1");
  }
  const PairingResult pr = inv_one_pairing(l, {full.tol, allow_degenerate_kernel});
  const SpectralReport restricted = restricted_spectrum(l, full.tol);

  MorseReport r;
  r.tol = full.tol;
  r.n_L = full.n_neg;
  r.z_L = full.z_dim;
  r.pairing = pr.value;
  r.pairing_zero = std::abs(pr.value) <= kPairingZero * l.grid.period();
  r.n_Y0_direct = restricted.n_neg;
  r.z_Y0_direct = restricted.z_dim;
  r.n_Y0_formula = r.n_L - ((!r.pairing_zero && r.pairing < 0.0) ? 1 : 0) - (r.pairing_zero ? 1 : 0);
  r.z_Y0_formula = r.z_L + (r.pairing_zero ? 1 : 0);
  r.holds = r.n_Y0_direct == r.n_Y0_formula && r.z_Y0_direct == r.z_Y0_formula;
  return r;
}

MorseReport morse_check(double k, double L, int n) {
  const WaveParams p = wave_params(k, L);
  const ProfileFields f = sample_profile(p, PeriodicGrid(L, n));
  return morse_check(assemble_l(f.phi, f.phi2, p.c));
}

std::optional<double> zero_mean_period(double k, double L_lo, double L_hi) {
  if (!(L_lo > 0.0 && L_lo < L_hi)) throw DomainError("zero_mean_period: bad bracket");
  if (!(discriminant(k, L_lo) > 0.0)) {
    throw DomainError("zero_mean_period: no wave at the lower end of the bracket");
  }
  constexpr int kSamples = 64;
  double prev_L = L_lo;
  double prev_a = wave_params(k, L_lo).a;
  if (prev_a == 0.0) return L_lo;
  for (int i = 1; i <= kSamples; ++i) {
    const double L = L_lo + i * (L_hi - L_lo) / kSamples;
    const double a = wave_params(k, L).a;
    if (a == 0.0) return L;
    if ((a < 0.0) != (prev_a < 0.0)) {
      const double root = bisect_mean(k, prev_L, L, prev_a);
      if (std::abs(wave_params(k, root).a) < 1e-10) return root;
      return std::nullopt;
    }
    prev_L = L;
    prev_a = a;
  }
  return std::nullopt;
}

std::optional<DSecondReport> d_second(double k, double L_lo, double L_hi,
                                      const IndexOptions& opts) {
  const std::optional<double> L_star = zero_mean_period(k, L_lo, L_hi);
  if (!L_star) return std::nullopt;

  auto branch = [&](double kk) {
    const std::optional<double> L = zero_mean_period(kk, L_lo, L_hi);
    if (!L) throw DomainError("d_second: branch leaves the bracket near k=" + std::to_string(kk));
    return *L;
  };
  auto g = [&](double kk) {
    const WaveParams p = wave_params(kk, branch(kk));
    const Integrals q = profile_integrals(p, opts.quadrature_points);
    return std::array<double, 4>{q.E + p.c * q.F, p.c, q.F, p.L};
  };
  // The nested stencil for second derivatives spans k ± 4h.
  const double h = 0.5 * fd_step_for(k, opts.h);
  const FdResult<4> first = richardson_dk<4>(g, k, h);
  const double d_k = first.fine[0];
  const double c_k = first.fine[1];
  const double F_k = first.fine[2];
  if (std::abs(c_k) < 1e-10) {
    throw SingularParametrization("d_second: dc/dk vanishes along the branch");
  }
  auto gk = [&](double kk) {
    const FdResult<4> inner = richardson_dk<4>(g, kk, h);
    return std::array<double, 2>{inner.fine[0], inner.fine[1]};
  };
  const FdResult<2> second = richardson_dk<2>(gk, k, h);

  const WaveParams p = wave_params(k, *L_star);
  DSecondReport r;
  r.k = k;
  r.L_star = *L_star;
  r.c = p.c;
  r.dL_dk = first.fine[3];
  r.d_prime_chain = profile_integrals(p, opts.quadrature_points).F;
  r.d_prime_direct = d_k / c_k;
  const double phi0 = profile(p, 0.0).phi;
  const double edge = -0.25 * phi0 * phi0 * phi0 * phi0 + 0.5 * p.c * phi0 * phi0 - p.A * phi0;
  r.d_prime_corrected = r.d_prime_chain + r.dL_dk / c_k * edge;
  r.d_second = F_k / c_k;
  r.d_second_direct = (second.fine[0] * c_k - d_k * second.fine[1]) / (c_k * c_k * c_k);
  r.rel_disagreement = std::abs(r.d_second_direct - r.d_second) / std::abs(r.d_second);
  return r;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::stable:
      return "stable";
    case Classification::unstable:
      return "unstable";
    case Classification::indeterminate:
      break;
  }
  return "indeterminate";
}

KreinCounts classify_krein(int n_L, double pairing, double D, double pairing_tol, double d_tol) {
  KreinCounts k;
  const bool pairing_zero = std::abs(pairing) <= pairing_tol;
  const bool d_zero = std::abs(D) <= d_tol;
  k.n_L_Y0 = n_L - (pairing < 0.0 && !pairing_zero ? 1 : 0) - (pairing_zero ? 1 : 0);
  k.n_D = D < 0.0 && !d_zero ? 1 : 0;
  k.K_Ham = k.n_L_Y0 - k.n_D;
  if (pairing_zero || d_zero || std::isnan(pairing) || std::isnan(D)) {
    k.classification = Classification::indeterminate;
  } else if (k.K_Ham == 0) {
    k.classification = Classification::stable;
  } else if (k.K_Ham == 1) {
    k.classification = Classification::unstable;
  } else {
    k.classification = Classification::indeterminate;
  }
  return k;
}

KreinReport krein_index(double k, double L_lo, double L_hi, int n, const IndexOptions& opts) {
  KreinReport r;
  const std::optional<double> L_star = zero_mean_period(k, L_lo, L_hi);
  if (!L_star) {
    r.note = "no zero-mean branch in the bracket";
    return r;
  }
  r.branch_found = true;
  r.L_star = *L_star;

  const WaveParams p = wave_params(k, *L_star);
  const ProfileFields f = sample_profile(p, PeriodicGrid(*L_star, n));
  const OperatorMatrix l = assemble_l(f.phi, f.phi2, p.c);
  const bool elliptic = validity(p, n).ineq_ii_margin < 0.0;
  MorseReport m;
  try {
    m = morse_check(l);
  } catch (const RankError& e) {
    const SpectralReport s = spectrum(l);
    r.n_L = s.n_neg;
    r.z_L = s.z_dim;
    r.note = e.what();
    return r;
  }
  r.n_L = m.n_L;
  r.z_L = m.z_L;
  r.n_L_Y0 = m.n_Y0_direct;
  r.n_L_Y0_formula = m.n_Y0_formula;
  r.z_L_Y0 = m.z_Y0_direct;
  r.pairing = m.pairing;

  std::optional<DSecondReport> ds;
  try {
    ds = d_second(k, L_lo, L_hi, opts);
  } catch (const DomainError& e) {
    r.note = e.what();
  } catch (const NumericalError& e) {
    r.note = e.what();
  }
  if (!ds) {
    if (r.note.empty()) r.note = "d''(c) unavailable";
    r.D = kNaN;
    return r;
  }
  r.D = -ds->d_second;
  const KreinCounts kc = classify_krein(m.n_L, m.pairing, r.D, kPairingZero * *L_star, 1e-10);
  r.n_D = kc.n_D;
  r.K_Ham = r.n_L_Y0 - kc.n_D;
  r.classification = kc.classification;
  if (!elliptic) {
    // (φ − c)∂² changes type: the negative count grows with n.
    r.classification = Classification::indeterminate;
    r.note = "phi - c > 0 somewhere on the branch; L is not elliptic and its counts depend on n";
  } else if (kc.n_L_Y0 != r.n_L_Y0) {
    r.classification = Classification::indeterminate;
    r.note = "restricted count disagrees with the pairing formula";
  }
  return r;
}

}  // namespace mch
