#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mch/evolve.hpp"
#include "mch/linop.hpp"

using namespace mch;
using std::numbers::pi;

namespace {

PeriodicField smooth_data(int n) {
  const PeriodicGrid g(2 * pi, n);
  return sample([](double x) { return 0.3 * (std::cos(x) + 0.5 * std::sin(2 * x)) + 0.3; }, g);
}

double max_abs_diff(const PeriodicField& a, const PeriodicField& b) {
  return (a - b).sup_norm();
}

struct Drifts {
  double E;
  double F;
};

Drifts final_drift(const PeriodicField& u0, double dt) {
  EvolutionConfig cfg;
  cfg.dt = dt;
  cfg.t_end = 0.5;
  const RunResult r = run(u0, cfg);
  const Functionals a = functionals(u0);
  const Functionals b = functionals(r.final_state);
  return {std::abs(b.E - a.E) / std::abs(a.E), std::abs(b.F - a.F) / std::abs(a.F)};
}

}  // namespace

TEST(Rhs, VanishesOnConstants) {
  const PeriodicField u = PeriodicField::constant(PeriodicGrid(2 * pi, 32), 0.7);
  EXPECT_LT(rhs(u).sup_norm(), 1e-14);
}

// For u = ε cos x the right side is ∂ₓ(1 − ∂²)⁻¹ applied to a trigonometric
// polynomial that can be expanded by hand.
TEST(Rhs, MatchesHandExpansion) {
  const double e = 0.2;
  const PeriodicGrid g(2 * pi, 32);
  const PeriodicField u = sample([e](double x) { return e * std::cos(x); }, g);
  // u u_xx + u_x²/2 − u³ = −e²cos² + e²sin²/2 − e³cos³
  //   = −e²/4 − (3e²/4) cos 2x − e³(3cos x + cos 3x)/4.
  // ∂ₓ(1 − ∂²)⁻¹ maps cos mx to −m sin mx / (1 + m²).
  const PeriodicField expect = sample(
      [e](double x) {
        return (3 * e * e / 4) * 2 * std::sin(2 * x) / 5 +
               (e * e * e / 4) * (3 * std::sin(x) / 2 + 3 * std::sin(3 * x) / 10);
      },
      g);
  EXPECT_LT(max_abs_diff(rhs(u), expect), 1e-14);
}

TEST(Rhs, PaddingBelowTwoRejected) {
  EXPECT_THROW(rhs(smooth_data(32), 1), DomainError);
}

TEST(Run, ConfigValidation) {
  EvolutionConfig cfg;
  cfg.t_end = 0.0;
  EXPECT_THROW(validate(cfg), DomainError);
  cfg = {};
  cfg.dealias_pad = 1;
  EXPECT_THROW(validate(cfg), DomainError);
  cfg = {};
  cfg.monitor_every = 0;
  EXPECT_THROW(validate(cfg), DomainError);
}

TEST(Run, ConstantIsEquilibrium) {
  const PeriodicField u0 = PeriodicField::constant(PeriodicGrid(2 * pi, 32), -1.0);
  EvolutionConfig cfg;
  cfg.t_end = 2.0;
  const RunResult r = run(u0, cfg);
  EXPECT_EQ(r.report.terminated, Termination::completed);
  EXPECT_LT(max_abs_diff(r.final_state, u0), 1e-13);
}

TEST(Run, HitsEndTimeExactly) {
  EvolutionConfig cfg;
  cfg.dt = 0.3;
  cfg.t_end = 1.0;
  cfg.monitor_every = 1;
  const RunResult r = run(smooth_data(32), cfg);
  EXPECT_DOUBLE_EQ(r.report.times.back(), 1.0);
  EXPECT_EQ(r.report.steps, 4);
}

TEST(Run, TravelingWaveTranslates) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicGrid g(6 * pi, 128);
  const PeriodicField phi = sample_profile(p, g).phi;
  EvolutionConfig cfg;
  cfg.t_end = 2.0;
  const RunResult r = run(phi, cfg);
  EXPECT_LT(max_abs_diff(r.final_state, shift(phi, -p.c * cfg.t_end)), 1e-5);
  EXPECT_LT(r.report.max_drift(), 1e-8);
}

TEST(Run, MeanConserved) {
  EvolutionConfig cfg;
  cfg.t_end = 1.0;
  const RunResult r = run(smooth_data(64), cfg);
  for (double d : r.report.drift_V) EXPECT_LT(d, 1e-12);
}

TEST(Run, TranslationEquivariant) {
  const PeriodicField u0 = smooth_data(64);
  const double s = 0.7;
  EvolutionConfig cfg;
  cfg.t_end = 0.5;
  const RunResult a = run(u0, cfg);
  const RunResult b = run(shift(u0, s), cfg);
  EXPECT_LT(max_abs_diff(shift(a.final_state, s), b.final_state), 1e-8);
}

TEST(Run, FourthOrderInTime) {
  const PeriodicField u0 = smooth_data(64);
  const Drifts coarse = final_drift(u0, 0.05);
  const Drifts fine = final_drift(u0, 0.025);
  EXPECT_GT(std::log2(coarse.F / fine.F), 3.5);
  EXPECT_GT(std::log2(coarse.E / fine.E), 3.5);
}

TEST(Run, BlowupRecorded) {
  EvolutionConfig cfg;
  cfg.t_end = 1.0;
  cfg.blowup_threshold = 0.5;
  const RunResult r = run(smooth_data(32), cfg);
  EXPECT_EQ(r.report.terminated, Termination::blowup);
}

TEST(Run, SnapshotsAndObserver) {
  EvolutionConfig cfg;
  cfg.dt = 0.01;
  cfg.t_end = 0.1;
  cfg.monitor_every = 5;
  cfg.keep_snapshots = true;
  int calls = 0;
  RunMonitor mon;
  mon.observer = [&calls](double, const PeriodicField&) { ++calls; };
  const RunResult r = run(smooth_data(32), cfg, mon);
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(r.snapshots.size(), 3u);
  EXPECT_EQ(r.report.times.size(), 3u);
}

TEST(Linearized, ConstantCaseConservesNorm) {
  const WaveParams p = constant_wave(2 * pi);
  const PeriodicGrid g(2 * pi, 32);
  EvolutionConfig cfg;
  cfg.t_end = 1.0;
  const LinearGrowthReport r = linearized_run(random_perturbation(g, 5, 4), p, cfg);
  EXPECT_LT(r.norm_ratio_max_dev, 1e-6);
}

TEST(Linearized, TranslationModeIsStationary) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicGrid g(6 * pi, 128);
  const ProfileFields f = sample_profile(p, g);
  const OperatorMatrix a = assemble_dxl(f.phi, f.phi2, p.c);
  const LinearGrowthReport r = linear_growth(a.matrix, f.phi1, 5.0);
  EXPECT_LT(r.norm_ratio_max_dev, 1e-6);
}

TEST(Linearized, GrowthMatchesSpectrum) {
  const WaveParams p = wave_params(0.9, 10 * pi);
  const PeriodicGrid g(10 * pi, 64);
  const ProfileFields f = sample_profile(p, g);
  const OperatorMatrix a = assemble_dxl(f.phi, f.phi2, p.c);
  const double re = restricted_spectrum(a).max_real_part;
  ASSERT_GT(re, 0.01);
  const LinearGrowthReport r = linear_growth(a.matrix, random_perturbation(g, 2, 8), 400.0);
  EXPECT_NEAR(r.rate_fit, re, 0.05 * re);
}

TEST(Perturbation, NormalizedAndDeterministic) {
  const PeriodicGrid g(4 * pi, 64);
  const PeriodicField a = random_perturbation(g, 42);
  const PeriodicField b = random_perturbation(g, 42);
  const PeriodicField c = random_perturbation(g, 43);
  EXPECT_NEAR(h1_norm(a), 1.0, 1e-12);
  EXPECT_EQ(max_abs_diff(a, b), 0.0);
  EXPECT_GT(max_abs_diff(a, c), 1e-3);
  EXPECT_LT(std::abs(integrate(a)), 1e-12);
}

TEST(Orbital, UnperturbedWaveStaysOnOrbit) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  EvolutionConfig cfg;
  cfg.t_end = 5.0;
  const RunResult r = orbital_experiment(p, 0.0, 1, 128, cfg);
  EXPECT_EQ(r.report.terminated, Termination::completed);
  EXPECT_LT(r.report.max_rho(), 1e-8);
}

TEST(Orbital, SmallPerturbationStaysSmall) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  EvolutionConfig cfg;
  cfg.t_end = 10.0;
  const RunResult r = orbital_experiment(p, 1e-3, 1, 128, cfg);
  EXPECT_EQ(r.report.terminated, Termination::completed);
  EXPECT_LT(r.report.max_rho(), 1e-2);
}
