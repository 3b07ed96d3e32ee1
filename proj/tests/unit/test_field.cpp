#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mch/evolve.hpp"
#include "mch/field.hpp"

using namespace mch;
using std::numbers::pi;

TEST(Grid, Validation) {
  EXPECT_THROW(PeriodicGrid(1.0, 15), DomainError);
  EXPECT_THROW(PeriodicGrid(1.0, 8), DomainError);
  EXPECT_THROW(PeriodicGrid(0.0, 16), DomainError);
  const PeriodicGrid g(2 * pi, 32);
  EXPECT_DOUBLE_EQ(g.spacing(), 2 * pi / 32);
  EXPECT_DOUBLE_EQ(g.wavenumber(3), 3.0);
}

TEST(Field, RejectsNonFiniteAndMismatchedGrids) {
  const PeriodicGrid g(1.0, 16);
  EXPECT_THROW(sample([](double x) { return 1.0 / (x - 0.5); }, g), DataError);
  EXPECT_THROW(PeriodicField(g, std::vector<double>(15, 0.0)), DataError);
  const PeriodicField a = PeriodicField::constant(g, 1.0);
  const PeriodicField b = PeriodicField::constant(PeriodicGrid(2.0, 16), 1.0);
  EXPECT_THROW(a + b, DomainError);
}

TEST(Field, SpectralDerivativesAreExactOnTrigPolynomials) {
  const PeriodicGrid g(3.0, 64);
  const double w = 2 * pi / 3.0;
  const PeriodicField u = sample([&](double x) { return std::sin(5 * w * x) + std::cos(2 * w * x); }, g);
  const PeriodicField d1 = sample([&](double x) { return 5 * w * std::cos(5 * w * x) - 2 * w * std::sin(2 * w * x); }, g);
  const PeriodicField d2 = sample([&](double x) { return -25 * w * w * std::sin(5 * w * x) - 4 * w * w * std::cos(2 * w * x); }, g);
  EXPECT_LT((derivative(u, 1) - d1).sup_norm(), 1e-11);
  EXPECT_LT((derivative(u, 2) - d2).sup_norm(), 1e-10);
  EXPECT_LT((derivative(u, 3) - derivative(derivative(u, 2), 1)).sup_norm(), 1e-9);
  EXPECT_THROW(derivative(u, 4), DomainError);
}

TEST(Field, NyquistModeConvention) {
  const PeriodicGrid g(2 * pi, 16);
  const PeriodicField nyq = sample([](double x) { return std::cos(8 * x); }, g);
  EXPECT_LT(derivative(nyq, 1).sup_norm(), 1e-13);
  EXPECT_LT((derivative(nyq, 2) + 64.0 * nyq).sup_norm(), 1e-11);
}

TEST(Field, IntegralsAndNorms) {
  const PeriodicGrid g(2 * pi, 64);
  const PeriodicField u = sample([](double x) { return 1.0 + std::cos(3 * x); }, g);
  EXPECT_NEAR(integrate(u), 2 * pi, 1e-13);
  EXPECT_NEAR(l2_inner(u, u), 2 * pi + pi, 1e-12);
  // ‖u‖²_{H¹} = 2F(u).
  EXPECT_NEAR(h1_norm(u) * h1_norm(u), 2.0 * functionals(u).F, 1e-12);
  EXPECT_NEAR(h1_norm(u) * h1_norm(u), 3 * pi + 9 * pi, 1e-11);
}

TEST(Field, FunctionalsOfConstant) {
  const PeriodicField u = PeriodicField::constant(PeriodicGrid(4.0, 32), -1.5);
  const Functionals f = functionals(u);
  EXPECT_NEAR(f.V, -6.0, 1e-14);
  EXPECT_NEAR(f.F, 0.5 * 2.25 * 4.0, 1e-14);
  EXPECT_NEAR(f.E, -std::pow(1.5, 4) / 4 * 4.0, 1e-13);
  EXPECT_NEAR(augmented(u, 0.3, 0.2), f.E + 0.3 * f.F - 0.2 * f.V, 1e-14);
}

TEST(Field, ShiftIsExactAndComposes) {
  const PeriodicGrid g(5.0, 64);
  const double w = 2 * pi / 5.0;
  auto f = [&](double x) { return std::cos(w * x) + 0.3 * std::sin(7 * w * x); };
  const PeriodicField u = sample(f, g);
  const double s = 0.731;
  EXPECT_LT((shift(u, s) - sample([&](double x) { return f(x + s); }, g)).sup_norm(), 1e-13);
  EXPECT_LT((shift(shift(u, s), -s) - u).sup_norm(), 1e-13);
  EXPECT_LT((shift(u, 5.0) - u).sup_norm(), 1e-13);
}

TEST(Semidistance, RecoversTranslates) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicGrid g(p.L, 256);
  const PeriodicField phi = sample_profile(p, g).phi;
  for (double s : {0.0, 0.1234, 3.3, 17.0}) {
    const SemiDistance d = semidistance(shift(phi, s), phi);
    EXPECT_LT(d.rho, 1e-8) << s;
    const double expect = std::fmod(s, p.L);
    EXPECT_NEAR(std::remainder(d.shift - expect, p.L), 0.0, 1e-6) << s;
  }
}

TEST(Semidistance, IsBelowUnshiftedDistanceAndShiftInvariant) {
  const WaveParams p = wave_params(0.6, 7 * pi);
  const PeriodicGrid g(p.L, 128);
  const PeriodicField phi = sample_profile(p, g).phi;
  const PeriodicField u = phi + 0.05 * random_perturbation(g, 9);
  const double rho = semidistance(u, p).rho;
  EXPECT_LE(rho, h1_norm(u - phi) + 1e-14);
  EXPECT_GT(rho, 0.0);
  EXPECT_NEAR(semidistance(shift(u, 2.2), phi).rho, rho, 1e-9);
  EXPECT_THROW(semidistance(u, wave_params(0.6, 8 * pi)), DomainError);
}

TEST(Lyapunov, VanishesAtTheWaveAndIsTranslationInvariant) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicGrid g(p.L, 256);
  const PeriodicField phi = sample_profile(p, g).phi;
  const ParamDerivatives d = params_dk(p.k, p.L, 1e-3);
  const QCoefficients q{d.dA, d.dc};
  EXPECT_NEAR(lyapunov(phi, p, 10.0, q), 0.0, 1e-12);
  const PeriodicField u = phi + 0.01 * random_perturbation(g, 4);
  EXPECT_NEAR(lyapunov(shift(u, 1.1), p, 10.0, q), lyapunov(u, p, 10.0, q), 1e-11);
  EXPECT_THROW(lyapunov(u, p, 0.0, q), DomainError);
}

TEST(Lyapunov, AugmentedFunctionalIsStationaryAtTheWave) {
  // φ is a critical point of G: first variations vanish to roundoff.
  const WaveParams p = wave_params(0.5, 6 * pi);
  const PeriodicGrid g(p.L, 256);
  const PeriodicField phi = sample_profile(p, g).phi;
  const PeriodicField w = random_perturbation(g, 5);
  const double eps = 1e-4;
  const double slope = (augmented(phi + eps * w, p.c, p.A) - augmented(phi - eps * w, p.c, p.A)) / (2 * eps);
  EXPECT_LT(std::abs(slope), 1e-8);
}
