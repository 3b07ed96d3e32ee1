#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mch/linop.hpp"
#include "oracles.hpp"

using namespace mch;
using std::numbers::pi;

namespace {

struct Assembled {
  WaveParams p;
  ProfileFields f;
  OperatorMatrix l;
};

Assembled at(double k, double L, int n) {
  const WaveParams p = wave_params(k, L);
  ProfileFields f = sample_profile(p, PeriodicGrid(L, n));
  OperatorMatrix l = assemble_l(f.phi, f.phi2, p.c);
  return {p, std::move(f), std::move(l)};
}

OperatorMatrix constant_operator(int n) {
  const PeriodicGrid g(2 * pi, n);
  return assemble_l(PeriodicField::constant(g, -1.0), PeriodicField::constant(g, 0.0), 1.0);
}

Eigen::VectorXd vec(const PeriodicField& f) {
  Eigen::VectorXd v(f.size());
  for (int j = 0; j < f.size(); ++j) v[j] = f[j];
  return v;
}

}  // namespace

TEST(Assembly, ConstantCaseIsDiagonalInFourier) {
  const OperatorMatrix l = constant_operator(64);
  const PeriodicGrid& g = l.grid;
  for (int m : {0, 1, 5, 31}) {
    const PeriodicField c = sample([&](double x) { return std::cos(m * x); }, g);
    const Eigen::VectorXd lc = l.matrix * vec(c);
    EXPECT_LT((lc - (2.0 * m * m - 2.0) * vec(c)).cwiseAbs().maxCoeff(), 1e-10) << m;
  }
}

TEST(Assembly, SymmetricAndGateRecorded) {
  const Assembled a = at(0.5, 6 * pi, 256);
  EXPECT_LT((a.l.matrix - a.l.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(a.l.divergence_defect, kAssemblyGate);
  EXPECT_EQ(a.l.kind, OperatorKind::selfadjoint_L);
}

TEST(Assembly, DerivativeOfProfileIsInKernel) {
  for (const auto& [k, L] : oracle::valid_points(5, 3)) {
    const Assembled a = at(k, L, 256);
    const Eigen::VectorXd d = vec(a.f.phi1);
    EXPECT_LT((a.l.matrix * d).norm() / d.norm(), 1e-6) << k << " " << L;
  }
}

TEST(Assembly, ActionOnConstant) {
  const Assembled a = at(0.6, 7 * pi, 256);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(256);
  const Eigen::VectorXd got = a.l.matrix * one;
  for (int j = 0; j < 256; ++j) {
    const double expect = a.p.c - 3 * a.f.phi[j] * a.f.phi[j] + a.f.phi2[j];
    EXPECT_NEAR(got[j], expect, 1e-10);
  }
}

TEST(Assembly, InconsistentSecondDerivativeIsRejected) {
  const WaveParams p = wave_params(0.5, 6 * pi);
  const ProfileFields f = sample_profile(p, PeriodicGrid(p.L, 128));
  EXPECT_THROW(assemble_l(f.phi, 1.01 * f.phi2, p.c), AssemblyError);
  EXPECT_THROW(assemble_l(f.phi, f.phi1, p.c), AssemblyError);
}

TEST(Spectrum, ConstantCaseEigenvalues) {
  const SpectralReport s = spectrum(constant_operator(128));
  std::vector<double> expected;
  for (int m = -63; m <= 64; ++m) expected.push_back(2.0 * m * m - 2.0);
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(s.eigenvalues.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    EXPECT_NEAR(s.eigenvalues[i].real(), expected[i], 1e-8);
  }
  EXPECT_EQ(s.n_neg, 1);
  EXPECT_EQ(s.z_dim, 2);
  EXPECT_EQ(s.n_neg + s.z_dim + s.n_pos, 128);
}

TEST(Spectrum, OneNegativeAndSimpleKernelAtReferenceWave) {
  const Assembled a = at(0.5, 6 * pi, 256);
  const SpectralReport s = spectrum(a.l);
  EXPECT_EQ(s.n_neg, 1);
  EXPECT_EQ(s.z_dim, 1);
  const Eigen::VectorXd d = vec(a.f.phi1).normalized();
  EXPECT_GT(std::abs(s.lowest_vectors.col(1).dot(d)), 0.999999);
}

TEST(Spectrum, CountsAgreeWithFiniteDifferenceOracle) {
  for (const auto& [k, L] : oracle::valid_points(4, 21)) {
    const Assembled a = at(k, L, 256);
    const SpectralReport s = spectrum(a.l);
    const Eigen::VectorXd fd = oracle::fd_sturm_liouville(a.p, 1024);
    // Tolerance for the O(h²) oracle: a tenth of the smallest nonzero spectral |λ|.
    double gap = INFINITY;
    for (const auto& l : s.eigenvalues) {
      if (std::abs(l) > s.tol) gap = std::min(gap, std::abs(l));
    }
    int neg = 0, zero = 0;
    for (Eigen::Index i = 0; i < fd.size(); ++i) {
      if (fd[i] < -0.1 * gap) ++neg;
      else if (std::abs(fd[i]) <= 0.1 * gap) ++zero;
    }
    EXPECT_EQ(neg, s.n_neg) << k << " " << L;
    EXPECT_EQ(zero, s.z_dim) << k << " " << L;
    EXPECT_NEAR(fd[0], s.eigenvalues[0].real(), 1e-3 * std::abs(fd[0]) + 1e-6);
  }
}

TEST(Spectrum, LowEigenvaluesConvergeUnderRefinement) {
  const SpectralReport a = spectrum(at(0.5, 6 * pi, 256).l);
  const SpectralReport b = spectrum(at(0.5, 6 * pi, 512).l);
  for (int i = 0; i < 5; ++i) {
    EXPECT_NEAR(a.eigenvalues[i].real(), b.eigenvalues[i].real(), 1e-8) << i;
  }
}

TEST(Spectrum, CountsStableAcrossToleranceWindow) {
  for (const auto& [k, L] : oracle::valid_points(6, 5)) {
    const OperatorMatrix l = at(k, L, 256).l;
    const SpectralReport ref = spectrum(l);
    for (double rel : {1e-14, 1e-13, 1e-12, 1e-11, 1e-10}) {
      const SpectralReport s = spectrum(l, rel * ref.spectral_radius);
      EXPECT_EQ(s.n_neg, 1) << k << " " << L << " rel=" << rel;
      EXPECT_EQ(s.z_dim, 1) << k << " " << L << " rel=" << rel;
    }
  }
}

TEST(Spectrum, RadiusScaledToleranceAboveWindowMisclassifies) {
  // The spectral radius is set by the Nyquist symbol; 1e-4 of it exceeds the
  // negative eigenvalue of the reference wave and hides it in the "kernel".
  const OperatorMatrix l = at(0.5, 6 * pi, 256).l;
  const SpectralReport ref = spectrum(l);
  EXPECT_GT(1e-4 * ref.spectral_radius, std::abs(ref.eigenvalues[0].real()));
  const SpectralReport loose = spectrum(l, 1e-4 * ref.spectral_radius);
  EXPECT_EQ(loose.n_neg, 0);
  EXPECT_GT(loose.z_dim, 1);
}

TEST(Spectrum, RejectsNonPositiveTolerance) {
  EXPECT_THROW(spectrum(constant_operator(32), 0.0), DomainError);
}

TEST(Restricted, ConstantCaseDropsTheMeanMode) {
  const OperatorMatrix l = constant_operator(64);
  const SpectralReport r = restricted_spectrum(l);
  EXPECT_EQ(r.eigenvalues.size(), 63u);
  EXPECT_NEAR(r.eigenvalues[0].real(), 0.0, 1e-10);
  EXPECT_NEAR(r.eigenvalues[1].real(), 0.0, 1e-10);
  EXPECT_NEAR(r.eigenvalues[2].real(), 6.0, 1e-10);
  EXPECT_EQ(r.n_neg, 0);
}

TEST(Restricted, ConstantEvolutionSpectrumIsImaginary) {
  const PeriodicGrid g(2 * pi, 64);
  const OperatorMatrix d = assemble_dxl(PeriodicField::constant(g, -1.0), PeriodicField::constant(g, 0.0), 1.0);
  const SpectralReport r = restricted_spectrum(d);
  std::vector<double> imag;
  for (const auto& l : r.eigenvalues) {
    EXPECT_LT(std::abs(l.real()), 1e-8);
    imag.push_back(std::abs(l.imag()));
  }
  std::sort(imag.begin(), imag.end());
  // |m (2m² − 2)| for m = ±1, ±2, ±3: 0, 0, 12, 12, 48, 48, plus a third
  // zero from the Nyquist mode, which ∂ₓ annihilates.
  EXPECT_NEAR(imag[2], 0.0, 1e-8);
  EXPECT_NEAR(imag[3], 12.0, 1e-8);
  EXPECT_NEAR(imag[5], 48.0, 1e-8);
}

TEST(Evolution, ConstantRowsAndHamiltonianSymmetry) {
  const Assembled a = at(0.5, 6 * pi, 128);
  const OperatorMatrix d = assemble_dxl(a.f.phi, a.f.phi2, a.p.c);
  EXPECT_EQ(d.kind, OperatorKind::evolution_dxL);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(128);
  const PeriodicField pot = sample(
      [&](double x) {
        const ProfileValue v = profile(a.p, x);
        return a.p.c - 3 * v.phi * v.phi + v.phi2;
      },
      a.f.phi.grid());
  EXPECT_LT((d.matrix * one - vec(derivative(pot, 1))).cwiseAbs().maxCoeff(), 1e-8);

  for (const auto& [k, L] : oracle::valid_points(3, 8)) {
    const Assembled b = at(k, L, 96);
    const SpectralReport s = spectrum(assemble_dxl(b.f.phi, b.f.phi2, b.p.c));
    for (const auto& l : s.eigenvalues) {
      const std::complex<double> mirror(-l.real(), l.imag());
      double best = INFINITY;
      for (const auto& m : s.eigenvalues) best = std::min(best, std::abs(m - mirror));
      EXPECT_LT(best, 1e-6 * std::max(1.0, std::abs(l)));
    }
  }
}

TEST(Pairing, ConstantCaseWithOverride) {
  const OperatorMatrix l = constant_operator(128);
  EXPECT_THROW(inv_one_pairing(l), RankError);
  const PairingResult r = inv_one_pairing(l, {std::nullopt, true});
  EXPECT_NEAR(r.value, -pi, 1e-8);
  EXPECT_EQ(r.kernel_dim, 2);
  EXPECT_LT(r.residual, 1e-8);
}

TEST(Pairing, StableUnderRefinementAndSolved) {
  const PairingResult a = inv_one_pairing(at(0.5, 6 * pi, 256).l);
  const PairingResult b = inv_one_pairing(at(0.5, 6 * pi, 512).l);
  EXPECT_TRUE(std::isfinite(a.value));
  EXPECT_NEAR(a.value, b.value, 1e-6 * std::abs(a.value));
  EXPECT_LT(a.residual, 1e-8);
  EXPECT_EQ(a.kernel_dim, 1);
}

TEST(Pairing, KernelIsOrthogonalToConstants) {
  const Assembled a = at(0.7, 8 * pi, 256);
  EXPECT_LT(std::abs(integrate(a.f.phi1)), 1e-12);
}
