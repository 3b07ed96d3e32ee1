#include "mch/linop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

namespace mch {
namespace {

Eigen::VectorXd as_vector(const PeriodicField& f) {
  Eigen::VectorXd v(f.size());
  for (int j = 0; j < f.size(); ++j) v[j] = f[j];
  return v;
}

// Orthonormal real Fourier basis of the zero-mean subspace: cos/sin pairs for
// 1 ≤ m < n/2 and the alternating Nyquist vector.
Eigen::MatrixXd zero_mean_basis(int n) {
  const int half = n / 2;
  Eigen::MatrixXd q(n, n - 1);
  const double s2 = std::sqrt(2.0 / n);
  for (int m = 1; m < half; ++m) {
    for (int j = 0; j < n; ++j) {
      const double t = 2.0 * std::numbers::pi * m * j / n;
      q(j, 2 * m - 2) = s2 * std::cos(t);
      q(j, 2 * m - 1) = s2 * std::sin(t);
    }
  }
  const double s1 = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) q(j, n - 2) = (j % 2 == 0) ? s1 : -s1;
  return q;
}

double default_tol(double radius, std::optional<double> tol) {
  if (tol) {
    if (!(*tol > 0.0)) throw DomainError("spectrum: tol must be positive");
    return *tol;
  }
  return kDefaultRelativeTol * std::max(radius, 1e-300);
}

void classify(SpectralReport& r) {
  r.n_neg = r.z_dim = r.n_pos = r.n_center = 0;
  std::vector<double> mags;
  mags.reserve(r.eigenvalues.size());
  r.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& l : r.eigenvalues) {
    mags.push_back(std::abs(l));
    r.max_real_part = std::max(r.max_real_part, l.real());
    if (std::abs(l) <= r.tol) {
      ++r.z_dim;
    } else if (l.real() < -r.tol) {
      ++r.n_neg;
    } else if (l.real() > r.tol) {
      ++r.n_pos;
    } else {
      ++r.n_center;
    }
  }
  std::sort(mags.begin(), mags.end());
  r.kernel_gap = mags.size() > 1 ? mags[1] : 0.0;
}

SpectralReport symmetric_report(const Eigen::MatrixXd& a, const Eigen::MatrixXd* basis,
                                const PeriodicGrid& grid, std::optional<double> tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  SpectralReport r{.kind = OperatorKind::selfadjoint_L, .grid = grid};
  r.spectral_radius = ev.cwiseAbs().maxCoeff();
  r.tol = default_tol(r.spectral_radius, tol);
  r.eigenvalues.reserve(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) r.eigenvalues.emplace_back(ev[i], 0.0);
  classify(r);
  const Eigen::Index kept =
      std::min<Eigen::Index>(ev.size(), static_cast<Eigen::Index>(r.n_neg + r.z_dim + 4));
  const Eigen::MatrixXd low = es.eigenvectors().leftCols(kept);
  r.lowest_vectors = basis ? Eigen::MatrixXd(*basis * low) : low;
  return r;
}

SpectralReport general_report(const Eigen::MatrixXd& a, const PeriodicGrid& grid,
                              std::optional<double> tol) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  SpectralReport r{.kind = OperatorKind::evolution_dxL, .grid = grid};
  const Eigen::VectorXcd& ev = es.eigenvalues();
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  std::sort(r.eigenvalues.begin(), r.eigenvalues.end(), [](const auto& x, const auto& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  r.spectral_radius = ev.cwiseAbs().maxCoeff();
  r.tol = default_tol(r.spectral_radius, tol);
  classify(r);
  return r;
}

}  // namespace

Eigen::MatrixXd differentiation_matrix(const PeriodicGrid& grid, int order) {
  if (order != 1 && order != 2) throw DomainError("differentiation_matrix: order must be 1 or 2");
  const int n = grid.size();
  Eigen::MatrixXd d(n, n);
  std::vector<double> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const PeriodicField col = derivative(PeriodicField(grid, e), order);
    for (int i = 0; i < n; ++i) d(i, j) = col[i];
    e[j] = 0.0;
  }
  return d;
}

OperatorMatrix assemble_l(const PeriodicField& phi, const PeriodicField& phi2, double c) {
  if (!(phi.grid() == phi2.grid())) throw DomainError("assemble_l: φ and φ″ on different grids");
  if (!std::isfinite(c)) throw DomainError("assemble_l: non-finite speed");
  const PeriodicGrid& grid = phi.grid();
  const int n = grid.size();

  const Eigen::MatrixXd d1 = differentiation_matrix(grid, 1);
  const Eigen::MatrixXd d2 = differentiation_matrix(grid, 2);
  const Eigen::VectorXd p = as_vector(phi).array() - c;
  const Eigen::VectorXd f = as_vector(phi);
  const Eigen::VectorXd f2 = as_vector(phi2);
  const Eigen::VectorXd potential = (c - 3.0 * f.array().square() + f2.array()).matrix();

  Eigen::MatrixXd m = 0.5 * (p.asDiagonal() * d2 + d2 * p.asDiagonal());
  m.diagonal() += potential - 0.5 * f2;

  // Divergence-form identity on resolved probes.
  const int modes = std::min(8, n / 8);
  double defect = 0.0;
  for (int mode = 0; mode <= modes; ++mode) {
    for (int parity = 0; parity < 2; ++parity) {
      if (mode == 0 && parity == 1) continue;
      Eigen::VectorXd v(n);
      for (int j = 0; j < n; ++j) {
        const double t = 2.0 * std::numbers::pi * mode * j / n;
        v[j] = parity == 0 ? std::cos(t) : std::sin(t);
      }
      const Eigen::VectorXd divergence =
          d1 * (p.asDiagonal() * (d1 * v)) + potential.asDiagonal() * v;
      defect = std::max(defect, (m * v - divergence).cwiseAbs().maxCoeff());
    }
  }
  if (!(defect < kAssemblyGate)) {
    throw AssemblyError("assemble_l: divergence-form defect " + std::to_string(defect) +
                        " exceeds gate; φ″ is inconsistent with φ or under-resolved");
  }

  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return {std::move(sym), grid, OperatorKind::selfadjoint_L, defect, asym};
}

OperatorMatrix assemble_dxl(const PeriodicField& phi, const PeriodicField& phi2, double c) {
  OperatorMatrix l = assemble_l(phi, phi2, c);
  l.matrix = differentiation_matrix(l.grid, 1) * l.matrix;
  l.kind = OperatorKind::evolution_dxL;
  return l;
}

SpectralReport spectrum(const OperatorMatrix& m, std::optional<double> tol) {
  if (m.kind == OperatorKind::selfadjoint_L) return symmetric_report(m.matrix, nullptr, m.grid, tol);
  return general_report(m.matrix, m.grid, tol);
}

SpectralReport restricted_spectrum(const OperatorMatrix& m, std::optional<double> tol) {
  const Eigen::MatrixXd q = zero_mean_basis(m.grid.size());
  Eigen::MatrixXd a = q.transpose() * m.matrix * q;
  if (m.kind == OperatorKind::selfadjoint_L) {
    a = 0.5 * (a + a.transpose());
    return symmetric_report(a, &q, m.grid, tol);
  }
  return general_report(a, m.grid, tol);
}

PairingResult inv_one_pairing(const OperatorMatrix& m, const PairingOptions& opts) {
  if (m.kind != OperatorKind::selfadjoint_L) {
    throw DomainError("inv_one_pairing: needs the selfadjoint operator");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.matrix);
  if (es.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const Eigen::MatrixXd& vecs = es.eigenvectors();
  const double tol = default_tol(ev.cwiseAbs().maxCoeff(), opts.tol);

  const int n = m.grid.size();
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd kernel_part = Eigen::VectorXd::Zero(n);
  int kernel = 0;
  for (int i = 0; i < n; ++i) {
    const double coeff = vecs.col(i).dot(one);
    if (std::abs(ev[i]) <= tol) {
      ++kernel;
      kernel_part += coeff * vecs.col(i);
    } else {
      w += (coeff / ev[i]) * vecs.col(i);
    }
  }
  if (kernel != 1 && !opts.allow_degenerate_kernel) {
    throw RankError("inv_one_pairing: kernel dimension " + std::to_string(kernel) +
                    " (expected 1)");
  }
  PairingResult r;
  r.value = m.grid.spacing() * w.sum();
  r.residual = (m.matrix * w - (one - kernel_part)).cwiseAbs().maxCoeff();
  r.kernel_dim = kernel;
  r.tol = tol;
  return r;
}

}  // namespace mch
