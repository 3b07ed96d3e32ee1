#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mch/field.hpp"

namespace mch {

enum class OperatorKind { selfadjoint_L, evolution_dxL };

struct OperatorMatrix {
  Eigen::MatrixXd matrix;
  PeriodicGrid grid;
  OperatorKind kind;
  double divergence_defect = 0.0;  ///< assembly gate value (selfadjoint_L only)
  double symmetry_defect = 0.0;    ///< max |M − Mᵀ| before symmetrization
};

/// Dense Fourier differentiation matrix of order 1 or 2. The first-order
/// matrix drops the Nyquist mode; the second-order one keeps −κ_N².
Eigen::MatrixXd differentiation_matrix(const PeriodicGrid& grid, int order);

/// Threshold on the divergence-form defect checked by assemble_l.
inline constexpr double kAssemblyGate = 1e-8;

/// L = (φ−c)∂² + φ′∂ + c − 3φ² + φ″, assembled as
///
///   ½(P D₂ + D₂ P) + diag(c − 3φ² + ½φ″),   P = diag(φ − c),
///
/// which equals ∂((φ−c)∂·) + c − 3φ² + φ″ and is symmetric by construction.
/// The product D₁ P D₁ is avoided: with D₁'s Nyquist mode removed it leaves
/// that mode seeing only the potential and adds a spurious negative
/// eigenvalue.
///
/// Gate: on resolved cosine/sine probes (|m| ≤ n/8, at most 8 modes) the
/// matrix must agree with D₁ P D₁ + diag(c − 3φ² + φ″) to kAssemblyGate.
/// A φ″ that is not the second derivative of φ fails this check and raises
/// AssemblyError.
OperatorMatrix assemble_l(const PeriodicField& phi, const PeriodicField& phi2, double c);

/// D₁ · L with L from assemble_l.
OperatorMatrix assemble_dxl(const PeriodicField& phi, const PeriodicField& phi2, double c);

struct SpectralReport {
  OperatorKind kind = OperatorKind::selfadjoint_L;
  /// Ascending for selfadjoint_L (imaginary parts zero); ascending by real
  /// part, then imaginary part, for evolution_dxL.
  std::vector<std::complex<double>> eigenvalues{};
  int n_neg = 0;     ///< Re λ < −tol
  int z_dim = 0;     ///< |λ| ≤ tol
  int n_pos = 0;     ///< Re λ > tol
  int n_center = 0;  ///< |Re λ| ≤ tol but |λ| > tol (evolution kind only)
  double tol = 0.0;
  double spectral_radius = 0.0;
  /// Second smallest |λ|. Next to a simple kernel this is the distance to the
  /// rest of the spectrum; near k → 0 it collapses as the kernel doubles.
  double kernel_gap = 0.0;
  double max_real_part = 0.0;
  /// Grid-valued unit eigenvectors of the lowest n_neg + z_dim + 4
  /// eigenvalues, one per column (selfadjoint_L only).
  Eigen::MatrixXd lowest_vectors{};
  PeriodicGrid grid;
};

/// Relative zero tolerance used when none is given. The spectral radius grows
/// like n² through the Nyquist symbol, while the smallest nonzero eigenvalue of
/// L is O(k²) and resolution independent; on valid waves with k ≥ 0.1 it stays
/// above 6e−9 · radius at n ≤ 512, and roundoff keeps the kernel eigenvalue
/// below 2e−16 · radius.
inline constexpr double kDefaultRelativeTol = 1e-12;

/// Full dense eigendecomposition. tol defaults to kDefaultRelativeTol times
/// the spectral radius; an explicit tol must be positive.
SpectralReport spectrum(const OperatorMatrix& m, std::optional<double> tol = std::nullopt);

/// Spectrum on Y₀ = {∫f = 0}: the matrix is compressed onto the orthonormal
/// real Fourier basis without the m = 0 mode (n − 1 vectors).
SpectralReport restricted_spectrum(const OperatorMatrix& m,
                                   std::optional<double> tol = std::nullopt);

struct PairingOptions {
  std::optional<double> tol;
  /// Permit z ≠ 1 (e.g. the constant state, whose kernel is two-dimensional).
  bool allow_degenerate_kernel = false;
};

struct PairingResult {
  double value = 0.0;     ///< ⟨L⁻¹1, 1⟩ in L²(0, L)
  double residual = 0.0;  ///< ‖L w − (1 − kernel projection of 1)‖∞
  int kernel_dim = 0;
  double tol = 0.0;
};

/// Solves L w = 1 on the complement of the computed kernel and returns ⟨w, 1⟩.
/// Throws RankError if the kernel is not one-dimensional, unless overridden.
PairingResult inv_one_pairing(const OperatorMatrix& m, const PairingOptions& opts = {});

}  // namespace mch
