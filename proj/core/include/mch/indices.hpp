#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mch/linop.hpp"
#include "mch/wave.hpp"

namespace mch {

struct IndexOptions {
  double h = 1e-3;               ///< requested FD step in k (shrunk near 0 and 1)
  int quadrature_points = 256;  ///< samples for F(φ) and V(φ)
  int validity_points = 512;    ///< samples for the φ − c < 0 check
};

struct IndexComponents {
  double dA_dk = 0.0;
  double dc_dk = 0.0;
  double dV_dk = 0.0;  ///< L · da/dk
  double dF_dk = 0.0;
};

/// I = dA/dk · dV/dk − dc/dk · dF/dk at fixed L.
struct IndexSample {
  double k = 0.0;
  double L = 0.0;
  bool valid = false;  ///< (k, L) passes every existence/validity check
  double I = 0.0;
  double I_coarse = 0.0;        ///< same formula with the step-h estimates
  double I_direct_v = 0.0;      ///< dV/dk from differencing the sampled ∫φ
  double fd_rel_change = 0.0;   ///< worst component change under h → h/2
  double I_rel_change = 0.0;    ///< |I − I_coarse| / |I|
  double h = 0.0;
  IndexComponents components;
  std::string note;
};

/// Throws DomainError if the stencil leaves the region where the wave exists
/// and AccuracyError if the step-halving gate fails.
IndexSample stability_index(double k, double L, const IndexOptions& opts = {});

struct Range {
  double lo;
  double hi;
};

struct ScanSummary {
  double min_I = 0.0;
  double max_I = 0.0;
  int count_valid = 0;
  int count_positive = 0;
  int count_invalid = 0;
  int count_fd_failed = 0;
  double max_fd_rel_change = 0.0;
  double max_I_rel_change = 0.0;
};

struct IndexScan {
  std::vector<IndexSample> cells;  ///< k-major: cells[i * nL + j]
  int nk = 0;
  int nL = 0;
  ScanSummary summary;
};

/// k_i = lo + (i+1)(hi − lo)/nk (left-open), L_j = lo + j(hi − lo)/(nL − 1)
/// (L = lo when nL = 1). Cells outside the validity region, or where the
/// FD gate fails, are flagged and left out of min/max. threads = 0 uses the
/// hardware concurrency; the result does not depend on it.
IndexScan index_scan(Range k, Range L, int nk, int nL, const IndexOptions& opts = {},
                     unsigned threads = 0);

struct MorseReport {
  int n_L = 0;
  int z_L = 0;
  double pairing = 0.0;
  bool pairing_zero = false;
  int n_Y0_direct = 0;
  int z_Y0_direct = 0;
  int n_Y0_formula = 0;  ///< n(L) − n(pairing) − z(pairing)
  int z_Y0_formula = 0;  ///< z(L) + z(pairing)
  bool holds = false;
  double tol = 0.0;
};

/// Pairings with |⟨L⁻¹1,1⟩| ≤ kPairingZero · L count as zero.
inline constexpr double kPairingZero = 1e-8;

/// Both Morse identities on Y₀ from two independent paths. Throws RankError
/// when z(L) ≠ 1 unless allow_degenerate_kernel is set.
MorseReport morse_check(const OperatorMatrix& l, bool allow_degenerate_kernel = false);
MorseReport morse_check(double k, double L, int n);

/// L* in [L_lo, L_hi] with a(k, L*) = 0, if a changes sign there.
/// Throws DomainError if the wave does not exist at L_lo.
std::optional<double> zero_mean_period(double k, double L_lo, double L_hi);

struct DSecondReport {
  double k = 0.0;
  double L_star = 0.0;
  double c = 0.0;
  double dL_dk = 0.0;           ///< slope of the branch L*(k)
  double d_prime_chain = 0.0;   ///< F(φ)
  double d_prime_direct = 0.0;  ///< (dd/dk) / (dc/dk)
  /// F(φ) + (dL*/dk)/(dc/dk) · (−φ₀⁴/4 + cφ₀²/2 − Aφ₀), φ₀ = φ(0): the
  /// chain rule including the moving upper limit of ∫₀^{L*}.
  double d_prime_corrected = 0.0;
  double d_second = 0.0;        ///< (dF/dk) / (dc/dk)
  double d_second_direct = 0.0; ///< (d_kk c_k − d_k c_kk) / c_k³
  double rel_disagreement = 0.0;
};

/// d″(c) along the zero-mean branch through k, with the branch located by
/// zero_mean_period in [L_lo, L_hi] at every stencil point. nullopt if the
/// branch is absent; SingularParametrization if |dc/dk| < 1e−10.
///
/// d_second is (dF/dk)/(dc/dk), i.e. −D. Because L* moves with k, d′(c) is not
/// exactly F(φ) and d_second_direct differs from it by a few percent; both
/// are reported.
std::optional<DSecondReport> d_second(double k, double L_lo, double L_hi,
                                      const IndexOptions& opts = {});

enum class Classification { stable, unstable, indeterminate };
const char* to_string(Classification c);

struct KreinCounts {
  int n_L_Y0 = 0;
  int n_D = 0;
  int K_Ham = 0;
  Classification classification = Classification::indeterminate;
};

/// n(L|Y₀) = n(L) − n(pairing); K_Ham = n(L|Y₀) − n(D). Indeterminate when
/// D or the pairing is zero within its tolerance, or K_Ham ∉ {0, 1}.
KreinCounts classify_krein(int n_L, double pairing, double D, double pairing_tol = 0.0,
                           double d_tol = 0.0);

struct KreinReport {
  bool branch_found = false;
  double L_star = 0.0;
  int n_L = 0;
  int z_L = 0;
  int n_L_Y0 = 0;          ///< restricted spectrum
  int n_L_Y0_formula = 0;  ///< n(L) − n(pairing)
  int z_L_Y0 = 0;
  double pairing = 0.0;
  double D = 0.0;  ///< −d″(c)
  int n_D = 0;
  int K_Ham = 0;
  Classification classification = Classification::indeterminate;
  std::string note;
};

KreinReport krein_index(double k, double L_lo, double L_hi, int n = 256,
                        const IndexOptions& opts = {});

}  // namespace mch
