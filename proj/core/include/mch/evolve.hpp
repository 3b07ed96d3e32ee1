#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "mch/field.hpp"
#include "mch/wave.hpp"

namespace mch {

struct EvolutionConfig {
  double dt = 0.0;  ///< ≤ 0 selects 0.5·(L/n) / max(1, ‖u0‖∞ + |speed_hint|)
  double t_end = 1.0;
  int dealias_pad = 2;  ///< physical-space refinement for the cubic products
  int monitor_every = 10;
  double blowup_threshold = 1e3;
  double speed_hint = 0.0;  ///< expected wave speed, only used by the dt default
  bool keep_snapshots = false;
};

/// Throws DomainError for t_end ≤ 0, dealias_pad < 2, monitor_every < 1 or a
/// non-positive blow-up threshold.
void validate(const EvolutionConfig& cfg);

enum class Termination { completed, blowup, instability_detected };
const char* to_string(Termination t);

struct StabilityRunReport {
  std::vector<double> times;
  std::vector<double> rho;  ///< empty unless a reference profile was given
  std::vector<double> drift_E;
  std::vector<double> drift_F;
  std::vector<double> drift_V;
  Termination terminated = Termination::completed;
  double dt = 0.0;
  long steps = 0;

  double max_rho() const;
  double max_drift() const;  ///< over E, F and V
};

struct Snapshot {
  double t;
  PeriodicField u;
};

struct RunMonitor {
  /// When set, ρ(u(t), reference) is sampled at every monitor point.
  std::optional<PeriodicField> reference;
  /// ρ above this ends the run with instability_detected.
  double rho_limit = std::numeric_limits<double>::infinity();
  /// Called at every monitor point, including t = 0 and the final time.
  std::function<void(double, const PeriodicField&)> observer;
};

struct RunResult {
  PeriodicField final_state;
  std::vector<Snapshot> snapshots;
  StabilityRunReport report;
};

/// ∂ₓ(1 − ∂²)⁻¹(u u_xx + u_x²/2 − u³), products taken on a grid refined by
/// `pad`. Throws NumericalError if an intermediate is not finite.
PeriodicField rhs(const PeriodicField& u, int pad = 2);

/// Default step for run(): 0.5·(L/n) / max(1, ‖u0‖∞ + |c|).
double default_dt(const PeriodicField& u0, double c);

/// Classical RK4. The step is adjusted down so that t_end is hit exactly.
/// Blow-up and instability end the run and are recorded, not thrown.
RunResult run(const PeriodicField& u0, const EvolutionConfig& cfg, const RunMonitor& monitor = {});

struct LinearGrowthReport {
  double rate_overall = 0.0;  ///< log(‖v(T)‖/‖v(0)‖) / T
  double rate_fit = 0.0;      ///< least-squares slope of log‖v‖ on [T/2, T]
  double norm_ratio_max_dev = 0.0;  ///< max_t |‖v(t)‖/‖v(0)‖ − 1|
  double dt = 0.0;
  long steps = 0;
  std::vector<double> times;
  std::vector<double> log_norms;
};

/// v_t = A v by RK4 for a fixed matrix A (any kind). dt ≤ 0 picks
/// 1/(0.75 σ_max(A)) from a power-iteration estimate of the largest singular
/// value. Norms are the discrete L² norm on `grid`.
LinearGrowthReport linear_growth(const Eigen::MatrixXd& a, const PeriodicField& v0, double t_end,
                                 double dt = 0.0, int monitor_every = 10);

/// v_t = ∂ₓL v with the assembled ∂ₓL of p on v0's grid; v0 is projected to
/// zero mean first.
LinearGrowthReport linearized_run(const PeriodicField& v0, const WaveParams& p,
                                  const EvolutionConfig& cfg);

/// Σ_{m=1}^{modes} (α_m cos + β_m sin)(2πmx/L) with standard normal α, β from
/// a 64-bit Mersenne twister, normalized to ‖w‖_{H¹} = 1.
PeriodicField random_perturbation(const PeriodicGrid& grid, std::uint64_t seed, int modes = 8);

struct OrbitalOptions {
  double rho_factor = 100.0;  ///< instability once ρ > rho_factor · delta
  int modes = 8;
};

/// u0 = φ + delta·w on an n-point grid and ρ(u(t), φ) along the run.
RunResult orbital_experiment(const WaveParams& p, double delta, std::uint64_t seed, int n,
                             const EvolutionConfig& cfg, const OrbitalOptions& opts = {});

}  // namespace mch
