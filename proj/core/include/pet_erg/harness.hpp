#pragma once

// Deterministic closed-loop simulation of plant + governor on one time grid,
// with constraint monitors, convergence diagnostics and seeded sweeps.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pet_erg/config.hpp"

namespace pet_erg {

struct LogRow {
  double t;
  Mat3 R;
  Vec3 omega;
  Mat3 R_g;
  double V;
  double gamma;
  double gamma_d;
  double gamma_g;
  int event_flag;
  Vec3 tau;
  double tau_norm;
  double c;          // a_c^T R a_b
  double phi_R_Rd;   // phi(R^T R_d)
  double phi_Rg_Rd;  // phi(R_g^T R_d)
};

using TrajectoryLog = std::vector<LogRow>;

/// CSV header names, in column order (34 columns).
const std::vector<std::string>& trajectory_columns();

/// Least-squares line through (t, ln y).
struct ExponentialFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rate = 0.0;  // -slope
  double r_squared = 0.0;
  std::size_t points = 0;
};

ExponentialFit fit_log_linear(const std::vector<double>& t,
                              const std::vector<double>& y);

struct MonitorSettings {
  double tau_max;
  double cos_theta_c;
  double fit_window = 0.3;
  double convergence_tol = 1e-4;
  double violation_tol = 1e-6;
  double fit_floor = 1e-14;  // rows with phi below this are excluded
  double sample_period = 0.0;  // T_s; 0 disables safe-sample counting

  static MonitorSettings from(const ScenarioConfig& cfg);
};

struct ConstraintReport {
  double max_tau = 0.0;
  double t_max_tau = 0.0;
  double min_pointing_margin = 0.0;  // min a_c^T R a_b - cos(theta_c)
  double t_min_pointing_margin = 0.0;
  double max_v_minus_gamma = 0.0;
  double t_max_v_minus_gamma = 0.0;
  std::optional<double> t_converged;  // first t with phi(R^T R_d) < tol
  ExponentialFit fit;

  bool torque_violation = false;
  bool pointing_violation = false;
  bool invariance_violation = false;

  double final_phi_R_Rd = 0.0;
  double final_phi_Rg_Rd = 0.0;
  double final_omega_norm = 0.0;
  double max_drift = 0.0;  // max orthogonality residual of R and R_g
  std::size_t rows = 0;
  std::size_t safe_samples = 0;  // sampling instants with event_flag = 1

  bool any_violation() const {
    return torque_violation || pointing_violation || invariance_violation;
  }
};

ConstraintReport monitor_constraints(const TrajectoryLog& log,
                                     const MonitorSettings& settings);
ConstraintReport monitor_constraints(const TrajectoryLog& log,
                                     const ScenarioConfig& cfg);

struct SimulationResult {
  TrajectoryLog log;
  ConstraintReport report;
  bool hypothesis_satisfied = true;  // V(R0, w0, R0) <= Gamma(R0)
  std::vector<std::string> warnings;
};

/// Fixed-step closed loop. At every multiple of T_s the event indicator is
/// refreshed before the step; (R, omega, R_g) are then advanced together by
/// one RKMK4 step. Identical configs give bit-identical logs. Throws
/// BoundaryEscape (with time) if the reference leaves its admissible region.
SimulationResult simulate(const ScenarioConfig& cfg);

/// Advances (R, omega, R_g) by one step with the indicator held. Exposed for
/// tests and benchmarks.
void closed_loop_step(BodyState& state, GovernorState& gov,
                      const Rotation& R_d, double h, const LoopParams& p);

struct FeasibilityResult {
  bool feasible = false;
  double min_margin = 0.0;
  double s_at_min = 0.0;
  bool ambiguous = false;  // geodesic endpoints antipodal
};

/// Evaluates a_c^T geo(s) a_b - cos(theta_c) at n uniform s in [0, 1].
FeasibilityResult geodesic_feasibility_check(const Rotation& R0,
                                             const Rotation& R_d,
                                             const ConstraintSpec& spec,
                                             int n_samples);

struct PerturbationSpec {
  double angle_max = 0.5;  // rad, R0 <- R0 exp(angle * axis)
  double omega_max = 0.3;  // rad/s, omega0 <- omega0 + ball sample
  int max_attempts = 10000;
};

struct SweepRun {
  int index = 0;
  AxisAngle R0_perturbation;
  Vec3 omega0 = Vec3::Zero();
  Rotation R0;
  ConstraintReport report;
  bool aborted = false;
  std::string error;

  bool pass() const { return !aborted && !report.any_violation(); }
};

struct SweepSummary {
  std::uint64_t seed = 0;
  std::string generator = "splitmix64-counter";
  std::vector<SweepRun> runs;  // sorted by index

  double pass_rate() const;
  std::vector<int> failing_runs() const;
};

/// n runs from seeded perturbations of (R0, omega0), each drawn by rejection
/// until the start satisfies V(R0, w0, R0) <= Gamma(R0) with R0 strictly
/// inside the reference-admissible region. Run i uses stream i of the
/// generator, so results do not depend on `threads`.
SweepSummary sweep(const ScenarioConfig& base, int n, std::uint64_t seed,
                   const PerturbationSpec& perturbation, unsigned threads = 0);

}  // namespace pet_erg
