#include <algorithm>
#include <cmath>
#include <limits>

#include "pet_erg/harness.hpp"

namespace pet_erg {

const std::vector<std::string>& trajectory_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"t"};
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) c.push_back("R" + std::to_string(i) + std::to_string(j));
    c.insert(c.end(), {"omega_x", "omega_y", "omega_z"});
    for (int i = 1; i <= 3; ++i)
      for (int j = 1; j <= 3; ++j) c.push_back("Rg" + std::to_string(i) + std::to_string(j));
    c.insert(c.end(), {"V", "Gamma", "Gamma_d", "Gamma_g", "event_flag",
                       "tau_x", "tau_y", "tau_z", "tau_norm", "c",
                       "phi_R_Rd", "phi_Rg_Rd"});
    return c;
  }();
  return cols;
}

ExponentialFit fit_log_linear(const std::vector<double>& t,
                              const std::vector<double>& y) {
  ExponentialFit fit;
  const std::size_t n = std::min(t.size(), y.size());
  fit.points = n;
  if (n < 2) return fit;

  double mt = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += std::log(y[i]);
  }
  mt /= static_cast<double>(n);
  my /= static_cast<double>(n);

  double stt = 0.0;
  double sty = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = t[i] - mt;
    const double dy = std::log(y[i]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  if (stt == 0.0) return fit;
  fit.slope = sty / stt;
  fit.intercept = my - fit.slope * mt;
  fit.rate = -fit.slope;
  fit.r_squared = syy > 0.0 ? (sty * sty) / (stt * syy) : 1.0;
  return fit;
}

MonitorSettings MonitorSettings::from(const ScenarioConfig& cfg) {
  MonitorSettings s{cfg.spec().tau_max, cfg.spec().cos_theta_c()};
  s.fit_window = cfg.fit_window;
  s.convergence_tol = cfg.convergence_tol;
  s.violation_tol = cfg.violation_tol;
  s.sample_period = cfg.params.gov.T_s;
  return s;
}

ConstraintReport monitor_constraints(const TrajectoryLog& log,
                                     const MonitorSettings& settings) {
  ConstraintReport r;
  r.rows = log.size();
  if (log.empty()) return r;

  r.max_tau = -std::numeric_limits<double>::infinity();
  r.min_pointing_margin = std::numeric_limits<double>::infinity();
  r.max_v_minus_gamma = -std::numeric_limits<double>::infinity();

  const double t0 = log.front().t;
  const double t1 = log.back().t;
  const double fit_start = t1 - settings.fit_window * (t1 - t0);
  std::vector<double> fit_t;
  std::vector<double> fit_y;

  for (const LogRow& row : log) {
    if (row.tau_norm > r.max_tau) {
      r.max_tau = row.tau_norm;
      r.t_max_tau = row.t;
    }
    const double margin = row.c - settings.cos_theta_c;
    if (margin < r.min_pointing_margin) {
      r.min_pointing_margin = margin;
      r.t_min_pointing_margin = row.t;
    }
    const double excess = row.V - row.gamma;
    if (excess > r.max_v_minus_gamma) {
      r.max_v_minus_gamma = excess;
      r.t_max_v_minus_gamma = row.t;
    }
    if (!r.t_converged && row.phi_R_Rd < settings.convergence_tol) {
      r.t_converged = row.t;
    }
    if (row.t >= fit_start && row.phi_R_Rd > settings.fit_floor) {
      fit_t.push_back(row.t);
      fit_y.push_back(row.phi_R_Rd);
    }
    r.max_drift = std::max({r.max_drift, orthogonality_residual(row.R),
                            orthogonality_residual(row.R_g)});
    if (row.event_flag == 1 && settings.sample_period > 0.0) {
      const double k = row.t / settings.sample_period;
      if (std::abs(k - std::round(k)) < 1e-9 * std::max(1.0, k)) {
        ++r.safe_samples;
      }
    }
  }

  r.torque_violation = r.max_tau > settings.tau_max + settings.violation_tol;
  r.pointing_violation = r.min_pointing_margin < -settings.violation_tol;
  r.invariance_violation = r.max_v_minus_gamma > settings.violation_tol;

  r.fit = fit_log_linear(fit_t, fit_y);

  const LogRow& last = log.back();
  r.final_phi_R_Rd = last.phi_R_Rd;
  r.final_phi_Rg_Rd = last.phi_Rg_Rd;
  r.final_omega_norm = last.omega.norm();
  return r;
}

ConstraintReport monitor_constraints(const TrajectoryLog& log,
                                     const ScenarioConfig& cfg) {
  return monitor_constraints(log, MonitorSettings::from(cfg));
}

}  // namespace pet_erg
