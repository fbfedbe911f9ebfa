#include <cmath>
#include <limits>

#include "pet_erg/error.hpp"
#include "pet_erg/governor.hpp"
#include "pet_erg/harness.hpp"
#include "pet_erg/integrator.hpp"

namespace pet_erg {

namespace {

struct Stage {
  Vec3 twist;      // of R
  Vec3 omega_dot;
  Vec3 ref_twist;  // of R_g
};

Stage evaluate(const Rotation& r, const Vec3& omega, const Rotation& r_g,
               bool indicator, const Rotation& R_d, const LoopParams& p) {
  const BodyState s{r, omega};
  const StateDerivative d = dynamics_rhs(s, pd_torque(s, r_g, p.gains), p.J);
  const Vec3 ref =
      indicator ? reference_rhs(s, r_g, true, R_d, p) : Vec3::Zero();
  return {d.twist, d.omega_dot, ref};
}

LogRow make_row(double t, const BodyState& s, const GovernorState& g,
                const Rotation& R_d, const LoopParams& p) {
  const Thresholds th = thresholds(g.R_g, p.gov, p.spec, p.gains);
  const TorqueCommand tau = pd_torque(s, g.R_g, p.gains);
  LogRow row;
  row.t = t;
  row.R = s.R.matrix();
  row.omega = s.omega;
  row.R_g = g.R_g.matrix();
  row.V = lyapunov_v(s, g.R_g, p.J, p.gains);
  row.gamma = th.value;
  row.gamma_d = th.gamma_d;
  row.gamma_g = th.gamma_g;
  row.event_flag = g.indicator ? 1 : 0;
  row.tau = tau.tau;
  row.tau_norm = tau.norm();
  row.c = p.spec.pointing_value(s.R);
  row.phi_R_Rd = phi(s.R.transpose() * R_d);
  row.phi_Rg_Rd = phi(g.R_g.transpose() * R_d);
  return row;
}

}  // namespace

void closed_loop_step(BodyState& state, GovernorState& gov,
                      const Rotation& R_d, double h, const LoopParams& p) {
  const bool on = gov.indicator;
  const Rotation& r0 = state.R;
  const Rotation& g0 = gov.R_g;
  const Vec3& w0 = state.omega;

  auto advance = [](const Rotation& base, const Vec3& u) {
    return base * exp_map(u);
  };

  const Stage k1 = evaluate(r0, w0, g0, on, R_d, p);

  const Vec3 ur2 = 0.5 * h * k1.twist;
  const Vec3 ug2 = 0.5 * h * k1.ref_twist;
  Stage k2 = evaluate(advance(r0, ur2), w0 + 0.5 * h * k1.omega_dot,
                      on ? advance(g0, ug2) : g0, on, R_d, p);
  k2.twist = dexp_inv(ur2, k2.twist);
  k2.ref_twist = dexp_inv(ug2, k2.ref_twist);

  const Vec3 ur3 = 0.5 * h * k2.twist;
  const Vec3 ug3 = 0.5 * h * k2.ref_twist;
  Stage k3 = evaluate(advance(r0, ur3), w0 + 0.5 * h * k2.omega_dot,
                      on ? advance(g0, ug3) : g0, on, R_d, p);
  k3.twist = dexp_inv(ur3, k3.twist);
  k3.ref_twist = dexp_inv(ug3, k3.ref_twist);

  const Vec3 ur4 = h * k3.twist;
  const Vec3 ug4 = h * k3.ref_twist;
  Stage k4 = evaluate(advance(r0, ur4), w0 + h * k3.omega_dot,
                      on ? advance(g0, ug4) : g0, on, R_d, p);
  k4.twist = dexp_inv(ur4, k4.twist);
  k4.ref_twist = dexp_inv(ug4, k4.ref_twist);

  const double w = h / 6.0;
  const Vec3 ur = w * (k1.twist + 2.0 * k2.twist + 2.0 * k3.twist + k4.twist);
  const Vec3 wd = k1.omega_dot + 2.0 * k2.omega_dot + 2.0 * k3.omega_dot +
                  k4.omega_dot;

  if (on) {
    const Vec3 ug = w * (k1.ref_twist + 2.0 * k2.ref_twist +
                         2.0 * k3.ref_twist + k4.ref_twist);
    gov.R_g = orthonormalize(advance(g0, ug).matrix());
  }
  state.omega = w0 + w * wd;
  state.R = orthonormalize(advance(r0, ur).matrix());
}

SimulationResult simulate(const ScenarioConfig& cfg) {
  const LoopParams& p = cfg.params;
  const std::int64_t n_steps = cfg.steps();
  const std::int64_t per_sample = steps_per_sample(p.gov.T_s, cfg.h);

  SimulationResult result;
  BodyState state{cfg.R0, cfg.omega0};
  GovernorState gov{cfg.R0, false, 0.0};

  const double v0 = lyapunov_v(state, cfg.R0, p.J, p.gains);
  const double gamma0 = gamma_aggregate(cfg.R0, p.gov, p.spec, p.gains);
  if (!(v0 <= gamma0)) {
    result.hypothesis_satisfied = false;
    result.warnings.push_back(
        "initial condition violates V(R0, w0, R0) <= Gamma(R0) (V = " +
        std::to_string(v0) + ", Gamma = " + std::to_string(gamma0) +
        "); safety is not guaranteed");
  }

  result.log.reserve(static_cast<std::size_t>(n_steps + 1));
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.h;
    if (k % per_sample == 0) {
      gov.indicator = event_check(state, gov.R_g, p);
      gov.last_sample_t = t;
    }
    result.log.push_back(make_row(t, state, gov, cfg.R_d, p));
    if (k == n_steps) break;
    try {
      closed_loop_step(state, gov, cfg.R_d, cfg.h, p);
    } catch (const BoundaryEscape& e) {
      throw BoundaryEscape(std::string(e.what()) + " at t = " +
                               std::to_string(t),
                           t);
    }
  }
  result.report = monitor_constraints(result.log, cfg);
  return result;
}

FeasibilityResult geodesic_feasibility_check(const Rotation& R0,
                                             const Rotation& R_d,
                                             const ConstraintSpec& spec,
                                             int n_samples) {
  if (n_samples < 2) throw Error("geodesic check needs at least 2 samples");
  const Geodesic path(R0, R_d);
  FeasibilityResult out;
  out.ambiguous = path.ambiguous();
  out.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    const double s =
        i == n_samples - 1 ? 1.0 : static_cast<double>(i) / (n_samples - 1);
    const double m = spec.pointing_margin(path.at(s));
    if (m < out.min_margin) {
      out.min_margin = m;
      out.s_at_min = s;
    }
  }
  out.feasible = out.min_margin > 0.0;
  return out;
}

}  // namespace pet_erg
