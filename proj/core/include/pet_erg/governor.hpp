#pragma once

// Periodic event-triggered explicit reference governor on SO(3).
//
// The auxiliary reference R_g moves along a navigation field (negative
// gradient of an attractive plus repulsive potential) at a speed set by the
// dynamic safety margin kappa * max{Gamma(R_g) - V, 0}. Whether it may move at
// all is decided only at the sampling instants t_k = k T_s by the test
// Gamma(R_g(t_k)) - c_Gamma V(t_k) >= 0, and that decision is held until
// t_{k+1}.

#include <cstdint>

#include "pet_erg/plant.hpp"
#include "pet_erg/so3.hpp"

namespace pet_erg {

/// Input bound |tau| <= tau_max and pointing constraint
/// a_c^T R a_b >= cos(theta_c).
struct ConstraintSpec {
  double tau_max;  // N m
  Vec3 a_b;        // body-fixed sensor axis, unit
  Vec3 a_c;        // inertial direction, unit
  double theta_c;  // rad, in (0, pi)

  ConstraintSpec(double tau_max, const Vec3& a_b, const Vec3& a_c,
                 double theta_c);

  double cos_theta_c() const;
  /// c = a_c^T R a_b.
  double pointing_value(const Rotation& r) const;
  /// c - cos(theta_c); nonnegative on the admissible set.
  double pointing_margin(const Rotation& r) const;
};

/// Repulsive potential eta (zeta - c)^2 / (c - delta) on c in (delta, zeta),
/// zero for c >= zeta; eps is the navigation-field normalization floor.
struct PotentialParams {
  double delta;
  double zeta;
  double eta;
  double eps;

  PotentialParams(double delta, double zeta, double eta, double eps);
  void validate(const ConstraintSpec& spec) const;
};

struct GovernorParams {
  double kappa;      // 1/s per unit margin
  double c_gamma;    // robust margin factor, > 1
  double T_s;        // sampling period, s
  double eps_gamma;  // topological cap margin, in (0, 2)
  double gamma_d;    // input-constraint level, computed offline

  GovernorParams(double kappa, double c_gamma, double T_s, double eps_gamma,
                 double gamma_d);
};

struct GovernorState {
  Rotation R_g;
  bool indicator = false;  // event test frozen at the last sample
  double last_sample_t = 0.0;
};

/// Everything the governor reads besides the states themselves.
struct LoopParams {
  Inertia J;
  Gains gains;
  ConstraintSpec spec;
  PotentialParams pot;
  GovernorParams gov;
};

/// Breakdown of Gamma(R_g) = min{Gamma_d, Gamma_g(R_g), k_p (2 - eps_Gamma)}.
struct Thresholds {
  double gamma_d;
  double gamma_g;
  double cap;
  double value;
};

/// k_p (1 - cos(max{0, theta_c - theta_cg})), theta_cg the angle between
/// R_g a_b and a_c. If V <= Gamma_g the attitude error angle cannot close the
/// remaining cone margin, so the pointing constraint holds.
double gamma_g(const Rotation& R_g, const ConstraintSpec& spec,
               const Gains& gains);

Thresholds thresholds(const Rotation& R_g, const GovernorParams& gov,
                      const ConstraintSpec& spec, const Gains& gains);

double gamma_aggregate(const Rotation& R_g, const GovernorParams& gov,
                       const ConstraintSpec& spec, const Gains& gains);

/// Gradient (body coordinates) of P_a = phi(R_g^T R_d).
Vec3 attractive_grad(const Rotation& R_g, const Rotation& R_d);

struct RepulsiveTerm {
  double value;
  Vec3 grad;
};

/// Scalar repulsive profile P_r(c) and dP_r/dc.
double repulsive_potential(double c, const PotentialParams& pot);
double repulsive_slope(double c, const PotentialParams& pot);

/// Throws BoundaryEscape when a_c^T R_g a_b <= delta.
RepulsiveTerm repulsive_grad(const Rotation& R_g, const ConstraintSpec& spec,
                             const PotentialParams& pot);

/// rho_n = -(grad P_a + grad P_r), a body twist of R_g.
Vec3 navigation_field(const Rotation& R_g, const Rotation& R_d,
                      const ConstraintSpec& spec, const PotentialParams& pot);

bool event_check(const BodyState& state, const Rotation& R_g,
                 const LoopParams& p);
inline bool event_check(const BodyState& state, const GovernorState& gov,
                        const LoopParams& p) {
  return event_check(state, gov.R_g, p);
}

/// Body twist of R_g. Zero when the held indicator is false; otherwise
/// kappa max{Gamma - V, 0} rho_n / max{|rho_n|, eps} with Gamma, V and rho_n
/// taken at the current (not sampled) state.
Vec3 reference_rhs(const BodyState& state, const Rotation& R_g,
                   bool indicator, const Rotation& R_d, const LoopParams& p);
inline Vec3 reference_rhs(const BodyState& state, const GovernorState& gov,
                          const Rotation& R_d, const LoopParams& p) {
  return reference_rhs(state, gov.R_g, gov.indicator, R_d, p);
}

/// Number of integration steps per sampling period. Throws ConfigError when
/// T_s is not an integer multiple of h.
std::int64_t steps_per_sample(double T_s, double h);

/// True when grid time t (a multiple of h) is a sampling instant.
bool is_sampling_instant(double t, double h, double T_s);

/// Refreshes the indicator at sampling instants, then advances R_g by one
/// RKMK4 step of the update law with the plant state held fixed. A held
/// reference is returned bit-identical.
GovernorState governor_step(const GovernorState& gov, const BodyState& state,
                            const Rotation& R_d, double t, double h,
                            const LoopParams& p);

}  // namespace pet_erg
