#include "pet_erg/governor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pet_erg/error.hpp"
#include "pet_erg/integrator.hpp"

namespace pet_erg {

ConstraintSpec::ConstraintSpec(double tau_max_, const Vec3& a_b_,
                               const Vec3& a_c_, double theta_c_)
    : tau_max(tau_max_), a_b(a_b_), a_c(a_c_), theta_c(theta_c_) {
  if (!(tau_max > 0.0)) throw ConfigError("tau_max must be positive");
  if (!(std::abs(a_b.norm() - 1.0) <= 1e-9) ||
      !(std::abs(a_c.norm() - 1.0) <= 1e-9)) {
    throw ConfigError("a_b and a_c must be unit vectors");
  }
  if (!(theta_c > 0.0 && theta_c < std::numbers::pi)) {
    throw ConfigError("theta_c must lie in (0, pi)");
  }
}

double ConstraintSpec::cos_theta_c() const { return std::cos(theta_c); }

double ConstraintSpec::pointing_value(const Rotation& r) const {
  return a_c.dot(r * a_b);
}

double ConstraintSpec::pointing_margin(const Rotation& r) const {
  return pointing_value(r) - cos_theta_c();
}

PotentialParams::PotentialParams(double delta_, double zeta_, double eta_,
                                 double eps_)
    : delta(delta_), zeta(zeta_), eta(eta_), eps(eps_) {
  if (!(delta < zeta && zeta < 1.0)) {
    throw ConfigError("potential thresholds must satisfy delta < zeta < 1");
  }
  if (!(eta > 0.0) || !(eps > 0.0)) {
    throw ConfigError("eta and eps must be positive");
  }
}

void PotentialParams::validate(const ConstraintSpec& spec) const {
  if (!(spec.cos_theta_c() < delta)) {
    throw ConfigError("delta must exceed cos(theta_c)");
  }
}

GovernorParams::GovernorParams(double kappa_, double c_gamma_, double T_s_,
                               double eps_gamma_, double gamma_d_)
    : kappa(kappa_),
      c_gamma(c_gamma_),
      T_s(T_s_),
      eps_gamma(eps_gamma_),
      gamma_d(gamma_d_) {
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be nonnegative");
  if (!(c_gamma > 1.0)) throw ConfigError("c_gamma must exceed 1");
  if (!(T_s > 0.0)) throw ConfigError("T_s must be positive");
  if (!(eps_gamma > 0.0 && eps_gamma < 2.0)) {
    throw ConfigError("eps_gamma must lie in (0, 2)");
  }
  if (!(gamma_d > 0.0)) throw ConfigError("gamma_d must be positive");
}

double gamma_g(const Rotation& R_g, const ConstraintSpec& spec,
               const Gains& gains) {
  const double c = std::clamp(spec.pointing_value(R_g), -1.0, 1.0);
  const double theta_cg = std::acos(c);
  const double margin = std::max(0.0, spec.theta_c - theta_cg);
  return gains.k_p * (1.0 - std::cos(margin));
}

Thresholds thresholds(const Rotation& R_g, const GovernorParams& gov,
                      const ConstraintSpec& spec, const Gains& gains) {
  Thresholds t;
  t.gamma_d = gov.gamma_d;
  t.gamma_g = gamma_g(R_g, spec, gains);
  t.cap = gains.k_p * (2.0 - gov.eps_gamma);
  t.value = std::max(0.0, std::min({t.gamma_d, t.gamma_g, t.cap}));
  return t;
}

double gamma_aggregate(const Rotation& R_g, const GovernorParams& gov,
                       const ConstraintSpec& spec, const Gains& gains) {
  return thresholds(R_g, gov, spec, gains).value;
}

Vec3 attractive_grad(const Rotation& R_g, const Rotation& R_d) {
  const Mat3 m = R_g.matrix().transpose() * R_d.matrix();
  return -sk(m).vee();
}

double repulsive_potential(double c, const PotentialParams& pot) {
  if (c >= pot.zeta) return 0.0;
  const double gap = pot.zeta - c;
  return pot.eta * gap * gap / (c - pot.delta);
}

double repulsive_slope(double c, const PotentialParams& pot) {
  if (c >= pot.zeta) return 0.0;
  const double gap = pot.zeta - c;
  const double x = c - pot.delta;
  // d/dc [(zeta - c)^2 / (c - delta)]
  return -pot.eta * gap * (gap + 2.0 * x) / (x * x);
}

RepulsiveTerm repulsive_grad(const Rotation& R_g, const ConstraintSpec& spec,
                             const PotentialParams& pot) {
  const double c = spec.pointing_value(R_g);
  if (!(c > pot.delta)) {
    throw BoundaryEscape("reference left its admissible region (a_c^T R_g a_b = " +
                         std::to_string(c) + " <= delta = " +
                         std::to_string(pot.delta) + ")");
  }
  if (c >= pot.zeta) return {0.0, Vec3::Zero()};
  const Vec3 dc = spec.a_b.cross(R_g.matrix().transpose() * spec.a_c);
  return {repulsive_potential(c, pot), repulsive_slope(c, pot) * dc};
}

Vec3 navigation_field(const Rotation& R_g, const Rotation& R_d,
                      const ConstraintSpec& spec, const PotentialParams& pot) {
  return -(attractive_grad(R_g, R_d) + repulsive_grad(R_g, spec, pot).grad);
}

bool event_check(const BodyState& state, const Rotation& R_g,
                 const LoopParams& p) {
  const double gamma = gamma_aggregate(R_g, p.gov, p.spec, p.gains);
  const double v = lyapunov_v(state, R_g, p.J, p.gains);
  return gamma - p.gov.c_gamma * v >= 0.0;
}

Vec3 reference_rhs(const BodyState& state, const Rotation& R_g,
                   bool indicator, const Rotation& R_d, const LoopParams& p) {
  if (!indicator) return Vec3::Zero();
  const double gamma = gamma_aggregate(R_g, p.gov, p.spec, p.gains);
  const double v = lyapunov_v(state, R_g, p.J, p.gains);
  const double dsm = p.gov.kappa * std::max(gamma - v, 0.0);
  if (dsm == 0.0) return Vec3::Zero();
  const Vec3 rho = navigation_field(R_g, R_d, p.spec, p.pot);
  return (dsm / std::max(rho.norm(), p.pot.eps)) * rho;
}

std::int64_t steps_per_sample(double T_s, double h) {
  if (!(h > 0.0) || !(T_s > 0.0)) {
    throw ConfigError("T_s and h must be positive");
  }
  const double ratio = T_s / h;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, n)) {
    throw ConfigError("T_s (" + std::to_string(T_s) +
                      ") is not an integer multiple of h (" +
                      std::to_string(h) + ")");
  }
  return static_cast<std::int64_t>(n);
}

bool is_sampling_instant(double t, double h, double T_s) {
  const std::int64_t n = steps_per_sample(T_s, h);
  const auto k = static_cast<std::int64_t>(std::llround(t / h));
  return k % n == 0;
}

GovernorState governor_step(const GovernorState& gov, const BodyState& state,
                            const Rotation& R_d, double t, double h,
                            const LoopParams& p) {
  GovernorState next = gov;
  if (is_sampling_instant(t, h, p.gov.T_s)) {
    next.indicator = event_check(state, gov.R_g, p);
    next.last_sample_t = t;
  }
  if (!next.indicator) return next;

  const Rotation stepped = rkmk4_step(
      gov.R_g,
      [&](const Rotation& rg) {
        return reference_rhs(state, rg, true, R_d, p);
      },
      h);
  next.R_g = orthonormalize(stepped.matrix());
  return next;
}

}  // namespace pet_erg
