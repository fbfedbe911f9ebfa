#include "pet_erg/gamma_d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pet_erg/error.hpp"
#include "pet_erg/rng.hpp"

namespace pet_erg {

double max_sine_for_energy(double energy, double k_p) {
  if (energy <= 0.0) return 0.0;
  if (energy >= k_p) return 1.0;
  const double c = 1.0 - energy / k_p;  // largest admissible cos(theta)
  return std::sqrt(1.0 - c * c);
}

namespace {

double split_torque(double share, double gamma, double lambda_min,
                    const Gains& gains) {
  return gains.k_p * max_sine_for_energy(share * gamma, gains.k_p) +
         gains.k_d * std::sqrt(2.0 * (1.0 - share) * gamma / lambda_min);
}

}  // namespace

double torque_bound(double gamma, double lambda_min, const Gains& gains) {
  if (gamma <= 0.0) return 0.0;
  // The split objective is concave in the share (sum of concave terms), so a
  // golden-section search finds the global maximum.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = split_torque(x1, gamma, lambda_min, gains);
  double f2 = split_torque(x2, gamma, lambda_min, gains);
  while (b - a > 1e-13) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = split_torque(x2, gamma, lambda_min, gains);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = split_torque(x1, gamma, lambda_min, gains);
    }
  }
  return std::max({f1, f2, split_torque(0.0, gamma, lambda_min, gains),
                   split_torque(1.0, gamma, lambda_min, gains)});
}

GammaDSolution gamma_d_offline(double lambda_min, const Gains& gains,
                               double tau_max, double tolerance) {
  if (!(tau_max > 0.0)) throw ConfigError("tau_max must be positive");
  if (!(lambda_min > 0.0)) throw ConfigError("lambda_min must be positive");
  if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");

  double lo = 0.0;
  double hi = 1.0;
  while (torque_bound(hi, lambda_min, gains) <= tau_max) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      // k_d = 0 and tau_max >= k_p: no level ever saturates the input.
      return {std::numeric_limits<double>::infinity(), 0.0, 0,
              torque_bound(lo, lambda_min, gains)};
    }
  }
  int iterations = 0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (torque_bound(mid, lambda_min, gains) <= tau_max) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++iterations;
  }
  // The lower end is always feasible.
  return {lo, hi - lo, iterations, torque_bound(lo, lambda_min, gains)};
}

SublevelTorqueSummary sample_sublevel_torque(const Inertia& J,
                                             const Gains& gains, double level,
                                             std::int64_t samples,
                                             std::uint64_t seed) {
  SublevelTorqueSummary out;
  if (!(level > 0.0) || samples <= 0) return out;
  SplitMix64 rng(seed, 0x6761'6d6d'615fULL);

  for (std::int64_t i = 0; i < samples;) {
    const bool adversarial = (i % 2) == 0;
    const double v_target = level * std::pow(rng.uniform(), 0.125);
    const double share = rng.uniform();
    const double potential = std::min(share * v_target, 2.0 * gains.k_p);
    const double theta =
        std::acos(std::clamp(1.0 - potential / gains.k_p, -1.0, 1.0));
    const Vec3 axis = rng.unit_vector();

    Vec3 dir;
    if (adversarial) {
      dir = (-axis + 0.05 * rng.in_ball(1.0)).normalized();
    } else {
      dir = rng.unit_vector();
    }
    const double kinetic = std::max(0.0, v_target - gains.k_p *
                                                        (1.0 - std::cos(theta)));
    const double speed =
        std::sqrt(2.0 * kinetic / dir.dot(J.matrix() * dir));

    const BodyState state{Rotation::identity(), speed * dir};
    const Rotation r_g = exp_map(theta * axis);
    const double v = lyapunov_v(state, r_g, J, gains);
    if (!(v <= level)) continue;  // rounding at the boundary
    ++i;
    ++out.samples;
    out.max_v = std::max(out.max_v, v);
    out.max_torque = std::max(out.max_torque, pd_torque(state, r_g, gains).norm());
  }
  return out;
}

}  // namespace pet_erg
