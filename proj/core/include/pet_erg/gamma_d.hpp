#pragma once

// Offline computation of the input-constraint level Gamma_d: the largest
// sublevel value of V whose worst-case PD torque stays within tau_max.
//
// On {V <= Gamma} the torque obeys |tau| <= k_p |sin(theta)| + k_d |omega|,
// with theta the attitude-error angle. Splitting the budget into a potential
// share c Gamma and a kinetic share (1 - c) Gamma gives
//   M(Gamma) = max_{c in [0,1]} k_p s*(c Gamma) + k_d sqrt(2 (1 - c) Gamma / lambda_min)
// where s*(E) is the largest |sin(theta)| with k_p (1 - cos(theta)) <= E.
// The bound is attained by spinning against the error axis about the
// lambda_min principal axis, so M is the exact worst case.

#include <cstdint>

#include "pet_erg/plant.hpp"

namespace pet_erg {

/// Largest |sin(theta)| over k_p (1 - cos(theta)) <= energy.
double max_sine_for_energy(double energy, double k_p);

/// Worst-case torque norm M(Gamma) over the sublevel set {V <= Gamma}.
double torque_bound(double gamma, double lambda_min, const Gains& gains);

struct GammaDSolution {
  double gamma_d;        // +inf when the bound never reaches tau_max
  double tolerance;      // bisection width on exit
  int iterations;
  double torque_at_root; // M(gamma_d)
};

/// Bisection on M(Gamma) = tau_max to the given absolute tolerance.
/// Throws ConfigError when tau_max <= 0.
GammaDSolution gamma_d_offline(double lambda_min, const Gains& gains,
                               double tau_max, double tolerance = 1e-6);
inline GammaDSolution gamma_d_offline(const Inertia& J, const Gains& gains,
                                      double tau_max,
                                      double tolerance = 1e-6) {
  return gamma_d_offline(J.lambda_min(), gains, tau_max, tolerance);
}

struct SublevelTorqueSummary {
  std::int64_t samples = 0;
  double max_torque = 0.0;
  double max_v = 0.0;
};

/// Monte-Carlo scan of |pd_torque| over states with V <= level. Half of the
/// draws are adversarial (rate spun against the error axis), the rest are
/// spread over the sublevel set.
SublevelTorqueSummary sample_sublevel_torque(const Inertia& J,
                                             const Gains& gains, double level,
                                             std::int64_t samples,
                                             std::uint64_t seed);

}  // namespace pet_erg
