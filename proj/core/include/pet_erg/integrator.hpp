#pragma once

// Munthe-Kaas Runge-Kutta (RKMK4) pieces for flows dR/dt = R hat(xi(R)).
// The attitude is advanced multiplicatively, R(t+h) = R(t) exp(u), where u is
// the classical RK4 combination of stage twists mapped through dexp^{-1}.

#include "pet_erg/so3.hpp"

namespace pet_erg {

/// Right-trivialized dexp^{-1}_{-u}(v), the rate of u in R0 exp(u), truncated
/// after the second-order bracket term. That truncation keeps RKMK at order four.
inline Vec3 dexp_inv(const Vec3& u, const Vec3& v) {
  const Vec3 uv = u.cross(v);
  return v + 0.5 * uv + (1.0 / 12.0) * u.cross(uv);
}

/// One RKMK4 step of dR/dt = R hat(f(R)). Returns the unprojected update so
/// callers decide when to orthonormalize.
template <typename TwistField>
Rotation rkmk4_step(const Rotation& r0, TwistField&& f, double h) {
  const Vec3 k1 = f(r0);
  const Vec3 u2 = 0.5 * h * k1;
  const Vec3 k2 = dexp_inv(u2, f(r0 * exp_map(u2)));
  const Vec3 u3 = 0.5 * h * k2;
  const Vec3 k3 = dexp_inv(u3, f(r0 * exp_map(u3)));
  const Vec3 u4 = h * k3;
  const Vec3 k4 = dexp_inv(u4, f(r0 * exp_map(u4)));
  return r0 * exp_map((h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace pet_erg
