#pragma once

// Rigid-body attitude dynamics with the inner-loop PD law on SO(3):
//   dR/dt = R hat(omega),   J domega/dt = (J omega) x omega + tau
//   tau = k_p sk(R^T R_g)^vee - k_d omega
// and the Lyapunov function V = omega^T J omega / 2 + k_p phi(R^T R_g).

#include "pet_erg/so3.hpp"

namespace pet_erg {

/// Symmetric positive-definite inertia [kg m^2]. The inverse and smallest
/// eigenvalue are computed once at construction.
class Inertia {
 public:
  explicit Inertia(const Mat3& j);
  static Inertia diagonal(const Vec3& d);

  const Mat3& matrix() const { return j_; }
  const Mat3& inverse() const { return j_inv_; }
  double lambda_min() const { return lambda_min_; }

 private:
  Mat3 j_;
  Mat3 j_inv_;
  double lambda_min_;
};

struct Gains {
  double k_p;  // N m per unit attitude error
  double k_d;  // N m s / rad

  Gains(double kp, double kd);
};

struct BodyState {
  Rotation R;
  Vec3 omega = Vec3::Zero();  // body frame, rad/s
};

struct TorqueCommand {
  Vec3 tau = Vec3::Zero();  // N m
  double norm() const { return tau.norm(); }
};

/// Body twist xi (dR/dt = R hat(xi)) and angular acceleration.
struct StateDerivative {
  Vec3 twist;
  Vec3 omega_dot;
};

TorqueCommand pd_torque(const BodyState& state, const Rotation& R_g,
                        const Gains& gains);

StateDerivative dynamics_rhs(const BodyState& state, const TorqueCommand& tau,
                             const Inertia& J);

double kinetic_energy(const Vec3& omega, const Inertia& J);

double lyapunov_v(const BodyState& state, const Rotation& R_g,
                  const Inertia& J, const Gains& gains);

/// dV/dt = -(k_p/2) tr(R^T dR_g/dt) - k_d |omega|^2 with dR_g/dt given as the
/// body twist of R_g. Equals k_p twist . sk(R^T R_g)^vee - k_d |omega|^2.
double lyapunov_vdot(const BodyState& state, const Rotation& R_g,
                     const Vec3& reference_twist, const Gains& gains);

}  // namespace pet_erg
