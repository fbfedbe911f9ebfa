#include "pet_erg/plant.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "pet_erg/error.hpp"

namespace pet_erg {

Inertia::Inertia(const Mat3& j) : j_(j) {
  const double asym = (j - j.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-12)) {
    throw ConfigError("inertia matrix is not symmetric (residual " +
                      std::to_string(asym) + ")");
  }
  Eigen::SelfAdjointEigenSolver<Mat3> eig(j, Eigen::EigenvaluesOnly);
  lambda_min_ = eig.eigenvalues().minCoeff();
  if (!(lambda_min_ > 0.0)) {
    throw ConfigError("inertia matrix is not positive definite");
  }
  j_inv_ = j.inverse();
}

Inertia Inertia::diagonal(const Vec3& d) {
  return Inertia(Mat3(d.asDiagonal()));
}

Gains::Gains(double kp, double kd) : k_p(kp), k_d(kd) {
  if (!(k_p > 0.0) || !(k_d >= 0.0)) {
    throw ConfigError("gains must satisfy k_p > 0, k_d >= 0");
  }
}

TorqueCommand pd_torque(const BodyState& state, const Rotation& R_g,
                        const Gains& gains) {
  const Mat3 r_e = state.R.matrix().transpose() * R_g.matrix();
  return {gains.k_p * sk(r_e).vee() - gains.k_d * state.omega};
}

StateDerivative dynamics_rhs(const BodyState& state, const TorqueCommand& tau,
                             const Inertia& J) {
  const Vec3 h = J.matrix() * state.omega;
  return {state.omega, J.inverse() * (h.cross(state.omega) + tau.tau)};
}

double kinetic_energy(const Vec3& omega, const Inertia& J) {
  return 0.5 * omega.dot(J.matrix() * omega);
}

double lyapunov_v(const BodyState& state, const Rotation& R_g,
                  const Inertia& J, const Gains& gains) {
  const Rotation r_e = state.R.transpose() * R_g;
  return kinetic_energy(state.omega, J) + gains.k_p * phi(r_e);
}

double lyapunov_vdot(const BodyState& state, const Rotation& R_g,
                     const Vec3& reference_twist, const Gains& gains) {
  const Mat3 r_e = state.R.matrix().transpose() * R_g.matrix();
  return gains.k_p * reference_twist.dot(sk(r_e).vee()) -
         gains.k_d * state.omega.squaredNorm();
}

}  // namespace pet_erg
