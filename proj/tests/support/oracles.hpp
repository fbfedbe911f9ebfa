#pragma once

// Reference computations used only by the tests. None of them call into the
// code they check: rotations come from Eigen::AngleAxisd, randomness from
// std::mt19937_64, derivatives from central differences.

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

#include "pet_erg/so3.hpp"

namespace oracle {

using pet_erg::Mat3;
using pet_erg::Vec3;

inline constexpr double kPi = 3.14159265358979323846;

inline Mat3 rot(const Vec3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

inline Mat3 rot(const Vec3& v) {
  const double a = v.norm();
  if (a == 0.0) return Mat3::Identity();
  return rot(v / a, a);
}

inline double angle_of(const Mat3& r) {
  const double c = std::clamp((r.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

inline Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
  return m;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  Vec3 direction() {
    std::normal_distribution<double> n;
    Vec3 v;
    do {
      v = Vec3(n(gen_), n(gen_), n(gen_));
    } while (v.norm() < 1e-12);
    return v.normalized();
  }
  Vec3 ball(double r) { return r * std::cbrt(uniform()) * direction(); }
  /// Haar-uniform rotation from a uniform unit quaternion.
  Mat3 rotation() {
    std::normal_distribution<double> n;
    Eigen::Quaterniond q(n(gen_), n(gen_), n(gen_), n(gen_));
    q.normalize();
    return q.toRotationMatrix();
  }

 private:
  std::mt19937_64 gen_;
};

/// Directional derivative of f at R along body twist xi, by central
/// differences on R exp(+-h xi).
inline double directional_fd(const std::function<double(const Mat3&)>& f,
                             const Mat3& r, const Vec3& xi, double h = 1e-5) {
  return (f(r * rot(h * xi)) - f(r * rot(-h * xi))) / (2.0 * h);
}

inline double phi(const Mat3& r) { return 0.5 * (3.0 - r.trace()); }

inline double lyapunov(const Mat3& r, const Vec3& w, const Mat3& r_g,
                       const Mat3& j, double kp) {
  return 0.5 * w.dot(j * w) + kp * phi(r.transpose() * r_g);
}

inline Vec3 pd(const Mat3& r, const Vec3& w, const Mat3& r_g, double kp,
               double kd) {
  const Mat3 e = r.transpose() * r_g;
  const Mat3 s = 0.5 * (e - e.transpose());
  return kp * Vec3(s(2, 1), s(0, 2), s(1, 0)) - kd * w;
}

struct TorqueScan {
  std::int64_t accepted = 0;
  double max_tau = 0.0;
  double max_v = 0.0;
};

/// Rejection sampler over {V <= level} with R_g = I: error axis uniform, error
/// angle uniform in the admissible range, rate uniform in the bounding ball.
/// Half the candidates instead take the rate along +-axis, which is the
/// direction that stacks the two torque terms.
inline TorqueScan sublevel_torque_scan(const Mat3& j, double kp, double kd,
                                       double level, std::int64_t want,
                                       std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(j);
  const double lam_min = eig.eigenvalues().minCoeff();
  const double w_max = std::sqrt(2.0 * level / lam_min);
  const double th_max =
      level >= 2.0 * kp ? kPi : std::acos(1.0 - level / kp);
  TorqueScan out;
  for (std::int64_t i = 0; out.accepted < want; ++i) {
    Vec3 n = rng.direction();
    if (i % 4 == 3) {
      // Axis pulled toward the softest principal direction.
      n = (n + 2.0 * eig.eigenvectors().col(0)).normalized();
    }
    const double th = rng.uniform(0.0, th_max);
    const Mat3 r = rot(n, th);
    const Vec3 w = i % 2 == 0
                       ? rng.ball(w_max)
                       : (rng.uniform() < 0.5 ? 1.0 : -1.0) *
                             rng.uniform(0.0, w_max) * n;
    const double v = lyapunov(r, w, Mat3::Identity(), j, kp);
    if (v > level) continue;
    ++out.accepted;
    out.max_v = std::max(out.max_v, v);
    out.max_tau = std::max(out.max_tau, pd(r, w, Mat3::Identity(), kp, kd).norm());
  }
  return out;
}

/// k_p (1 - sqrt(1 - (tau_max / k_p)^2)), the level for a rate-free loop.
inline double gamma_d_without_damping(double kp, double tau_max) {
  const double r = tau_max / kp;
  return kp * (1.0 - std::sqrt(1.0 - r * r));
}

}  // namespace oracle
