#pragma once

// Geometry kernel for SO(3) and so(3). Rotations are stored as dense
// row-major 3x3 matrices; no quaternion or Euler representation is used.

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace pet_erg {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;

/// Element of so(3), stored by its vee image.
class SkewMatrix {
 public:
  SkewMatrix() : v_(Vec3::Zero()) {}
  explicit SkewMatrix(const Vec3& v) : v_(v) {}

  /// Validates skew-symmetry (max |A + A^T| entry <= tol) and extracts the
  /// vee image. Throws Error otherwise.
  static SkewMatrix from_matrix(const Mat3& a, double tol = 1e-8);

  const Vec3& vee() const { return v_; }
  Mat3 matrix() const;
  Vec3 operator*(const Vec3& y) const { return v_.cross(y); }

 private:
  Vec3 v_;
};

/// Element of SO(3). Construction through from_matrix() checks
/// ||R^T R - I||_F <= 1e-9 and |det R - 1| <= 1e-9.
class Rotation {
 public:
  static constexpr double kTolerance = 1e-9;

  Rotation() : m_(Mat3::Identity()) {}

  static Rotation identity() { return Rotation(); }
  static Rotation from_matrix(const Mat3& m, double tol = kTolerance);
  /// Wraps a matrix already known to be a rotation (e.g. a product of
  /// rotations). No check.
  static Rotation unchecked(const Mat3& m) { return Rotation(m); }
  /// Rotation of `angle` radians about `axis` (normalized internally).
  static Rotation from_axis_angle(const Vec3& axis, double angle);

  const Mat3& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Rotation transpose() const { return Rotation(m_.transpose()); }
  Rotation operator*(const Rotation& o) const { return Rotation(m_ * o.m_); }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  bool operator==(const Rotation& o) const { return m_ == o.m_; }

 private:
  explicit Rotation(const Mat3& m) : m_(m) {}
  Mat3 m_;
};

SkewMatrix hat(const Vec3& v);
Vec3 vee(const SkewMatrix& s);
/// Throws Error when the symmetry residual exceeds 1e-8.
Vec3 vee(const Mat3& s);

/// Skew-symmetric projection (A - A^T) / 2.
SkewMatrix sk(const Mat3& a);

/// Rodrigues formula; Taylor branch for angles below 1e-6.
Rotation exp_map(const Vec3& v);

struct LogResult {
  Vec3 v;
  /// True when the angle is within 1e-6 of pi: the axis sign is then a
  /// convention (largest diagonal entry of (R + I)/2 taken positive).
  bool near_pi = false;
};

/// Principal logarithm, angle in [0, pi].
LogResult log_map_detailed(const Rotation& r);
inline Vec3 log_map(const Rotation& r) { return log_map_detailed(r).v; }

/// Rotation angle in [0, pi], evaluated with atan2 for accuracy at both ends.
double rotation_angle(const Rotation& r);

/// Error function tr(I - R)/2 = 1 - cos(angle), range [0, 2].
double phi(const Rotation& r);

/// Constant-speed geodesic from `from` to `to`; s in [0, 1].
class Geodesic {
 public:
  Geodesic(const Rotation& from, const Rotation& to);

  Rotation at(double s) const;
  /// log(from^T to) hit the angle-pi branch: the path is one of two
  /// equally short geodesics.
  bool ambiguous() const { return ambiguous_; }
  double length() const { return twist_.norm(); }

 private:
  Rotation from_;
  Rotation to_;
  Vec3 twist_;
  bool ambiguous_;
};

Rotation geodesic(const Rotation& from, const Rotation& to, double s);

/// ||R^T R - I||_F.
double orthogonality_residual(const Mat3& m);

/// Nearest rotation (polar factor). Requires orthogonality residual <= 0.1.
Rotation orthonormalize(const Mat3& m);

}  // namespace pet_erg
