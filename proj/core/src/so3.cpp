#include "pet_erg/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "pet_erg/error.hpp"

namespace pet_erg {

namespace {
constexpr double kSmallAngle = 1e-6;
constexpr double kNearPi = 1e-6;
}  // namespace

Mat3 SkewMatrix::matrix() const {
  Mat3 m;
  m << 0.0, -v_.z(), v_.y(),
       v_.z(), 0.0, -v_.x(),
       -v_.y(), v_.x(), 0.0;
  return m;
}

SkewMatrix SkewMatrix::from_matrix(const Mat3& a, double tol) {
  const double residual = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (!(residual <= tol)) {
    throw Error("vee: matrix is not skew-symmetric (residual " +
                std::to_string(residual) + ")");
  }
  // Average the mirrored entries so that hat(vee(S)) == S for exact input.
  return SkewMatrix(Vec3(0.5 * (a(2, 1) - a(1, 2)), 0.5 * (a(0, 2) - a(2, 0)),
                         0.5 * (a(1, 0) - a(0, 1))));
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
  const double ortho = orthogonality_residual(m);
  const double det = m.determinant();
  if (!(ortho <= tol) || !(std::abs(det - 1.0) <= tol)) {
    throw Error("matrix is not a rotation (orthogonality residual " +
                std::to_string(ortho) + ", det " + std::to_string(det) + ")");
  }
  return Rotation(m);
}

Rotation Rotation::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 0.0)) {
    if (angle == 0.0) return Rotation();
    throw Error("axis-angle: zero axis with nonzero angle");
  }
  return exp_map(axis / n * angle);
}

SkewMatrix hat(const Vec3& v) { return SkewMatrix(v); }

Vec3 vee(const SkewMatrix& s) { return s.vee(); }

Vec3 vee(const Mat3& s) { return SkewMatrix::from_matrix(s).vee(); }

SkewMatrix sk(const Mat3& a) {
  return SkewMatrix(Vec3(0.5 * (a(2, 1) - a(1, 2)), 0.5 * (a(0, 2) - a(2, 0)),
                         0.5 * (a(1, 0) - a(0, 1))));
}

Rotation exp_map(const Vec3& v) {
  const double theta2 = v.squaredNorm();
  const double theta = std::sqrt(theta2);
  double a;
  double b;
  if (theta < kSmallAngle) {
    a = 1.0 - theta2 / 6.0;
    b = 0.5 - theta2 / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
  }
  const Mat3 k = hat(v).matrix();
  return Rotation::unchecked(Mat3::Identity() + a * k + b * (k * k));
}

double rotation_angle(const Rotation& r) {
  const Mat3& m = r.matrix();
  const double s = sk(m).vee().norm();
  const double c = 0.5 * (m.trace() - 1.0);
  return std::atan2(s, c);
}

LogResult log_map_detailed(const Rotation& r) {
  const Mat3& m = r.matrix();
  const Vec3 s_vec = sk(m).vee();  // sin(theta) * axis
  const double s = s_vec.norm();
  const double c = 0.5 * (m.trace() - 1.0);
  const double theta = std::atan2(s, c);

  LogResult out;
  if (theta < kSmallAngle) {
    out.v = s_vec * (1.0 + theta * theta / 6.0);
    return out;
  }
  if (c >= 0.0) {
    out.v = s_vec * (theta / s);
    return out;
  }

  // Obtuse angles: the axis is read off the symmetric part,
  // sym(R) - cos(theta) I = (1 - cos(theta)) u u^T, using the column with the
  // largest diagonal entry. Its own component comes out positive, which fixes
  // the sign convention at exactly pi.
  const Mat3 outer =
      (0.5 * (m + m.transpose()) - c * Mat3::Identity()) / (1.0 - c);
  int k = 0;
  outer.diagonal().maxCoeff(&k);
  Vec3 axis = outer.col(k) / std::sqrt(std::max(outer(k, k), 0.0));
  axis.normalize();
  if (axis.dot(s_vec) < 0.0) axis = -axis;
  out.v = theta * axis;
  out.near_pi = (std::numbers::pi - theta) < kNearPi;
  return out;
}

double phi(const Rotation& r) {
  // 1 - cos(theta), evaluated as sin^2/(1 + cos) for acute angles to avoid
  // cancellation near the identity.
  const Mat3& m = r.matrix();
  const double c = 0.5 * (m.trace() - 1.0);
  if (c > 0.0) {
    const double s2 = sk(m).vee().squaredNorm();
    return s2 / (1.0 + c);
  }
  return 1.0 - c;
}

Geodesic::Geodesic(const Rotation& from, const Rotation& to)
    : from_(from), to_(to) {
  const LogResult lr = log_map_detailed(from.transpose() * to);
  twist_ = lr.v;
  ambiguous_ = lr.near_pi;
}

Rotation Geodesic::at(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw Error("geodesic: parameter outside [0, 1]");
  }
  if (s == 0.0) return from_;
  if (s == 1.0) return to_;
  return from_ * exp_map(s * twist_);
}

Rotation geodesic(const Rotation& from, const Rotation& to, double s) {
  return Geodesic(from, to).at(s);
}

double orthogonality_residual(const Mat3& m) {
  return (m.transpose() * m - Mat3::Identity()).norm();
}

Rotation orthonormalize(const Mat3& m) {
  const double residual = orthogonality_residual(m);
  if (!(residual <= 0.1)) {
    throw Error("orthonormalize: input too far from SO(3) (residual " +
                std::to_string(residual) + ")");
  }
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 q = svd.matrixU() * svd.matrixV().transpose();
  if (q.determinant() < 0.0) {
    throw Error("orthonormalize: input has negative determinant");
  }
  return Rotation::unchecked(q);
}

}  // namespace pet_erg
