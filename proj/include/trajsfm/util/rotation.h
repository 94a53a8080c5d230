#pragma once

#include <algorithm>
#include <cmath>

#include <Eigen/Core>
#include <Eigen/SVD>
#include <Eigen/Geometry>

namespace trajsfm {

inline Eigen::Matrix3d CrossMatrix(const Eigen::Vector3d& v) {
  Eigen::Matrix3d m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

// Rotation matrix of an axis-angle vector.
inline Eigen::Matrix3d ExpSO3(const Eigen::Vector3d& omega) {
  const double angle = omega.norm();
  if (angle < 1e-12) {
    return Eigen::Matrix3d::Identity() + CrossMatrix(omega);
  }
  return Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix();
}

// Axis-angle vector of a rotation matrix, angle in [0, pi].
inline Eigen::Vector3d LogSO3(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.angle() * aa.axis();
}

// Geodesic angle between two rotations in radians.
inline double RotationAngle(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
  const double cos_angle =
      std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
  // acos loses precision near zero; fall back to the chordal sine.
  if (cos_angle > 0.999) {
    const Eigen::Matrix3d d = a.transpose() * b;
    const Eigen::Vector3d s(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0),
                            d(1, 0) - d(0, 1));
    return std::asin(std::min(1.0, 0.5 * s.norm()));
  }
  return std::acos(cos_angle);
}

// Closest rotation in the Frobenius sense.
inline Eigen::Matrix3d ProjectToRotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d u = svd.matrixU();
    u.col(2) *= -1;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

inline double DegToRad(double deg) { return deg * M_PI / 180.0; }
inline double RadToDeg(double rad) { return rad * 180.0 / M_PI; }

}  // namespace trajsfm
