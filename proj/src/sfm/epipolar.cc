#include "trajsfm/sfm/epipolar.h"

#include <cmath>
#include <limits>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace trajsfm {
namespace {

// Null vector of the stacked epipolar constraints x2^T M x1 = 0 after
// normalizing both point sets; returns M in the original coordinates.
std::optional<Eigen::Matrix3d> SolveEpipolarConstraint(
    std::span<const Eigen::Vector2d> x1, std::span<const Eigen::Vector2d> x2) {
  if (x1.size() != x2.size() || x1.size() < 8) return std::nullopt;
  const Eigen::Matrix3d t1 = HartleyNormalization(x1);
  const Eigen::Matrix3d t2 = HartleyNormalization(x2);
  if (!t1.allFinite() || !t2.allFinite()) return std::nullopt;

  Eigen::Matrix<double, Eigen::Dynamic, 9> a(x1.size(), 9);
  for (size_t k = 0; k < x1.size(); ++k) {
    const Eigen::Vector3d p = t1 * x1[k].homogeneous();
    const Eigen::Vector3d q = t2 * x2[k].homogeneous();
    a.row(k) << q.x() * p.x(), q.x() * p.y(), q.x(), q.y() * p.x(),
        q.y() * p.y(), q.y(), p.x(), p.y(), 1.0;
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, Eigen::Dynamic, 9>> svd(
      a, Eigen::ComputeFullV);
  const Eigen::Matrix<double, 9, 1> v = svd.matrixV().col(8);
  Eigen::Matrix3d m;
  m << v(0), v(1), v(2), v(3), v(4), v(5), v(6), v(7), v(8);
  m = t2.transpose() * m * t1;
  if (!m.allFinite() || m.norm() < 1e-300) return std::nullopt;
  return m / m.norm();
}

}  // namespace

Eigen::Matrix3d HartleyNormalization(std::span<const Eigen::Vector2d> points) {
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  double sum_sq = 0.0;
  for (const auto& p : points) sum_sq += (p - centroid).squaredNorm();
  const double rms = std::sqrt(sum_sq / static_cast<double>(points.size()));
  const double scale = std::sqrt(2.0) / rms;
  Eigen::Matrix3d t;
  t << scale, 0, -scale * centroid.x(), 0, scale, -scale * centroid.y(), 0, 0, 1;
  return t;
}

std::optional<Eigen::Matrix3d> EstimateEssential8Point(
    std::span<const Eigen::Vector2d> x1, std::span<const Eigen::Vector2d> x2) {
  const auto m = SolveEpipolarConstraint(x1, x2);
  if (!m) return std::nullopt;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(*m, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  const Eigen::Vector3d s = svd.singularValues();
  const double mean = 0.5 * (s(0) + s(1));
  Eigen::Matrix3d e = svd.matrixU() * Eigen::Vector3d(mean, mean, 0.0).asDiagonal() *
                      svd.matrixV().transpose();
  return e / e.norm();
}

std::optional<Eigen::Matrix3d> EstimateFundamental8Point(
    std::span<const Eigen::Vector2d> x1, std::span<const Eigen::Vector2d> x2) {
  const auto m = SolveEpipolarConstraint(x1, x2);
  if (!m) return std::nullopt;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(*m, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  Eigen::Vector3d s = svd.singularValues();
  s(2) = 0.0;
  Eigen::Matrix3d f = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
  return f / f.norm();
}

double SampsonDistance(const Eigen::Matrix3d& f, const Eigen::Vector2d& x1,
                       const Eigen::Vector2d& x2) {
  const Eigen::Vector3d p = x1.homogeneous();
  const Eigen::Vector3d q = x2.homogeneous();
  const Eigen::Vector3d fp = f * p;
  const Eigen::Vector3d ftq = f.transpose() * q;
  const double numerator = q.dot(fp);
  const double denominator = fp.x() * fp.x() + fp.y() * fp.y() +
                             ftq.x() * ftq.x() + ftq.y() * ftq.y();
  if (denominator <= 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(numerator) / std::sqrt(denominator);
}

std::array<RelativePose, 4> DecomposeEssential(const Eigen::Matrix3d& e) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(e, Eigen::ComputeFullU |
                                               Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  if (u.determinant() < 0) u = -u;
  if (v.determinant() < 0) v = -v;
  Eigen::Matrix3d w;
  w << 0, -1, 0, 1, 0, 0, 0, 0, 1;
  const Eigen::Matrix3d r1 = u * w * v.transpose();
  const Eigen::Matrix3d r2 = u * w.transpose() * v.transpose();
  const Eigen::Vector3d t = u.col(2).normalized();
  return {RelativePose{r1, t}, RelativePose{r1, -t}, RelativePose{r2, t},
          RelativePose{r2, -t}};
}

Eigen::Vector3d TriangulateTwoView(const RelativePose& pose,
                                   const Eigen::Vector2d& x1,
                                   const Eigen::Vector2d& x2) {
  Eigen::Matrix<double, 3, 4> p1;
  p1.setZero();
  p1.leftCols<3>().setIdentity();
  Eigen::Matrix<double, 3, 4> p2;
  p2.leftCols<3>() = pose.rotation;
  p2.col(3) = pose.translation;
  Eigen::Matrix4d a;
  a.row(0) = x1.x() * p1.row(2) - p1.row(0);
  a.row(1) = x1.y() * p1.row(2) - p1.row(1);
  a.row(2) = x2.x() * p2.row(2) - p2.row(0);
  a.row(3) = x2.y() * p2.row(2) - p2.row(1);
  Eigen::JacobiSVD<Eigen::Matrix4d> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d x = svd.matrixV().col(3);
  return x.head<3>() / x(3);
}

}  // namespace trajsfm
