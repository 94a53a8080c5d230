#include "trajsfm/eval/align.h"

#include <cmath>

#include <Eigen/SVD>

#include "trajsfm/util/errors.h"

namespace trajsfm {

Sim3Transform UmeyamaAlign(const std::vector<Eigen::Vector3d>& source,
                           const std::vector<Eigen::Vector3d>& target,
                           bool with_scale) {
  if (source.size() != target.size()) {
    throw ValidationError("alignment needs equal point counts, got " +
                          std::to_string(source.size()) + " and " +
                          std::to_string(target.size()));
  }
  if (source.size() < 3) {
    throw ValidationError("alignment needs at least 3 points");
  }
  const double n = static_cast<double>(source.size());
  Eigen::Vector3d mu_s = Eigen::Vector3d::Zero();
  Eigen::Vector3d mu_t = Eigen::Vector3d::Zero();
  for (size_t k = 0; k < source.size(); ++k) {
    mu_s += source[k];
    mu_t += target[k];
  }
  mu_s /= n;
  mu_t /= n;
  double var_s = 0.0;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (size_t k = 0; k < source.size(); ++k) {
    const Eigen::Vector3d a = source[k] - mu_s;
    const Eigen::Vector3d b = target[k] - mu_t;
    var_s += a.squaredNorm();
    cov += b * a.transpose();
  }
  var_s /= n;
  cov /= n;
  if (var_s <= 1e-300) {
    throw DegenerateGeometryError("alignment source points coincide");
  }
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(cov, Eigen::ComputeFullU |
                                                      Eigen::ComputeFullV);
  Eigen::Vector3d d = Eigen::Vector3d::Ones();
  if (svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0) d(2) = -1.0;
  const Eigen::Matrix3d r = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();

  Sim3Transform out;
  out.rotation = Eigen::Quaterniond(r).normalized();
  out.scale = with_scale ? svd.singularValues().dot(d) / var_s : 1.0;
  out.translation = mu_t - out.scale * (r * mu_s);
  return out;
}

double AlignmentRmse(const Sim3Transform& transform,
                     const std::vector<Eigen::Vector3d>& source,
                     const std::vector<Eigen::Vector3d>& target) {
  double sum = 0.0;
  for (size_t k = 0; k < source.size(); ++k) {
    sum += (transform.Apply(source[k]) - target[k]).squaredNorm();
  }
  return source.empty() ? 0.0 : std::sqrt(sum / static_cast<double>(source.size()));
}

}  // namespace trajsfm
