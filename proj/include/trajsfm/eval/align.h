#pragma once

#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace trajsfm {

// x -> scale * R x + t.
struct Sim3Transform {
  double scale = 1.0;
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  Eigen::Vector3d Apply(const Eigen::Vector3d& x) const {
    return scale * (rotation * x) + translation;
  }
};

// Least-squares similarity (or rigid motion when with_scale is false) mapping
// source points onto target points. Throws ValidationError for fewer than 3
// points or mismatched counts, DegenerateGeometryError when the source points
// coincide.
Sim3Transform UmeyamaAlign(const std::vector<Eigen::Vector3d>& source,
                           const std::vector<Eigen::Vector3d>& target,
                           bool with_scale = true);

// Root mean square distance between transformed source and target.
double AlignmentRmse(const Sim3Transform& transform,
                     const std::vector<Eigen::Vector3d>& source,
                     const std::vector<Eigen::Vector3d>& target);

}  // namespace trajsfm
