#pragma once

#include <algorithm>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace trajsfm {

// Shared pinhole intrinsics of a sequence, in pixels.
struct Intrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;

  Eigen::Matrix3d K() const {
    Eigen::Matrix3d k;
    k << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return k;
  }
  Eigen::Vector2d Project(const Eigen::Vector3d& point_camera) const {
    return {fx * point_camera.x() / point_camera.z() + cx,
            fy * point_camera.y() / point_camera.z() + cy};
  }
  // Normalized image coordinates (z = 1 ray) of a pixel.
  Eigen::Vector2d Normalize(const Eigen::Vector2d& pixel) const {
    return {(pixel.x() - cx) / fx, (pixel.y() - cy) / fy};
  }

  // Fallback when a sequence ships without intrinsics.
  static Intrinsics Default(int width, int height) {
    const double f = std::max(width, height);
    return {f, f, width / 2.0, height / 2.0};
  }
};

// Reads / writes the one-line "fx fy cx cy" text format.
Intrinsics ReadIntrinsics(const std::string& path);
void WriteIntrinsics(const Intrinsics& intrinsics, const std::string& path);

// World-to-camera rigid transform: x_cam = R * x_world + t.
struct CameraPose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  CameraPose() = default;
  CameraPose(const Eigen::Matrix3d& r, const Eigen::Vector3d& t)
      : rotation(r), translation(t) {
    rotation.normalize();
  }

  Eigen::Matrix3d R() const { return rotation.toRotationMatrix(); }
  Eigen::Vector3d Center() const { return -(rotation.conjugate() * translation); }
  Eigen::Vector3d ToCamera(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }

  static CameraPose FromCenter(const Eigen::Matrix3d& world_to_camera,
                               const Eigen::Vector3d& center) {
    return CameraPose(world_to_camera, -world_to_camera * center);
  }
};

}  // namespace trajsfm
