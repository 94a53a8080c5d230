#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "trajsfm/util/camera.h"

namespace trajsfm {

// One line of a TUM trajectory: camera-to-world pose at `timestamp`.
struct TimedPose {
  double timestamp = 0.0;
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Quaterniond orientation = Eigen::Quaterniond::Identity();

  static TimedPose FromCameraPose(double timestamp, const CameraPose& pose);
  CameraPose ToCameraPose() const;
};

// "timestamp tx ty tz qx qy qz qw" per line; '#' lines and blank lines are
// skipped. Malformed lines throw FormatError naming the line number.
std::vector<TimedPose> ReadTum(const std::string& path);
void WriteTum(const std::vector<TimedPose>& poses, const std::string& path);

}  // namespace trajsfm
