#include "trajsfm/eval/tum.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "trajsfm/util/errors.h"

namespace trajsfm {

TimedPose TimedPose::FromCameraPose(double timestamp, const CameraPose& pose) {
  TimedPose p;
  p.timestamp = timestamp;
  p.orientation = pose.rotation.conjugate();
  p.position = pose.Center();
  return p;
}

CameraPose TimedPose::ToCameraPose() const {
  const Eigen::Matrix3d world_to_camera =
      orientation.normalized().toRotationMatrix().transpose();
  return CameraPose::FromCenter(world_to_camera, position);
}

std::vector<TimedPose> ReadTum(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open trajectory file " + path);
  }
  std::vector<TimedPose> poses;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    TimedPose pose;
    double qx, qy, qz, qw;
    std::string extra;
    if (!(fields >> pose.timestamp >> pose.position.x() >> pose.position.y() >>
          pose.position.z() >> qx >> qy >> qz >> qw) ||
        (fields >> extra)) {
      throw FormatError(path + ":" + std::to_string(line_number) +
                        ": expected 'timestamp tx ty tz qx qy qz qw'");
    }
    pose.orientation = Eigen::Quaterniond(qw, qx, qy, qz);
    const double norm = pose.orientation.norm();
    if (!std::isfinite(norm) || norm < 1e-6 ||
        !pose.position.allFinite() || !std::isfinite(pose.timestamp)) {
      throw FormatError(path + ":" + std::to_string(line_number) +
                        ": invalid pose values");
    }
    // Exactly representable unit quaternions are kept bit-identical.
    if (std::abs(norm - 1.0) > 1e-9) pose.orientation.normalize();
    poses.push_back(pose);
  }
  return poses;
}

void WriteTum(const std::vector<TimedPose>& poses, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << std::setprecision(17);
  for (const auto& p : poses) {
    out << p.timestamp << " " << p.position.x() << " " << p.position.y() << " "
        << p.position.z() << " " << p.orientation.x() << " "
        << p.orientation.y() << " " << p.orientation.z() << " "
        << p.orientation.w() << "\n";
  }
}

}  // namespace trajsfm
