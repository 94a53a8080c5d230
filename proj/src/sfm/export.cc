#include "trajsfm/sfm/export.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

#include "trajsfm/eval/tum.h"
#include "trajsfm/util/errors.h"

namespace trajsfm {

void WritePosesTum(const Reconstruction& recon, const std::string& path) {
  std::vector<TimedPose> poses;
  poses.reserve(recon.poses.size());
  for (size_t f = 0; f < recon.poses.size(); ++f) {
    poses.push_back(TimedPose::FromCameraPose(static_cast<double>(f), recon.poses[f]));
  }
  WriteTum(poses, path);
}

void WritePly(const Reconstruction& recon, const std::string& path) {
  std::vector<const Track*> points;
  for (const auto& t : recon.tracks) {
    if (t.state == TrackState::kTriangulated) points.push_back(&t);
  }
  // Depth in the first camera, mapped to a blue-to-red ramp.
  double near = std::numeric_limits<double>::infinity();
  double far = -near;
  std::vector<double> depth(points.size());
  for (size_t k = 0; k < points.size(); ++k) {
    depth[k] = recon.poses.empty() ? points[k]->point.z()
                                   : recon.poses[0].ToCamera(points[k]->point).z();
    near = std::min(near, depth[k]);
    far = std::max(far, depth[k]);
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << "ply\nformat ascii 1.0\nelement vertex " << points.size()
      << "\nproperty float x\nproperty float y\nproperty float z\n"
         "property uchar red\nproperty uchar green\nproperty uchar blue\n"
         "end_header\n";
  out << std::setprecision(9);
  for (size_t k = 0; k < points.size(); ++k) {
    const double a = far > near ? (depth[k] - near) / (far - near) : 0.0;
    const int red = static_cast<int>(std::lround(255.0 * a));
    const int green = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(2.0 * a - 1.0))));
    const int blue = 255 - red;
    const Eigen::Vector3d& p = points[k]->point;
    out << static_cast<float>(p.x()) << ' ' << static_cast<float>(p.y()) << ' '
        << static_cast<float>(p.z()) << ' ' << red << ' ' << green << ' ' << blue
        << '\n';
  }
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace trajsfm
