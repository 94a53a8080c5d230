#include "trajsfm/motionseg/features.h"

#include <algorithm>

#include "trajsfm/util/errors.h"

namespace trajsfm {

std::vector<TrajectoryWindow> Featurize(const std::vector<PointTrajectory>& trajectories,
                                        const std::vector<DepthMap>& depths,
                                        const Intrinsics& intrinsics, int width,
                                        int height, int window_start, int length) {
  if (length < 1) throw ValidationError("window length must be >= 1");
  const int window_end = window_start + length - 1;
  std::vector<TrajectoryWindow> windows;
  for (size_t t = 0; t < trajectories.size(); ++t) {
    const PointTrajectory& traj = trajectories[t];
    const int first = std::max(traj.start_frame, window_start);
    const int last = std::min(traj.end_frame(), window_end);
    if (first > last) continue;

    TrajectoryWindow w;
    w.trajectory = static_cast<int>(t);
    w.window_start = window_start;
    w.first_frame = first;
    w.features = FeatureMatrix::Zero(length, kFeatureDim);
    w.mask.assign(length, 0);
    const int valid = last - first + 1;
    Eigen::Matrix<double, Eigen::Dynamic, 6> base(valid, 6);
    for (int k = 0; k < valid; ++k) {
      const int frame = first + k;
      if (frame < 0 || frame >= static_cast<int>(depths.size()) ||
          depths[frame].empty()) {
        throw ValidationError("missing depth for frame " + std::to_string(frame));
      }
      const Eigen::Vector2d& p = traj.At(frame);
      const double z = SampleBilinear(depths[frame], p)(0);
      base.row(k) << p.x() / width, p.y() / height,
          (p.x() - intrinsics.cx) * z / intrinsics.fx,
          (p.y() - intrinsics.cy) * z / intrinsics.fy, z, 0.0;
    }
    for (int k = 0; k < valid; ++k) {
      const bool has_next = k + 1 < valid;
      auto delta = [&](int c) { return has_next ? base(k + 1, c) - base(k, c) : 0.0; };
      w.features.row(k) << base(k, 0), base(k, 1), delta(0), delta(1), base(k, 2),
          base(k, 3), base(k, 4), delta(2), delta(3), delta(4);
      w.mask[k] = 1;
    }
    windows.push_back(std::move(w));
  }
  return windows;
}

}  // namespace trajsfm
