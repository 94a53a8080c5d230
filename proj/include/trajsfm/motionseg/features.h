#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "trajsfm/flow_io/field.h"
#include "trajsfm/trajectory/trajectory.h"
#include "trajsfm/util/camera.h"

namespace trajsfm {

inline constexpr int kFeatureDim = 10;

using FeatureMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, kFeatureDim, Eigen::RowMajor>;

// Rows (u, v, du, dv, x, y, z, dx, dy, dz) of one trajectory inside a window.
// The first `valid` rows are real samples of frames first_frame, first_frame+1,
// ...; the remaining rows are zero padding with mask 0.
struct TrajectoryWindow {
  int trajectory = -1;
  int window_start = 0;
  int first_frame = 0;
  FeatureMatrix features;
  std::vector<uint8_t> mask;

  int length() const { return static_cast<int>(mask.size()); }
  int valid() const {
    int n = 0;
    while (n < length() && mask[n]) ++n;
    return n;
  }
};

// One window per trajectory overlapping frames [window_start, window_start+L).
// u, v are divided by the image width and height; x = (u_px - cx) z / fx,
// y = (v_px - cy) z / fy with z the bilinearly sampled normalized depth.
// Deltas are forward differences; the last valid one is zero.
// depths[f] must exist for every covered frame.
std::vector<TrajectoryWindow> Featurize(const std::vector<PointTrajectory>& trajectories,
                                        const std::vector<DepthMap>& depths,
                                        const Intrinsics& intrinsics, int width,
                                        int height, int window_start, int length);

}  // namespace trajsfm
