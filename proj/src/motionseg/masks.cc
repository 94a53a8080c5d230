#include "trajsfm/motionseg/masks.h"

#include <algorithm>
#include <cmath>
#include <filesystem>

#include "trajsfm/flow_io/pgm.h"
#include "trajsfm/util/errors.h"

namespace trajsfm {
namespace {

Eigen::Vector2i NearestPixel(const Eigen::Vector2d& p, int width, int height) {
  return {std::clamp(static_cast<int>(std::lround(p.x())), 0, width - 1),
          std::clamp(static_cast<int>(std::lround(p.y())), 0, height - 1)};
}

}  // namespace

Field<1> MotionMaskImage(const std::vector<PointTrajectory>& trajectories,
                         const MotionLabelMap& labels, int width, int height,
                         int frame) {
  Field<1> image(width, height);
  for (size_t t = 0; t < trajectories.size(); ++t) {
    if (!trajectories[t].Covers(frame)) continue;
    const Eigen::Vector2i px = NearestPixel(trajectories[t].At(frame), width, height);
    const bool moving = labels.IsMoving(static_cast<int>(t), frame);
    float& v = image.at(px.x(), px.y());
    v = std::max(v, moving ? kMaskMoving : kMaskStatic);
  }
  return image;
}

void WriteMotionMasks(const std::vector<PointTrajectory>& trajectories,
                      const MotionLabelMap& labels, int width, int height,
                      int num_frames, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (int f = 0; f < num_frames; ++f) {
    WritePgm(MotionMaskImage(trajectories, labels, width, height, f),
             (std::filesystem::path(dir) / ("mask_" + std::to_string(f) + ".pgm")).string());
  }
}

double MaskAgreement(const std::vector<PointTrajectory>& trajectories,
                     const MotionLabelMap& labels,
                     const std::vector<Field<1>>& truth) {
  size_t total = 0;
  size_t agree = 0;
  for (size_t t = 0; t < trajectories.size(); ++t) {
    const PointTrajectory& traj = trajectories[t];
    for (int f = traj.start_frame; f <= traj.end_frame(); ++f) {
      if (f >= static_cast<int>(truth.size())) {
        throw ValidationError("no ground-truth mask for frame " + std::to_string(f));
      }
      const Field<1>& mask = truth[f];
      const Eigen::Vector2i px = NearestPixel(traj.At(f), mask.width(), mask.height());
      const bool moving = mask.at(px.x(), px.y()) > 127.0f;
      agree += moving == labels.IsMoving(static_cast<int>(t), f);
      ++total;
    }
  }
  return total ? static_cast<double>(agree) / total : 1.0;
}

}  // namespace trajsfm
