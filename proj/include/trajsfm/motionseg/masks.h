#pragma once

#include <string>
#include <vector>

#include "trajsfm/flow_io/field.h"
#include "trajsfm/motionseg/label_map.h"

namespace trajsfm {

inline constexpr float kMaskMoving = 255.0f;
inline constexpr float kMaskStatic = 128.0f;

// Labels of the trajectory points of one frame at their nearest pixels:
// 255 moving, 128 static, 0 no trajectory.
Field<1> MotionMaskImage(const std::vector<PointTrajectory>& trajectories,
                         const MotionLabelMap& labels, int width, int height,
                         int frame);

// Writes mask_{f}.pgm for every frame into dir.
void WriteMotionMasks(const std::vector<PointTrajectory>& trajectories,
                      const MotionLabelMap& labels, int width, int height,
                      int num_frames, const std::string& dir);

// Fraction of trajectory points whose label matches the ground-truth mask
// (moving where the mask is above 127) at the nearest pixel.
double MaskAgreement(const std::vector<PointTrajectory>& trajectories,
                     const MotionLabelMap& labels,
                     const std::vector<Field<1>>& truth);

}  // namespace trajsfm
