#include "trajsfm/motionseg/label_map.h"

#include <cmath>

#include "trajsfm/util/errors.h"

namespace trajsfm {

MotionLabelMap::MotionLabelMap(const std::vector<PointTrajectory>& trajectories,
                               double initial, double threshold)
    : threshold_(threshold) {
  start_frames_.reserve(trajectories.size());
  probabilities_.reserve(trajectories.size());
  for (const auto& t : trajectories) {
    start_frames_.push_back(t.start_frame);
    probabilities_.emplace_back(t.positions.size(), initial);
  }
}

bool MotionLabelMap::Covers(int trajectory, int frame) const {
  if (trajectory < 0 || trajectory >= static_cast<int>(probabilities_.size())) {
    return false;
  }
  const int k = frame - start_frames_[trajectory];
  return k >= 0 && k < static_cast<int>(probabilities_[trajectory].size());
}

double MotionLabelMap::Probability(int trajectory, int frame) const {
  if (!Covers(trajectory, frame)) {
    throw RangeError("no motion label for trajectory " +
                     std::to_string(trajectory) + " at frame " +
                     std::to_string(frame));
  }
  return probabilities_[trajectory][frame - start_frames_[trajectory]];
}

void MotionLabelMap::SetProbability(int trajectory, int frame,
                                    double probability) {
  if (!Covers(trajectory, frame)) {
    throw RangeError("no motion label for trajectory " +
                     std::to_string(trajectory) + " at frame " +
                     std::to_string(frame));
  }
  if (!std::isfinite(probability) || probability < 0.0 || probability > 1.0) {
    throw ValidationError("motion probability must lie in [0, 1]");
  }
  probabilities_[trajectory][frame - start_frames_[trajectory]] = probability;
}

}  // namespace trajsfm
