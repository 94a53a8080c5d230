#pragma once

#include <vector>

#include "trajsfm/trajectory/trajectory.h"

namespace trajsfm {

// Motion probability per (trajectory id, frame), laid out like the positions
// of each trajectory. label = probability > threshold (moving).
class MotionLabelMap {
 public:
  MotionLabelMap() = default;
  // Every point starts with `initial` probability.
  MotionLabelMap(const std::vector<PointTrajectory>& trajectories,
                 double initial, double threshold = 0.5);

  static MotionLabelMap AllStatic(const std::vector<PointTrajectory>& trajectories) {
    return MotionLabelMap(trajectories, 0.0);
  }

  size_t size() const { return probabilities_.size(); }
  double threshold() const { return threshold_; }

  bool Covers(int trajectory, int frame) const;
  double Probability(int trajectory, int frame) const;
  void SetProbability(int trajectory, int frame, double probability);
  bool IsMoving(int trajectory, int frame) const {
    return Probability(trajectory, frame) > threshold_;
  }
  bool IsStatic(int trajectory, int frame) const {
    return !IsMoving(trajectory, frame);
  }

 private:
  std::vector<int> start_frames_;
  std::vector<std::vector<double>> probabilities_;
  double threshold_ = 0.5;
};

}  // namespace trajsfm
