#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "trajsfm/flow_io/field.h"

namespace trajsfm {

// Subpixel track of one scene point. positions[k] belongs to frame
// start_frame + k, without gaps.
struct PointTrajectory {
  int start_frame = 0;
  std::vector<Eigen::Vector2d> positions;
  bool alive = true;

  int end_frame() const {
    return start_frame + static_cast<int>(positions.size()) - 1;
  }
  int length() const { return static_cast<int>(positions.size()); }
  bool Covers(int frame) const {
    return frame >= start_frame && frame <= end_frame();
  }
  const Eigen::Vector2d& At(int frame) const {
    return positions[frame - start_frame];
  }
  Eigen::Vector2d& At(int frame) { return positions[frame - start_frame]; }
};

// Trajectories of one sequence plus the occupancy grid of the current frame
// at lambda-subsampled resolution.
class TrajectorySet {
 public:
  TrajectorySet(int width, int height, int lambda);

  int width() const { return width_; }
  int height() const { return height_; }
  int lambda() const { return lambda_; }
  int grid_width() const { return grid_width_; }
  int grid_height() const { return grid_height_; }

  // Frame that live trajectories currently end at.
  int current_frame() const { return current_frame_; }
  void set_current_frame(int frame) { current_frame_ = frame; }

  std::vector<PointTrajectory>& trajectories() { return trajectories_; }
  const std::vector<PointTrajectory>& trajectories() const {
    return trajectories_;
  }

  bool Occupied(int cell_x, int cell_y) const {
    return occupancy_[static_cast<size_t>(cell_y) * grid_width_ + cell_x] != 0;
  }
  const std::vector<uint8_t>& occupancy() const { return occupancy_; }
  Eigen::Vector2i CellOf(const Eigen::Vector2d& p) const;

  // Marks the cells of live trajectories ending at the current frame. When two
  // live trajectories fall into one cell the earlier-created one keeps it and
  // the other is terminated. Returns the number of terminated trajectories.
  int RebuildOccupancy();

  size_t NumAlive() const;

 private:
  int width_;
  int height_;
  int lambda_;
  int grid_width_;
  int grid_height_;
  int current_frame_ = 0;
  std::vector<PointTrajectory> trajectories_;
  std::vector<uint8_t> occupancy_;
};

// Advances every live trajectory from frame t to t+1 with p + F_fwd(p), or
// terminates it (without appending) when the forward-backward error exceeds
// fb_threshold or the target leaves the image. Rebuilds the occupancy of t+1.
void ExtendTrajectories(TrajectorySet& set, const FlowField& forward,
                        const FlowField& backward, double fb_threshold,
                        int num_threads = 1);

// Starts a length-1 trajectory at the grid point (lambda*cx, lambda*cy) of
// every unoccupied cell of `frame`. Returns the number of new trajectories.
int SpawnTrajectories(TrajectorySet& set, int frame);

}  // namespace trajsfm
