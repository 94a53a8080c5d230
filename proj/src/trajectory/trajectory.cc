#include "trajsfm/trajectory/trajectory.h"

#include <cmath>

#include "trajsfm/util/errors.h"
#include "trajsfm/util/parallel.h"

namespace trajsfm {

TrajectorySet::TrajectorySet(int width, int height, int lambda)
    : width_(width), height_(height), lambda_(lambda) {
  if (width <= 0 || height <= 0) {
    throw ValidationError("trajectory set needs a positive image size");
  }
  if (lambda < 1) {
    throw ValidationError("sub-sampling factor must be >= 1, got " +
                          std::to_string(lambda));
  }
  grid_width_ = (width + lambda - 1) / lambda;
  grid_height_ = (height + lambda - 1) / lambda;
  occupancy_.assign(static_cast<size_t>(grid_width_) * grid_height_, 0);
}

Eigen::Vector2i TrajectorySet::CellOf(const Eigen::Vector2d& p) const {
  const int cx = std::min(grid_width_ - 1,
                          static_cast<int>(std::floor(p.x() / lambda_)));
  const int cy = std::min(grid_height_ - 1,
                          static_cast<int>(std::floor(p.y() / lambda_)));
  return {std::max(0, cx), std::max(0, cy)};
}

int TrajectorySet::RebuildOccupancy() {
  std::fill(occupancy_.begin(), occupancy_.end(), 0);
  int terminated = 0;
  for (auto& trajectory : trajectories_) {
    if (!trajectory.alive || trajectory.end_frame() != current_frame_) {
      continue;
    }
    const Eigen::Vector2i cell = CellOf(trajectory.positions.back());
    uint8_t& occupied =
        occupancy_[static_cast<size_t>(cell.y()) * grid_width_ + cell.x()];
    if (occupied) {
      trajectory.alive = false;
      ++terminated;
    } else {
      occupied = 1;
    }
  }
  return terminated;
}

size_t TrajectorySet::NumAlive() const {
  size_t n = 0;
  for (const auto& t : trajectories_) n += t.alive ? 1 : 0;
  return n;
}

void ExtendTrajectories(TrajectorySet& set, const FlowField& forward,
                        const FlowField& backward, double fb_threshold,
                        int num_threads) {
  if (forward.width() != set.width() || forward.height() != set.height() ||
      !forward.SameSize(backward)) {
    throw ValidationError(
        "flow size " + std::to_string(forward.width()) + "x" +
        std::to_string(forward.height()) + " does not match image size " +
        std::to_string(set.width()) + "x" + std::to_string(set.height()));
  }
  const int frame = set.current_frame();
  auto& trajectories = set.trajectories();
  ParallelFor(trajectories.size(), num_threads, [&](size_t i) {
    PointTrajectory& trajectory = trajectories[i];
    if (!trajectory.alive) return;
    if (trajectory.end_frame() != frame) {
      trajectory.alive = false;
      return;
    }
    const Eigen::Vector2d p = trajectory.positions.back();
    const double fb_error = ForwardBackwardError(forward, backward, p);
    if (!(fb_error <= fb_threshold)) {
      trajectory.alive = false;
      return;
    }
    trajectory.positions.push_back(p + SampleBilinear(forward, p));
  });
  set.set_current_frame(frame + 1);
  set.RebuildOccupancy();
}

int SpawnTrajectories(TrajectorySet& set, int frame) {
  if (frame != set.current_frame()) {
    throw ValidationError("spawn frame " + std::to_string(frame) +
                          " is not the current frame " +
                          std::to_string(set.current_frame()));
  }
  int spawned = 0;
  for (int cy = 0; cy < set.grid_height(); ++cy) {
    for (int cx = 0; cx < set.grid_width(); ++cx) {
      if (set.Occupied(cx, cy)) continue;
      PointTrajectory trajectory;
      trajectory.start_frame = frame;
      trajectory.positions.emplace_back(set.lambda() * cx, set.lambda() * cy);
      set.trajectories().push_back(std::move(trajectory));
      ++spawned;
    }
  }
  set.RebuildOccupancy();
  return spawned;
}

}  // namespace trajsfm
