#pragma once

#include <vector>

#include <Eigen/Core>

#include "trajsfm/util/camera.h"

namespace trajsfm {

// Pixel correspondence between two frames, tagged with its trajectory.
struct Match {
  Eigen::Vector2d first = Eigen::Vector2d::Zero();
  Eigen::Vector2d second = Eigen::Vector2d::Zero();
  int trajectory = -1;
};

// Verified two-view geometry between frames i < j with
// x_j = rotation * x_i + t, direction = t / |t|.
struct ViewEdge {
  int i = 0;
  int j = 0;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
  std::vector<Match> inliers;
  int num_inliers = 0;
  // Set when the inliers barely triangulate, so direction is unreliable.
  bool degenerate_translation = false;
};

struct ViewGraph {
  int num_frames = 0;
  std::vector<ViewEdge> edges;
};

struct Observation {
  int frame = 0;
  Eigen::Vector2d pixel = Eigen::Vector2d::Zero();
};

enum class TrackState { kPending, kTriangulated, kRejected };

// One landmark per point trajectory.
struct Track {
  int trajectory = -1;
  std::vector<Observation> observations;
  Eigen::Vector3d point = Eigen::Vector3d::Zero();
  TrackState state = TrackState::kPending;
};

struct Reconstruction {
  Intrinsics intrinsics;
  std::vector<CameraPose> poses;
  std::vector<Track> tracks;

  size_t NumTriangulated() const {
    size_t n = 0;
    for (const auto& t : tracks) n += t.state == TrackState::kTriangulated;
    return n;
  }
};

}  // namespace trajsfm
