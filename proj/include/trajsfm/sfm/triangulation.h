#pragma once

#include <vector>

#include "trajsfm/motionseg/label_map.h"
#include "trajsfm/sfm/types.h"
#include "trajsfm/trajectory/trajectory.h"

namespace trajsfm {

struct TriangulationOptions {
  double min_angle_deg = 1.5;
  double max_reprojection = 4.0;
};

// One track per trajectory with at least two static-labeled frames.
std::vector<Track> BuildTracks(const std::vector<PointTrajectory>& trajectories,
                               const MotionLabelMap& labels);

// Linear multi-view triangulation of pixel observations.
Eigen::Vector3d TriangulateMultiView(const std::vector<Observation>& observations,
                                     const std::vector<CameraPose>& poses,
                                     const Intrinsics& intrinsics);

// Largest angle between viewing rays of the observations, degrees.
double MaxTriangulationAngleDeg(const Eigen::Vector3d& point,
                                const std::vector<Observation>& observations,
                                const std::vector<CameraPose>& poses);

double MeanReprojectionError(const Eigen::Vector3d& point,
                             const std::vector<Observation>& observations,
                             const std::vector<CameraPose>& poses,
                             const Intrinsics& intrinsics);

// Triangulates and sets the state of one track.
void TriangulateTrack(Track& track, const std::vector<CameraPose>& poses,
                      const Intrinsics& intrinsics,
                      const TriangulationOptions& options);

Reconstruction TriangulateTracks(const std::vector<PointTrajectory>& trajectories,
                                 const MotionLabelMap& labels,
                                 const std::vector<CameraPose>& poses,
                                 const Intrinsics& intrinsics,
                                 const TriangulationOptions& options = {},
                                 int num_threads = 1);

}  // namespace trajsfm
