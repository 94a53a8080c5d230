#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "trajsfm/sfm/types.h"

namespace trajsfm {

struct RotationAveragingOptions {
  int max_iterations = 100;
  // Weight floor: w = 1 / max(|r|, epsilon), radians.
  double epsilon = 1e-3;
  // Stop when the largest update falls below this angle, radians.
  double tolerance = 1e-6;
  // Random spanning trees tried for the initial guess besides the
  // maximum-inlier tree.
  int random_trees = 32;
  uint64_t seed = 0;
};

struct RotationAveragingResult {
  // World-to-camera rotations, rotations[0] = I.
  std::vector<Eigen::Matrix3d> rotations;
  int iterations = 0;
  bool converged = false;
  // Sum of residual angles of the returned estimate.
  double cost = 0.0;
};

// Residual rotation vector Log(R_ij R_i R_j^T) of one edge.
Eigen::Vector3d RotationResidual(const ViewEdge& edge, const Eigen::Matrix3d& ri,
                                 const Eigen::Matrix3d& rj);

// L1 rotation averaging by IRLS in the tangent space, initialized from the
// best of several spanning-tree chainings. Requires a connected graph.
RotationAveragingResult AverageRotations(const ViewGraph& graph,
                                         const RotationAveragingOptions& options = {});

// Drops edges whose relative rotation disagrees with the global estimate by
// more than max_error_deg. Throws DisconnectedGraphError if frames are cut off.
ViewGraph FilterRotationOutliers(const ViewGraph& graph,
                                 const std::vector<Eigen::Matrix3d>& rotations,
                                 double max_error_deg = 5.0);

}  // namespace trajsfm
