#pragma once

#include <vector>

#include "trajsfm/sfm/ransac.h"
#include "trajsfm/sfm/types.h"

namespace trajsfm {

struct TwoViewOptions {
  // Sampson distance threshold in pixels.
  double ransac_threshold = 1.0;
  int max_iterations = 2000;
  uint64_t seed = 0;
  // Median triangulation angle under which the translation direction is
  // flagged unreliable.
  double min_triangulation_angle_deg = 0.1;
};

struct TwoViewResult {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d direction = Eigen::Vector3d::UnitX();
  Eigen::Matrix3d essential = Eigen::Matrix3d::Zero();
  std::vector<int> inliers;
  double median_triangulation_angle_deg = 0.0;
  bool degenerate_translation = false;
};

// Relative pose of the second view from pixel matches: RANSAC over normalized
// eight-point essential fits with Sampson inliers, refit on all inliers, and
// cheirality selection among the four decompositions.
TwoViewResult EstimateTwoView(const std::vector<Match>& matches,
                              const Intrinsics& intrinsics,
                              const TwoViewOptions& options = {});

struct FundamentalResult {
  Eigen::Matrix3d fundamental = Eigen::Matrix3d::Zero();
  std::vector<int> inliers;
};

// RANSAC fundamental matrix on pixel matches. Throws DegenerateGeometryError
// when no model is found.
FundamentalResult EstimateFundamental(const std::vector<Match>& matches,
                                      const RansacOptions& options);

}  // namespace trajsfm
