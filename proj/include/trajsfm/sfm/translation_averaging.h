#pragma once

#include <vector>

#include <Eigen/Core>

#include "trajsfm/sfm/types.h"

namespace trajsfm {

struct TranslationAveragingOptions {
  int max_iterations = 100;
  // Weight floor: w = 1 / max(residual, epsilon).
  double epsilon = 1e-4;
  // Stop when no center moves more than this (relative to the mean baseline).
  double tolerance = 1e-10;
  // Ratio of the two leading singular values of the stacked directions under
  // which the motion is reported collinear.
  double collinear_ratio = 1e-3;
  // While some edge's angle between c_j - c_i and its direction exceeds
  // prune_threshold_deg, one edge is dropped and the problem re-solved. The
  // prune_candidates worst edges whose removal keeps the graph parallel rigid
  // are tried; the one leaving the smallest summed angle is dropped.
  double prune_threshold_deg = 2.0;
  int prune_candidates = 4;
  // Upper bound on the fraction of edges pruned; 0 disables pruning.
  double max_prune_fraction = 0.35;
};

struct TranslationAveragingResult {
  // Camera centers in world coordinates, centers[0] = 0, scaled so that the
  // edge baselines sum to the number of edges used.
  std::vector<Eigen::Vector3d> centers;
  int iterations = 0;
  bool converged = false;
  bool collinear = false;
  // Edges excluded because their direction was flagged unreliable.
  int skipped_edges = 0;
  // Edges pruned as direction outliers.
  int rejected_edges = 0;
};

// World-frame direction of c_j - c_i implied by an edge and R_j.
Eigen::Vector3d WorldDirection(const ViewEdge& edge, const Eigen::Matrix3d& rj);

// True when the world-frame directions of the edges fix all centers up to
// one global scale (the direction constraint matrix has a 1-d null space).
bool IsParallelRigid(int num_frames, const std::vector<std::pair<int, int>>& edges,
                     const std::vector<Eigen::Vector3d>& directions);

// Least unsquared deviations translation averaging:
//   min sum_e |c_j - c_i - s_e d_e|  subject to s_e >= 1, c_0 = 0,
// solved by IRLS over bound-constrained least squares.
TranslationAveragingResult AverageTranslations(
    const ViewGraph& graph, const std::vector<Eigen::Matrix3d>& rotations,
    const TranslationAveragingOptions& options = {});

}  // namespace trajsfm
