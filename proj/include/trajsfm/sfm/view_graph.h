#pragma once

#include <cstdint>
#include <vector>

#include "trajsfm/motionseg/label_map.h"
#include "trajsfm/sfm/types.h"
#include "trajsfm/trajectory/trajectory.h"

namespace trajsfm {

struct ViewGraphOptions {
  std::vector<int> strides = {1, 2, 3};
  int min_inliers = 30;
  size_t max_matches = 2000;
  double ransac_threshold = 1.0;
  int ransac_max_iterations = 2000;
  uint64_t seed = 0;
  int threads = 1;
};

// Candidate pairs (i, i + s) for every stride, verified with two-view
// geometry. Pairs with fewer than min_inliers inliers are dropped. Throws
// DisconnectedGraphError when the kept edges do not connect all frames.
ViewGraph BuildViewGraph(const std::vector<PointTrajectory>& trajectories,
                         const MotionLabelMap& labels,
                         const Intrinsics& intrinsics, int num_frames,
                         const ViewGraphOptions& options);

// Frame sets of the connected components, each sorted, ordered by first frame.
std::vector<std::vector<int>> ConnectedComponents(int num_frames,
                                                  const std::vector<ViewEdge>& edges);

// Throws DisconnectedGraphError listing the components unless connected.
void RequireConnected(const ViewGraph& graph);

}  // namespace trajsfm
