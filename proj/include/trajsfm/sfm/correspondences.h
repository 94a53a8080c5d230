#pragma once

#include <cstdint>
#include <vector>

#include "trajsfm/motionseg/label_map.h"
#include "trajsfm/sfm/types.h"
#include "trajsfm/trajectory/trajectory.h"

namespace trajsfm {

// Matches between frames i and j from every trajectory that covers both
// frames with static labels there. When more than max_n qualify, a seeded
// uniform subset is returned in trajectory order.
std::vector<Match> SampleCorrespondences(
    const std::vector<PointTrajectory>& trajectories,
    const MotionLabelMap& labels, int i, int j, size_t max_n, uint64_t seed);

}  // namespace trajsfm
