#include "trajsfm/sfm/correspondences.h"

#include <algorithm>
#include <random>

namespace trajsfm {

std::vector<Match> SampleCorrespondences(
    const std::vector<PointTrajectory>& trajectories,
    const MotionLabelMap& labels, int i, int j, size_t max_n, uint64_t seed) {
  std::vector<Match> matches;
  for (size_t t = 0; t < trajectories.size(); ++t) {
    const PointTrajectory& traj = trajectories[t];
    if (!traj.Covers(i) || !traj.Covers(j)) continue;
    const int id = static_cast<int>(t);
    if (!labels.IsStatic(id, i) || !labels.IsStatic(id, j)) continue;
    matches.push_back({traj.At(i), traj.At(j), id});
  }
  if (matches.size() <= max_n) return matches;

  std::mt19937_64 rng(seed);
  std::vector<size_t> order(matches.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  for (size_t k = 0; k < max_n; ++k) {
    std::uniform_int_distribution<size_t> pick(k, order.size() - 1);
    std::swap(order[k], order[pick(rng)]);
  }
  order.resize(max_n);
  std::sort(order.begin(), order.end());
  std::vector<Match> subset;
  subset.reserve(max_n);
  for (const size_t k : order) subset.push_back(matches[k]);
  return subset;
}

}  // namespace trajsfm
