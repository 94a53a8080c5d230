#include "trajsfm/sfm/two_view.h"

#include <algorithm>

#include "trajsfm/sfm/epipolar.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm {

TwoViewResult EstimateTwoView(const std::vector<Match>& matches,
                              const Intrinsics& intrinsics,
                              const TwoViewOptions& options) {
  if (matches.size() < 8) {
    throw ValidationError("two-view estimation needs >= 8 matches, got " +
                          std::to_string(matches.size()));
  }
  const int n = static_cast<int>(matches.size());
  std::vector<Eigen::Vector2d> x1(n);
  std::vector<Eigen::Vector2d> x2(n);
  for (int k = 0; k < n; ++k) {
    x1[k] = intrinsics.Normalize(matches[k].first);
    x2[k] = intrinsics.Normalize(matches[k].second);
  }
  const Eigen::Matrix3d k_inv = intrinsics.K().inverse();

  auto fit = [&](const std::vector<int>& idx) -> std::optional<Eigen::Matrix3d> {
    std::vector<Eigen::Vector2d> a(idx.size());
    std::vector<Eigen::Vector2d> b(idx.size());
    for (size_t k = 0; k < idx.size(); ++k) {
      a[k] = x1[idx[k]];
      b[k] = x2[idx[k]];
    }
    return EstimateEssential8Point(a, b);
  };
  auto residual = [&](const Eigen::Matrix3d& e, int k) {
    const Eigen::Matrix3d f = k_inv.transpose() * e * k_inv;
    return SampsonDistance(f, matches[k].first, matches[k].second);
  };

  RansacOptions ransac;
  ransac.threshold = options.ransac_threshold;
  ransac.max_iterations = options.max_iterations;
  ransac.seed = options.seed;
  const RansacResult consensus = RansacEightPoint(n, fit, residual, ransac);
  if (!consensus.success) {
    throw DegenerateGeometryError("no essential matrix consensus among " +
                                  std::to_string(n) + " matches");
  }

  const auto candidates = DecomposeEssential(consensus.model);
  int best_candidate = -1;
  std::vector<int> best_inliers;
  for (int c = 0; c < 4; ++c) {
    std::vector<int> in_front;
    for (const int k : consensus.inliers) {
      const Eigen::Vector3d p = TriangulateTwoView(candidates[c], x1[k], x2[k]);
      const Eigen::Vector3d q = candidates[c].rotation * p + candidates[c].translation;
      if (p.allFinite() && p.z() > 0.0 && q.z() > 0.0) in_front.push_back(k);
    }
    if (in_front.size() > best_inliers.size()) {
      best_inliers = std::move(in_front);
      best_candidate = c;
    }
  }
  if (best_candidate < 0) {
    throw DegenerateGeometryError(
        "no decomposition of the essential matrix satisfies cheirality");
  }

  TwoViewResult result;
  result.essential = consensus.model;
  result.rotation = candidates[best_candidate].rotation;
  result.direction = candidates[best_candidate].translation;
  result.inliers = std::move(best_inliers);

  const Eigen::Vector3d second_center =
      -result.rotation.transpose() * result.direction;
  std::vector<double> angles;
  angles.reserve(result.inliers.size());
  for (const int k : result.inliers) {
    const Eigen::Vector3d p =
        TriangulateTwoView(candidates[best_candidate], x1[k], x2[k]);
    const Eigen::Vector3d a = p.normalized();
    const Eigen::Vector3d b = (p - second_center).normalized();
    angles.push_back(std::acos(std::clamp(a.dot(b), -1.0, 1.0)));
  }
  std::nth_element(angles.begin(), angles.begin() + angles.size() / 2,
                   angles.end());
  result.median_triangulation_angle_deg = RadToDeg(angles[angles.size() / 2]);
  result.degenerate_translation =
      result.median_triangulation_angle_deg < options.min_triangulation_angle_deg;
  return result;
}

FundamentalResult EstimateFundamental(const std::vector<Match>& matches,
                                      const RansacOptions& options) {
  if (matches.size() < 8) {
    throw ValidationError("fundamental estimation needs >= 8 matches, got " +
                          std::to_string(matches.size()));
  }
  const int n = static_cast<int>(matches.size());
  auto fit = [&](const std::vector<int>& idx) -> std::optional<Eigen::Matrix3d> {
    std::vector<Eigen::Vector2d> a(idx.size());
    std::vector<Eigen::Vector2d> b(idx.size());
    for (size_t k = 0; k < idx.size(); ++k) {
      a[k] = matches[idx[k]].first;
      b[k] = matches[idx[k]].second;
    }
    return EstimateFundamental8Point(a, b);
  };
  auto residual = [&](const Eigen::Matrix3d& f, int k) {
    return SampsonDistance(f, matches[k].first, matches[k].second);
  };
  const RansacResult consensus = RansacEightPoint(n, fit, residual, options);
  if (!consensus.success) {
    throw DegenerateGeometryError("no fundamental matrix consensus among " +
                                  std::to_string(n) + " matches");
  }
  return {consensus.model, consensus.inliers};
}

}  // namespace trajsfm
