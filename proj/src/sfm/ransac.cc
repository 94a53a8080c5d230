#include "trajsfm/sfm/ransac.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace trajsfm {
namespace {

constexpr int kSampleSize = 8;

struct Score {
  std::vector<int> inliers;
  // Truncated quadratic (MSAC) cost; lower is better.
  double cost = std::numeric_limits<double>::infinity();
};

Score Evaluate(const Eigen::Matrix3d& model, int num_points,
               const std::function<double(const Eigen::Matrix3d&, int)>& residual,
               double threshold) {
  Score score;
  score.cost = 0.0;
  const double threshold_sq = threshold * threshold;
  for (int k = 0; k < num_points; ++k) {
    const double r = residual(model, k);
    if (r < threshold) {
      score.inliers.push_back(k);
      score.cost += r * r;
    } else {
      score.cost += threshold_sq;
    }
  }
  return score;
}

int RequiredIterations(double inlier_ratio, const RansacOptions& options) {
  if (inlier_ratio >= 1.0) return options.min_iterations;
  const double p_good = std::pow(inlier_ratio, kSampleSize);
  if (p_good <= 0.0) return options.max_iterations;
  const double n = std::log(1.0 - options.confidence) / std::log(1.0 - p_good);
  return std::clamp(static_cast<int>(std::ceil(n)), options.min_iterations,
                    options.max_iterations);
}

}  // namespace

RansacResult RansacEightPoint(
    int num_points,
    const std::function<std::optional<Eigen::Matrix3d>(const std::vector<int>&)>& fit,
    const std::function<double(const Eigen::Matrix3d&, int)>& residual,
    const RansacOptions& options) {
  RansacResult result;
  if (num_points < kSampleSize) return result;

  std::mt19937_64 rng(options.seed);
  std::vector<int> indices(num_points);
  std::iota(indices.begin(), indices.end(), 0);
  std::vector<int> sample(kSampleSize);

  Score best;
  int needed = options.max_iterations;
  int iteration = 0;
  for (; iteration < needed; ++iteration) {
    for (int k = 0; k < kSampleSize; ++k) {
      std::uniform_int_distribution<int> pick(k, num_points - 1);
      std::swap(indices[k], indices[pick(rng)]);
      sample[k] = indices[k];
    }
    const auto model = fit(sample);
    if (!model) continue;
    Score score = Evaluate(*model, num_points, residual, options.threshold);
    if (score.cost < best.cost) {
      best = std::move(score);
      result.model = *model;
      needed = RequiredIterations(
          static_cast<double>(best.inliers.size()) / num_points, options);
    }
  }
  result.iterations = iteration;
  if (best.inliers.size() < static_cast<size_t>(kSampleSize)) return result;

  // Local refinement on the consensus set.
  for (int round = 0; round < 10; ++round) {
    const auto refit = fit(best.inliers);
    if (!refit) break;
    Score score = Evaluate(*refit, num_points, residual, options.threshold);
    if (score.inliers.size() < static_cast<size_t>(kSampleSize) ||
        score.cost > best.cost) {
      break;
    }
    const bool unchanged = score.inliers == best.inliers;
    best = std::move(score);
    result.model = *refit;
    if (unchanged) break;
  }
  result.inliers = std::move(best.inliers);
  result.success = true;
  return result;
}

}  // namespace trajsfm
