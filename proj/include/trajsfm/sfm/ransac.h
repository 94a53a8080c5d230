#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace trajsfm {

struct RansacOptions {
  double threshold = 1.0;
  double confidence = 0.9999;
  int min_iterations = 50;
  int max_iterations = 2000;
  uint64_t seed = 0;
};

struct RansacResult {
  Eigen::Matrix3d model = Eigen::Matrix3d::Zero();
  std::vector<int> inliers;
  int iterations = 0;
  bool success = false;
};

// Eight-point RANSAC over a 3x3 model. `fit` estimates a model from the given
// indices (may fail), `residual` scores one correspondence. The best model is
// refit on its inliers until the inlier set stops changing.
RansacResult RansacEightPoint(
    int num_points,
    const std::function<std::optional<Eigen::Matrix3d>(const std::vector<int>&)>& fit,
    const std::function<double(const Eigen::Matrix3d&, int)>& residual,
    const RansacOptions& options);

}  // namespace trajsfm
