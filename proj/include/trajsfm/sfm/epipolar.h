#pragma once

#include <array>
#include <optional>
#include <span>

#include <Eigen/Core>

namespace trajsfm {

// Hartley normalization: translate to zero mean and scale to RMS distance
// sqrt(2). Returns the 3x3 similarity applied to the points.
Eigen::Matrix3d HartleyNormalization(std::span<const Eigen::Vector2d> points);

// Linear eight-point fit of x2^T E x1 = 0 on normalized camera coordinates,
// projected onto the essential manifold (singular values s, s, 0).
std::optional<Eigen::Matrix3d> EstimateEssential8Point(
    std::span<const Eigen::Vector2d> x1, std::span<const Eigen::Vector2d> x2);

// Linear eight-point fit of x2^T F x1 = 0 on pixel coordinates with rank 2
// enforced.
std::optional<Eigen::Matrix3d> EstimateFundamental8Point(
    std::span<const Eigen::Vector2d> x1, std::span<const Eigen::Vector2d> x2);

// First-order geometric (Sampson) distance of a correspondence, in the units
// of the points.
double SampsonDistance(const Eigen::Matrix3d& f, const Eigen::Vector2d& x1,
                       const Eigen::Vector2d& x2);

struct RelativePose {
  Eigen::Matrix3d rotation;
  Eigen::Vector3d translation;
};

// The four (R, t) factorizations E = [t]x R with unit t.
std::array<RelativePose, 4> DecomposeEssential(const Eigen::Matrix3d& e);

// Linear two-view triangulation of normalized coordinates with the first
// camera at the origin. Returns the point in the first camera frame.
Eigen::Vector3d TriangulateTwoView(const RelativePose& pose,
                                   const Eigen::Vector2d& x1,
                                   const Eigen::Vector2d& x2);

}  // namespace trajsfm
