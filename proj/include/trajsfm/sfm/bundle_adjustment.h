#pragma once

#include <vector>

#include <Eigen/Core>

#include "trajsfm/sfm/types.h"

namespace trajsfm {

struct BundleAdjustmentOptions {
  int max_iterations = 50;
  // Huber scale in pixels.
  double huber = 2.0;
  double relative_tolerance = 1e-8;
  double initial_damping = 1e-4;
  int max_solve_retries = 10;
};

struct BundleAdjustmentSummary {
  double initial_cost = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  int accepted_steps = 0;
  bool converged = false;
  bool solve_failed = false;
  // Component of the frame-1 translation held fixed.
  int scale_gauge_axis = -1;
  // Tracks rejected after optimization for lying behind a camera.
  int cheirality_rejections = 0;
  std::vector<double> cost_history;
};

// Huber on a squared residual norm: s below delta^2, 2 delta sqrt(s) - delta^2
// above.
double HuberLoss(double squared_norm, double delta);

// Residual and Jacobians of one observation. Pose increments are
// (omega, dt) with R <- Exp(omega) R, t <- t + dt.
struct ReprojectionTerm {
  Eigen::Vector2d residual;
  Eigen::Matrix<double, 2, 6> d_pose;
  Eigen::Matrix<double, 2, 3> d_point;
};

ReprojectionTerm EvaluateReprojection(const CameraPose& pose,
                                      const Eigen::Vector3d& point,
                                      const Eigen::Vector2d& pixel,
                                      const Intrinsics& intrinsics);

// Robust cost over all observations of triangulated tracks.
double ReprojectionCost(const Reconstruction& recon, double huber);

// RMS reprojection error in pixels over triangulated tracks.
double RmsReprojectionError(const Reconstruction& recon);

// Levenberg-Marquardt over all poses except frame 0 and all triangulated
// points, with one frame-1 translation component fixed for the scale gauge.
// Points are eliminated by the Schur complement.
BundleAdjustmentSummary BundleAdjust(Reconstruction& recon,
                                     const BundleAdjustmentOptions& options = {});

}  // namespace trajsfm
