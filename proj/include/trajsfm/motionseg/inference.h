#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "trajsfm/motionseg/features.h"
#include "trajsfm/motionseg/label_map.h"
#include "trajsfm/motionseg/segnet.h"

namespace trajsfm {

struct SlidingWindowOptions {
  int length = 10;
  // 0 means `length` (non-overlapping windows).
  int stride = 0;
  double threshold = 0.5;
};

struct SegmentationStats {
  int windows = 0;
  // Windows whose outputs fell back to 0.5 (too few trajectories or no
  // geometric model).
  int undetermined_windows = 0;
};

// Window starts 0, stride, 2 stride, ... below num_frames.
std::vector<int> WindowStarts(int num_frames, const SlidingWindowOptions& options);

// Windows without features: trajectory id, first frame and mask only.
std::vector<TrajectoryWindow> WindowSpans(const std::vector<PointTrajectory>& trajectories,
                                          int window_start, int length);

// Runs `classify` on the windows produced by `make_windows` for each window
// start and assigns every (trajectory, frame) the mean output of the windows
// covering it.
using WindowFactory = std::function<std::vector<TrajectoryWindow>(int window_start)>;
using WindowClassifier =
    std::function<std::vector<double>(int window_start, const std::vector<TrajectoryWindow>&)>;
MotionLabelMap SlidingWindowInference(const std::vector<PointTrajectory>& trajectories,
                                      int num_frames, const WindowFactory& make_windows,
                                      const WindowClassifier& classify,
                                      const SlidingWindowOptions& options,
                                      SegmentationStats* stats = nullptr);

// Network segmentation over featurized windows.
MotionLabelMap NetworkSegmentation(const std::vector<PointTrajectory>& trajectories,
                                   int num_frames, const std::vector<DepthMap>& depths,
                                   const Intrinsics& intrinsics, int width, int height,
                                   const SegNetWeights& weights,
                                   const SlidingWindowOptions& options,
                                   int num_threads = 1,
                                   SegmentationStats* stats = nullptr);

struct FallbackOptions {
  // Sampson distance scale in pixels.
  double inlier_threshold = 0.5;
  int max_iterations = 2000;
  uint64_t seed = 0;
  // Trajectories spanning fewer frames inside the window take the mean
  // probability of up to `neighbors` scored trajectories within
  // `neighbor_radius` pixels in their first frame.
  int min_span = 3;
  int neighbors = 4;
  double neighbor_radius = 4.0;
};

struct FallbackResult {
  std::vector<double> probabilities;  // one per window
  bool degenerate = false;            // some trajectory got 0.5
};

// Epipolar consistency of each window's trajectory between its first and last
// frame inside the window: probability = sigmoid((e - thr) / thr) with e the
// Sampson distance to a RANSAC fundamental matrix fit on every trajectory
// spanning the same two frames. Short trajectories borrow from their
// neighbors. Throws ValidationError unless at least 8 windows span 2 or more
// frames.
FallbackResult GeometricFallback(const std::vector<PointTrajectory>& trajectories,
                                 const std::vector<TrajectoryWindow>& windows,
                                 const FallbackOptions& options);

MotionLabelMap FallbackSegmentation(const std::vector<PointTrajectory>& trajectories,
                                    int num_frames, const SlidingWindowOptions& options,
                                    const FallbackOptions& fallback,
                                    SegmentationStats* stats = nullptr);

}  // namespace trajsfm
