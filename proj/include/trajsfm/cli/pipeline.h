#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajsfm/motionseg/inference.h"
#include "trajsfm/sfm/global_sfm.h"
#include "trajsfm/trajectory/builder.h"

namespace trajsfm {

enum class SegmenterKind { kFallback, kNetwork };

struct PipelineConfig {
  std::string flows_dir;
  std::string depths_dir;
  // Empty: fx = fy = max(W, H), cx = W/2, cy = H/2.
  std::string intrinsics_path;
  std::string out_dir;
  int lambda = 2;
  int window = 10;
  int window_stride = 0;
  double fb_threshold = 1.0;
  double fb_threshold_stride2 = 1.0;
  bool segmentation = true;
  bool trajectory_optimization = true;
  SegmenterKind segmenter = SegmenterKind::kFallback;
  std::string weights_path;
  double motion_threshold = 0.5;
  double fallback_threshold = 0.5;
  std::vector<int> strides = {1, 2, 3};
  int min_inliers = 30;
  double ransac_threshold = 1.0;
  int ba_iterations = 50;
  uint64_t seed = 0;
  int threads = 1;

  // Throws ValidationError when a value is out of range.
  void Validate() const;
};

struct StageTimings {
  double flow_io = 0.0;
  double trajectories = 0.0;
  double segmentation = 0.0;
  double global_ba = 0.0;
};

struct PipelineResult {
  int num_frames = 0;
  int width = 0;
  int height = 0;
  std::vector<PointTrajectory> trajectories;
  MotionLabelMap labels;
  Reconstruction reconstruction;
  GlobalSfmReport sfm;
  SegmentationStats segmentation;
  StageTimings timings;
};

// Trajectories -> motion labels -> global SfM. When out_dir is set, writes
// poses.txt (TUM), points.ply, masks/mask_{f}.pgm, trajectories.ptrj and
// timing.txt. Failures are thrown as StageError.
PipelineResult RunPipeline(const PipelineConfig& config);

std::string FormatTimings(const StageTimings& timings);

}  // namespace trajsfm
