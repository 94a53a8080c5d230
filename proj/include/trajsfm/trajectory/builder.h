#pragma once

#include <string>

#include "trajsfm/trajectory/trajectory.h"
#include "trajsfm/trajectory/window_optimizer.h"

namespace trajsfm {

struct TrajectoryOptions {
  int lambda = 2;
  double fb_threshold = 1.0;
  double fb_threshold_stride2 = 1.0;
  bool enable_window_optim = true;
  // 0 detects the sequence length from the consecutive flow files.
  int num_frames = 0;
  int num_threads = 1;
  WindowOptimizerOptions window;
};

struct TrajectoryBuildResult {
  TrajectorySet set;
  int num_frames = 0;
  double flow_io_seconds = 0.0;
  int optimized_windows = 0;
  // Windows left at their accumulated positions because the stride-2 flow
  // failed its forward-backward check.
  int skipped_windows = 0;
};

// Counts frames 0..n-1 for which flow_{i}_{i+1}.flo exists in flow_dir.
int DetectNumFrames(const std::string& flow_dir);

// Sequential extend -> (optional) path-consistency refinement of the last
// three positions -> spawn over the whole sequence.
TrajectoryBuildResult BuildTrajectories(const std::string& flow_dir,
                                        const TrajectoryOptions& options);

}  // namespace trajsfm
