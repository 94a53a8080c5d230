#pragma once

#include <string>
#include <vector>

#include "trajsfm/eval/align.h"
#include "trajsfm/eval/tum.h"

namespace trajsfm {

// Absolute trajectory error after Sim(3) alignment of est onto gt.
double AteRmse(const std::vector<TimedPose>& est, const std::vector<TimedPose>& gt);

struct RpeResult {
  double trans = 0.0;
  double rot_deg = 0.0;
  size_t pairs = 0;
};

// Relative pose error over pairs (i, i + delta) of the scale-aligned estimate.
RpeResult Rpe(const std::vector<TimedPose>& est, const std::vector<TimedPose>& gt,
              int delta = 1);

struct MetricsReport {
  double ate_rmse = 0.0;
  double rpe_trans = 0.0;
  double rpe_rot = 0.0;
  size_t poses = 0;
  int delta = 1;
};

// Pairs poses by timestamp (exact match) and evaluates both metrics.
MetricsReport Evaluate(const std::vector<TimedPose>& est,
                       const std::vector<TimedPose>& gt, int delta = 1);

std::string FormatReport(const MetricsReport& report);
// "key=value" lines: ate_rmse, rpe_trans, rpe_rot.
std::string FormatKeyValue(const MetricsReport& report);

}  // namespace trajsfm
