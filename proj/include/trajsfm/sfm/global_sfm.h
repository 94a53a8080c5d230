#pragma once

#include <vector>

#include "trajsfm/sfm/bundle_adjustment.h"
#include "trajsfm/sfm/rotation_averaging.h"
#include "trajsfm/sfm/translation_averaging.h"
#include "trajsfm/sfm/triangulation.h"
#include "trajsfm/sfm/view_graph.h"

namespace trajsfm {

struct GlobalSfmOptions {
  ViewGraphOptions view_graph;
  RotationAveragingOptions rotation;
  double max_rotation_error_deg = 5.0;
  TranslationAveragingOptions translation;
  TriangulationOptions triangulation;
  BundleAdjustmentOptions bundle_adjustment;
  bool run_bundle_adjustment = true;
  int threads = 1;
};

struct GlobalSfmReport {
  int candidate_edges = 0;
  int verified_edges = 0;
  int kept_edges = 0;
  bool rotation_converged = false;
  bool translation_collinear = false;
  size_t tracks = 0;
  size_t triangulated = 0;
  BundleAdjustmentSummary bundle_adjustment;
};

// sample -> view graph -> rotation averaging -> outlier filter -> translation
// averaging -> triangulation -> bundle adjustment. Errors are rethrown as
// StageError tagged with the failing stage.
Reconstruction RunGlobalSfm(const std::vector<PointTrajectory>& trajectories,
                            const MotionLabelMap& labels,
                            const Intrinsics& intrinsics, int num_frames,
                            const GlobalSfmOptions& options,
                            GlobalSfmReport* report = nullptr);

}  // namespace trajsfm
