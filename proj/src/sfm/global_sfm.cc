#include "trajsfm/sfm/global_sfm.h"

#include <utility>

#include "trajsfm/util/errors.h"

namespace trajsfm {
namespace {

template <typename Fn>
auto RunStage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

Reconstruction RunGlobalSfm(const std::vector<PointTrajectory>& trajectories,
                            const MotionLabelMap& labels,
                            const Intrinsics& intrinsics, int num_frames,
                            const GlobalSfmOptions& options,
                            GlobalSfmReport* report) {
  GlobalSfmReport local;
  GlobalSfmReport& rep = report ? *report : local;
  if (num_frames < 2) {
    throw StageError("view_graph", "need at least 2 frames, got " +
                                       std::to_string(num_frames));
  }

  ViewGraphOptions graph_options = options.view_graph;
  graph_options.threads = options.threads;
  for (const int s : graph_options.strides) {
    for (int i = 0; i + s < num_frames; ++i) ++rep.candidate_edges;
  }
  ViewGraph graph = RunStage("view_graph", [&] {
    return BuildViewGraph(trajectories, labels, intrinsics, num_frames,
                          graph_options);
  });
  rep.verified_edges = static_cast<int>(graph.edges.size());

  const RotationAveragingResult rotations = RunStage("rotation_averaging", [&] {
    return AverageRotations(graph, options.rotation);
  });
  rep.rotation_converged = rotations.converged;

  graph = RunStage("rotation_filter", [&] {
    return FilterRotationOutliers(graph, rotations.rotations,
                                  options.max_rotation_error_deg);
  });
  rep.kept_edges = static_cast<int>(graph.edges.size());

  const TranslationAveragingResult centers = RunStage("translation_averaging", [&] {
    return AverageTranslations(graph, rotations.rotations, options.translation);
  });
  rep.translation_collinear = centers.collinear;

  Reconstruction recon = RunStage("triangulation", [&] {
    std::vector<CameraPose> poses(num_frames);
    for (int f = 0; f < num_frames; ++f) {
      poses[f] = CameraPose::FromCenter(rotations.rotations[f], centers.centers[f]);
    }
    Reconstruction r = TriangulateTracks(trajectories, labels, poses, intrinsics,
                                         options.triangulation, options.threads);
    if (r.NumTriangulated() == 0) {
      throw DegenerateGeometryError("no track passed triangulation checks");
    }
    return r;
  });

  if (options.run_bundle_adjustment) {
    rep.bundle_adjustment = RunStage("bundle_adjustment", [&] {
      return BundleAdjust(recon, options.bundle_adjustment);
    });
  }
  rep.tracks = recon.tracks.size();
  rep.triangulated = recon.NumTriangulated();
  return recon;
}

}  // namespace trajsfm
