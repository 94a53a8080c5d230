#include "trajsfm/cli/pipeline.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "trajsfm/flow_io/pfm.h"
#include "trajsfm/motionseg/masks.h"
#include "trajsfm/sfm/export.h"
#include "trajsfm/trajectory/dump.h"
#include "trajsfm/util/errors.h"

namespace trajsfm {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename Fn>
auto Stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const IoError& e) {
    throw StageError(stage, e.what(), true);
  } catch (const FormatError& e) {
    throw StageError(stage, e.what(), true);
  } catch (const LengthError& e) {
    throw StageError(stage, e.what(), true);
  } catch (const ValidationError& e) {
    throw StageError(stage, e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

void PipelineConfig::Validate() const {
  if (flows_dir.empty()) throw ValidationError("--flows is required");
  if (lambda < 1) throw ValidationError("lambda must be >= 1");
  if (window < 2) throw ValidationError("window must be >= 2");
  if (window_stride < 0 || window_stride > window) {
    throw ValidationError("window stride must lie in [0, window]");
  }
  if (!(fb_threshold > 0.0) || !(fb_threshold_stride2 > 0.0)) {
    throw ValidationError("forward-backward thresholds must be positive");
  }
  if (!(fallback_threshold > 0.0) || !(ransac_threshold > 0.0)) {
    throw ValidationError("inlier thresholds must be positive");
  }
  if (!(motion_threshold > 0.0 && motion_threshold < 1.0)) {
    throw ValidationError("motion threshold must lie in (0, 1)");
  }
  if (strides.empty()) throw ValidationError("at least one view-graph stride is needed");
  for (const int s : strides) {
    if (s < 1) throw ValidationError("view-graph strides must be >= 1");
  }
  if (min_inliers < 8) throw ValidationError("min_inliers must be >= 8");
  if (ba_iterations < 0) throw ValidationError("BA iteration cap must be >= 0");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (segmentation && segmenter == SegmenterKind::kNetwork && weights_path.empty()) {
    throw ValidationError("network segmenter needs --weights");
  }
}

PipelineResult RunPipeline(const PipelineConfig& config) {
  Stage("config", [&] { config.Validate(); });
  PipelineResult result;
  std::optional<Intrinsics> provided;
  if (!config.intrinsics_path.empty()) {
    provided = Stage("intrinsics", [&] { return ReadIntrinsics(config.intrinsics_path); });
  }

  auto start = Clock::now();
  TrajectoryBuildResult built = Stage("trajectories", [&] {
    TrajectoryOptions options;
    options.lambda = config.lambda;
    options.fb_threshold = config.fb_threshold;
    options.fb_threshold_stride2 = config.fb_threshold_stride2;
    options.enable_window_optim = config.trajectory_optimization;
    options.num_threads = config.threads;
    return BuildTrajectories(config.flows_dir, options);
  });
  result.timings.flow_io = built.flow_io_seconds;
  result.timings.trajectories = SecondsSince(start) - built.flow_io_seconds;
  result.num_frames = built.num_frames;
  result.width = built.set.width();
  result.height = built.set.height();
  result.trajectories = std::move(built.set.trajectories());

  const Intrinsics intrinsics = config.intrinsics_path.empty()
                                    ? Intrinsics::Default(result.width, result.height)
                                    : *provided;

  start = Clock::now();
  result.labels = Stage("segmentation", [&] {
    SlidingWindowOptions window;
    window.length = config.window;
    window.stride = config.window_stride;
    window.threshold = config.motion_threshold;
    if (!config.segmentation) {
      return MotionLabelMap(result.trajectories, 0.0, config.motion_threshold);
    }
    if (config.segmenter == SegmenterKind::kNetwork) {
      const SegNetWeights weights = LoadWeights(config.weights_path);
      if (config.depths_dir.empty()) {
        throw ValidationError("network segmenter needs --depths");
      }
      std::vector<DepthMap> depths;
      const double io_start = SecondsSince(start);
      for (int f = 0; f < result.num_frames; ++f) {
        depths.push_back(ReadDepth((fs::path(config.depths_dir) / DepthFileName(f)).string()));
      }
      result.timings.flow_io += SecondsSince(start) - io_start;
      return NetworkSegmentation(result.trajectories, result.num_frames, depths,
                                 intrinsics, result.width, result.height, weights,
                                 window, config.threads, &result.segmentation);
    }
    FallbackOptions fallback;
    fallback.inlier_threshold = config.fallback_threshold;
    fallback.seed = config.seed;
    return FallbackSegmentation(result.trajectories, result.num_frames, window,
                                fallback, &result.segmentation);
  });
  result.timings.segmentation = SecondsSince(start);

  start = Clock::now();
  GlobalSfmOptions sfm;
  sfm.view_graph.strides = config.strides;
  sfm.view_graph.min_inliers = config.min_inliers;
  sfm.view_graph.ransac_threshold = config.ransac_threshold;
  sfm.view_graph.seed = config.seed;
  sfm.rotation.seed = config.seed;
  sfm.bundle_adjustment.max_iterations = config.ba_iterations;
  sfm.run_bundle_adjustment = config.ba_iterations > 0;
  sfm.threads = config.threads;
  result.reconstruction = RunGlobalSfm(result.trajectories, result.labels, intrinsics,
                                       result.num_frames, sfm, &result.sfm);
  result.timings.global_ba = SecondsSince(start);

  if (!config.out_dir.empty()) {
    Stage("output", [&] {
      const fs::path out(config.out_dir);
      fs::create_directories(out);
      WritePosesTum(result.reconstruction, (out / "poses.txt").string());
      WritePly(result.reconstruction, (out / "points.ply").string());
      WriteMotionMasks(result.trajectories, result.labels, result.width, result.height,
                       result.num_frames, (out / "masks").string());
      WriteTrajectoryDump(result.trajectories, (out / "trajectories.ptrj").string());
      std::ofstream timing(out / "timing.txt");
      timing << FormatTimings(result.timings);
      if (!timing) throw IoError("failed writing timing report");
    });
  }
  return result;
}

std::string FormatTimings(const StageTimings& timings) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << "flow_io " << timings.flow_io << "\n"
      << "trajectories " << timings.trajectories << "\n"
      << "segmentation " << timings.segmentation << "\n"
      << "global_ba " << timings.global_ba << "\n"
      << "total "
      << timings.flow_io + timings.trajectories + timings.segmentation + timings.global_ba
      << "\n";
  return out.str();
}

}  // namespace trajsfm
