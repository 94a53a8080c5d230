#include "trajsfm/trajectory/builder.h"

#include <chrono>
#include <filesystem>

#include "trajsfm/flow_io/flo.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/parallel.h"

namespace trajsfm {
namespace {

namespace fs = std::filesystem;

class FlowLoader {
 public:
  explicit FlowLoader(std::string dir) : dir_(std::move(dir)) {}

  FlowField Load(int from, int to) {
    const fs::path path = fs::path(dir_) / FlowFileName(from, to);
    if (!fs::exists(path)) {
      throw IoError("missing flow file " + path.string() + " for pair (" +
                    std::to_string(from) + " -> " + std::to_string(to) + ")");
    }
    const auto start = std::chrono::steady_clock::now();
    FlowField flow = ReadFlo(path.string());
    seconds_ += std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    return flow;
  }

  double seconds() const { return seconds_; }

 private:
  std::string dir_;
  double seconds_ = 0.0;
};

}  // namespace

int DetectNumFrames(const std::string& flow_dir) {
  int frames = 1;
  while (fs::exists(fs::path(flow_dir) / FlowFileName(frames - 1, frames))) {
    ++frames;
  }
  return frames;
}

TrajectoryBuildResult BuildTrajectories(const std::string& flow_dir,
                                        const TrajectoryOptions& options) {
  if (!fs::is_directory(flow_dir)) {
    throw IoError("flow directory " + flow_dir + " does not exist");
  }
  const int num_frames =
      options.num_frames > 0 ? options.num_frames : DetectNumFrames(flow_dir);
  FlowLoader loader(flow_dir);

  if (num_frames < 2) {
    // Surface the missing first pair with its name.
    loader.Load(0, 1);
  }

  FlowField forward = loader.Load(0, 1);
  FlowField backward = loader.Load(1, 0);
  TrajectoryBuildResult result{
      TrajectorySet(forward.width(), forward.height(), options.lambda)};
  result.num_frames = num_frames;
  TrajectorySet& set = result.set;
  SpawnTrajectories(set, 0);

  for (int t = 0; t + 1 < num_frames; ++t) {
    if (t > 0) {
      forward = loader.Load(t, t + 1);
      backward = loader.Load(t + 1, t);
    }
    ExtendTrajectories(set, forward, backward, options.fb_threshold,
                       options.num_threads);

    if (options.enable_window_optim && t >= 1) {
      const FlowField forward_2 = loader.Load(t - 1, t + 1);
      const FlowField backward_2 = loader.Load(t + 1, t - 1);
      auto& trajectories = set.trajectories();
      std::vector<int8_t> outcome(trajectories.size(), 0);
      ParallelFor(trajectories.size(), options.num_threads, [&](size_t i) {
        PointTrajectory& trajectory = trajectories[i];
        if (!trajectory.alive || trajectory.length() < 3 ||
            trajectory.end_frame() != t + 1) {
          return;
        }
        const Eigen::Vector2d p0 = trajectory.At(t - 1);
        if (!(ForwardBackwardError(forward_2, backward_2, p0) <=
              options.fb_threshold_stride2)) {
          outcome[i] = -1;
          return;
        }
        const WindowResult window =
            OptimizeWindow(p0, trajectory.At(t), trajectory.At(t + 1), forward,
                           forward_2, options.window);
        trajectory.At(t) = window.p1;
        trajectory.At(t + 1) = window.p2;
        outcome[i] = 1;
      });
      for (const int8_t o : outcome) {
        result.optimized_windows += o > 0 ? 1 : 0;
        result.skipped_windows += o < 0 ? 1 : 0;
      }
      set.RebuildOccupancy();
    }
    SpawnTrajectories(set, t + 1);
  }
  result.flow_io_seconds = loader.seconds();
  return result;
}

}  // namespace trajsfm
