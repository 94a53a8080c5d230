#include "trajsfm/motionseg/inference.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "trajsfm/sfm/epipolar.h"
#include "trajsfm/sfm/two_view.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/random.h"

namespace trajsfm {

std::vector<int> WindowStarts(int num_frames, const SlidingWindowOptions& options) {
  if (options.length < 2) throw ValidationError("window length must be >= 2");
  const int stride = options.stride > 0 ? options.stride : options.length;
  if (stride > options.length) {
    throw ValidationError("window stride " + std::to_string(stride) +
                          " exceeds window length " + std::to_string(options.length));
  }
  std::vector<int> starts;
  for (int s = 0; s < num_frames; s += stride) {
    starts.push_back(s);
    if (s + options.length >= num_frames) break;
  }
  return starts;
}

std::vector<TrajectoryWindow> WindowSpans(const std::vector<PointTrajectory>& trajectories,
                                          int window_start, int length) {
  std::vector<TrajectoryWindow> windows;
  const int window_end = window_start + length - 1;
  for (size_t t = 0; t < trajectories.size(); ++t) {
    const int first = std::max(trajectories[t].start_frame, window_start);
    const int last = std::min(trajectories[t].end_frame(), window_end);
    if (first > last) continue;
    TrajectoryWindow w;
    w.trajectory = static_cast<int>(t);
    w.window_start = window_start;
    w.first_frame = first;
    w.mask.assign(length, 0);
    std::fill(w.mask.begin(), w.mask.begin() + (last - first + 1), 1);
    windows.push_back(std::move(w));
  }
  return windows;
}

MotionLabelMap SlidingWindowInference(const std::vector<PointTrajectory>& trajectories,
                                      int num_frames, const WindowFactory& make_windows,
                                      const WindowClassifier& classify,
                                      const SlidingWindowOptions& options,
                                      SegmentationStats* stats) {
  if (num_frames < 1) throw ValidationError("sequence has no frames");
  std::vector<std::vector<double>> sum(trajectories.size());
  std::vector<std::vector<int>> count(trajectories.size());
  for (size_t t = 0; t < trajectories.size(); ++t) {
    sum[t].assign(trajectories[t].positions.size(), 0.0);
    count[t].assign(trajectories[t].positions.size(), 0);
  }
  for (const int start : WindowStarts(num_frames, options)) {
    const std::vector<TrajectoryWindow> windows = make_windows(start);
    const std::vector<double> out = classify(start, windows);
    if (stats) ++stats->windows;
    for (size_t k = 0; k < windows.size(); ++k) {
      const TrajectoryWindow& w = windows[k];
      const PointTrajectory& traj = trajectories[w.trajectory];
      for (int r = 0; r < w.valid(); ++r) {
        const int idx = w.first_frame + r - traj.start_frame;
        sum[w.trajectory][idx] += out[k];
        ++count[w.trajectory][idx];
      }
    }
  }
  MotionLabelMap labels(trajectories, 0.0, options.threshold);
  for (size_t t = 0; t < trajectories.size(); ++t) {
    for (size_t k = 0; k < sum[t].size(); ++k) {
      if (count[t][k] > 0) {
        labels.SetProbability(static_cast<int>(t), trajectories[t].start_frame + static_cast<int>(k),
                              sum[t][k] / count[t][k]);
      }
    }
  }
  return labels;
}

MotionLabelMap NetworkSegmentation(const std::vector<PointTrajectory>& trajectories,
                                   int num_frames, const std::vector<DepthMap>& depths,
                                   const Intrinsics& intrinsics, int width, int height,
                                   const SegNetWeights& weights,
                                   const SlidingWindowOptions& options, int num_threads,
                                   SegmentationStats* stats) {
  auto make = [&](int start) {
    return Featurize(trajectories, depths, intrinsics, width, height, start,
                     options.length);
  };
  auto classify = [&](int, const std::vector<TrajectoryWindow>& windows) {
    if (windows.size() < 2) {
      if (stats) ++stats->undetermined_windows;
      return std::vector<double>(windows.size(), 0.5);
    }
    return SegNetForward(windows, weights, num_threads);
  };
  return SlidingWindowInference(trajectories, num_frames, make, classify, options, stats);
}

FallbackResult GeometricFallback(const std::vector<PointTrajectory>& trajectories,
                                 const std::vector<TrajectoryWindow>& windows,
                                 const FallbackOptions& options) {
  const auto spanning = std::count_if(windows.begin(), windows.end(),
                                      [](const TrajectoryWindow& w) { return w.valid() >= 2; });
  if (spanning < 8) {
    throw ValidationError("geometric segmentation needs >= 8 trajectories spanning "
                          "2 frames, got " + std::to_string(spanning));
  }
  FallbackResult result;
  result.probabilities.assign(windows.size(), 0.5);
  std::map<std::pair<int, int>, std::optional<Eigen::Matrix3d>> models;
  const double thr = options.inlier_threshold;
  std::vector<bool> scored(windows.size(), false);
  for (size_t k = 0; k < windows.size(); ++k) {
    const TrajectoryWindow& w = windows[k];
    const int a = w.first_frame;
    const int b = w.first_frame + w.valid() - 1;
    if (b - a < std::max(1, options.min_span)) continue;
    auto it = models.find({a, b});
    if (it == models.end()) {
      std::vector<Match> matches;
      for (const auto& other : windows) {
        const PointTrajectory& t = trajectories[other.trajectory];
        if (t.Covers(a) && t.Covers(b)) {
          matches.push_back({t.At(a), t.At(b), other.trajectory});
        }
      }
      std::optional<Eigen::Matrix3d> model;
      if (matches.size() >= 8) {
        RansacOptions ransac;
        ransac.threshold = thr;
        ransac.max_iterations = options.max_iterations;
        ransac.seed = DeriveSeed(options.seed, a, b);
        try {
          model = EstimateFundamental(matches, ransac).fundamental;
        } catch (const DegenerateGeometryError&) {
        }
      }
      it = models.emplace(std::make_pair(a, b), model).first;
    }
    if (!it->second) {
      result.degenerate = true;
      continue;
    }
    const PointTrajectory& t = trajectories[w.trajectory];
    const double e = SampsonDistance(*it->second, t.At(a), t.At(b));
    result.probabilities[k] = 1.0 / (1.0 + std::exp(-(e - thr) / thr));
    scored[k] = true;
  }

  const double radius_sq = options.neighbor_radius * options.neighbor_radius;
  for (size_t k = 0; k < windows.size(); ++k) {
    if (scored[k]) continue;
    const int frame = windows[k].first_frame;
    const Eigen::Vector2d& p = trajectories[windows[k].trajectory].At(frame);
    std::vector<std::pair<double, size_t>> nearby;
    for (size_t m = 0; m < windows.size(); ++m) {
      if (!scored[m]) continue;
      const PointTrajectory& other = trajectories[windows[m].trajectory];
      if (!other.Covers(frame)) continue;
      const double d = (other.At(frame) - p).squaredNorm();
      if (d <= radius_sq) nearby.emplace_back(d, m);
    }
    if (nearby.empty()) {
      result.degenerate = true;
      continue;
    }
    const size_t count = std::min<size_t>(nearby.size(), std::max(1, options.neighbors));
    std::partial_sort(nearby.begin(), nearby.begin() + count, nearby.end());
    double sum = 0.0;
    for (size_t n = 0; n < count; ++n) sum += result.probabilities[nearby[n].second];
    result.probabilities[k] = sum / count;
  }
  return result;
}

MotionLabelMap FallbackSegmentation(const std::vector<PointTrajectory>& trajectories,
                                    int num_frames, const SlidingWindowOptions& options,
                                    const FallbackOptions& fallback,
                                    SegmentationStats* stats) {
  auto make = [&](int start) { return WindowSpans(trajectories, start, options.length); };
  auto classify = [&](int start, const std::vector<TrajectoryWindow>& windows) {
    FallbackOptions local = fallback;
    local.seed = DeriveSeed(fallback.seed, start, -1);
    try {
      FallbackResult r = GeometricFallback(trajectories, windows, local);
      if (r.degenerate && stats) ++stats->undetermined_windows;
      return r.probabilities;
    } catch (const ValidationError&) {
      if (stats) ++stats->undetermined_windows;
      return std::vector<double>(windows.size(), 0.5);
    }
  };
  return SlidingWindowInference(trajectories, num_frames, make, classify, options, stats);
}

}  // namespace trajsfm
