#include "trajsfm/sfm/view_graph.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <sstream>

#include "trajsfm/sfm/correspondences.h"
#include "trajsfm/sfm/two_view.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/parallel.h"
#include "trajsfm/util/random.h"

namespace trajsfm {

ViewGraph BuildViewGraph(const std::vector<PointTrajectory>& trajectories,
                         const MotionLabelMap& labels,
                         const Intrinsics& intrinsics, int num_frames,
                         const ViewGraphOptions& options) {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> strides = options.strides;
  std::sort(strides.begin(), strides.end());
  strides.erase(std::unique(strides.begin(), strides.end()), strides.end());
  for (int i = 0; i < num_frames; ++i) {
    for (const int s : strides) {
      if (s <= 0) throw ValidationError("view graph strides must be positive");
      if (i + s < num_frames) pairs.emplace_back(i, i + s);
    }
  }

  std::vector<std::optional<ViewEdge>> results(pairs.size());
  ParallelFor(pairs.size(), options.threads, [&](size_t p) {
    const auto [i, j] = pairs[p];
    const uint64_t seed = DeriveSeed(options.seed, i, j);
    std::vector<Match> matches = SampleCorrespondences(
        trajectories, labels, i, j, options.max_matches, seed);
    if (static_cast<int>(matches.size()) < std::max(8, options.min_inliers)) {
      return;
    }
    TwoViewOptions two_view;
    two_view.ransac_threshold = options.ransac_threshold;
    two_view.max_iterations = options.ransac_max_iterations;
    two_view.seed = SplitMix(seed);
    TwoViewResult geometry;
    try {
      geometry = EstimateTwoView(matches, intrinsics, two_view);
    } catch (const DegenerateGeometryError&) {
      return;
    }
    if (static_cast<int>(geometry.inliers.size()) < options.min_inliers) return;
    ViewEdge edge;
    edge.i = i;
    edge.j = j;
    edge.rotation = geometry.rotation;
    edge.direction = geometry.direction;
    edge.degenerate_translation = geometry.degenerate_translation;
    edge.inliers.reserve(geometry.inliers.size());
    for (const int k : geometry.inliers) edge.inliers.push_back(matches[k]);
    edge.num_inliers = static_cast<int>(edge.inliers.size());
    results[p] = std::move(edge);
  });

  ViewGraph graph;
  graph.num_frames = num_frames;
  for (auto& r : results) {
    if (r) graph.edges.push_back(std::move(*r));
  }
  RequireConnected(graph);
  return graph;
}

std::vector<std::vector<int>> ConnectedComponents(int num_frames,
                                                  const std::vector<ViewEdge>& edges) {
  std::vector<int> parent(num_frames);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : edges) {
    const int a = find(e.i);
    const int b = find(e.j);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<int>> components;
  std::vector<int> index(num_frames, -1);
  for (int f = 0; f < num_frames; ++f) {
    const int root = find(f);
    if (index[root] < 0) {
      index[root] = static_cast<int>(components.size());
      components.emplace_back();
    }
    components[index[root]].push_back(f);
  }
  return components;
}

void RequireConnected(const ViewGraph& graph) {
  const auto components = ConnectedComponents(graph.num_frames, graph.edges);
  if (components.size() <= 1) return;
  std::ostringstream msg;
  msg << "view graph has " << components.size() << " components:";
  for (const auto& c : components) {
    msg << " {";
    for (size_t k = 0; k < c.size(); ++k) msg << (k ? "," : "") << c[k];
    msg << "}";
  }
  throw DisconnectedGraphError(msg.str());
}

}  // namespace trajsfm
