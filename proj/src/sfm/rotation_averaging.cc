#include "trajsfm/sfm/rotation_averaging.h"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>

#include <Eigen/Cholesky>

#include "trajsfm/sfm/view_graph.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm {
namespace {

// Residuals above this angle count as outliers when ranking initial guesses.
constexpr double kInitTruncation = 0.0872664626;  // 5 degrees

// Kruskal over edges in the given order; returns edge indices of the tree.
std::vector<int> SpanningTree(int num_frames, const std::vector<ViewEdge>& edges,
                              const std::vector<int>& order) {
  std::vector<int> parent(num_frames);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::vector<int> tree;
  for (const int e : order) {
    const int a = find(edges[e].i);
    const int b = find(edges[e].j);
    if (a == b) continue;
    parent[a] = b;
    tree.push_back(e);
  }
  return tree;
}

std::vector<Eigen::Matrix3d> ChainTree(int num_frames,
                                       const std::vector<ViewEdge>& edges,
                                       const std::vector<int>& tree) {
  std::vector<std::vector<int>> adjacent(num_frames);
  for (const int e : tree) {
    adjacent[edges[e].i].push_back(e);
    adjacent[edges[e].j].push_back(e);
  }
  std::vector<Eigen::Matrix3d> rotations(num_frames, Eigen::Matrix3d::Identity());
  std::vector<bool> visited(num_frames, false);
  std::queue<int> queue;
  queue.push(0);
  visited[0] = true;
  while (!queue.empty()) {
    const int f = queue.front();
    queue.pop();
    for (const int e : adjacent[f]) {
      const ViewEdge& edge = edges[e];
      const int other = edge.i == f ? edge.j : edge.i;
      if (visited[other]) continue;
      visited[other] = true;
      rotations[other] = edge.i == f ? Eigen::Matrix3d(edge.rotation * rotations[f])
                                     : Eigen::Matrix3d(edge.rotation.transpose() * rotations[f]);
      queue.push(other);
    }
  }
  return rotations;
}

double TotalCost(const std::vector<ViewEdge>& edges,
                 const std::vector<Eigen::Matrix3d>& rotations, double truncation) {
  double cost = 0.0;
  for (const auto& e : edges) {
    cost += std::min(truncation,
                     RotationResidual(e, rotations[e.i], rotations[e.j]).norm());
  }
  return cost;
}

}  // namespace

Eigen::Vector3d RotationResidual(const ViewEdge& edge, const Eigen::Matrix3d& ri,
                                 const Eigen::Matrix3d& rj) {
  return LogSO3(edge.rotation * ri * rj.transpose());
}

RotationAveragingResult AverageRotations(const ViewGraph& graph,
                                         const RotationAveragingOptions& options) {
  RequireConnected(graph);
  const int n = graph.num_frames;
  const auto& edges = graph.edges;
  RotationAveragingResult result;
  if (n == 0) return result;

  // Initial guess: best of the maximum-inlier tree and random trees.
  std::vector<int> order(edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return edges[a].num_inliers > edges[b].num_inliers;
  });
  std::vector<Eigen::Matrix3d> rotations =
      ChainTree(n, edges, SpanningTree(n, edges, order));
  double init_cost = TotalCost(edges, rotations, kInitTruncation);
  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.random_trees && init_cost > 0.0; ++k) {
    std::shuffle(order.begin(), order.end(), rng);
    auto candidate = ChainTree(n, edges, SpanningTree(n, edges, order));
    const double cost = TotalCost(edges, candidate, kInitTruncation);
    if (cost < init_cost) {
      init_cost = cost;
      rotations = std::move(candidate);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<Eigen::Matrix3d> best = rotations;
  double best_cost = TotalCost(edges, rotations, inf);
  const int dim = 3 * (n - 1);
  for (int iter = 1; iter <= options.max_iterations && dim > 0; ++iter) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    for (const auto& e : edges) {
      const Eigen::Vector3d r = RotationResidual(e, rotations[e.i], rotations[e.j]);
      const double w = 1.0 / std::max(r.norm(), options.epsilon);
      // Linearized residual: R_ij d_i - d_j + r.
      const int a = 3 * (e.i - 1);
      const int b = 3 * (e.j - 1);
      if (e.i > 0) {
        h.block<3, 3>(a, a) += w * Eigen::Matrix3d::Identity();
        g.segment<3>(a) += w * e.rotation.transpose() * r;
      }
      if (e.j > 0) {
        h.block<3, 3>(b, b) += w * Eigen::Matrix3d::Identity();
        g.segment<3>(b) -= w * r;
      }
      if (e.i > 0 && e.j > 0) {
        h.block<3, 3>(a, b) -= w * e.rotation.transpose();
        h.block<3, 3>(b, a) -= w * e.rotation;
      }
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() != Eigen::Success) break;
    const Eigen::VectorXd delta = -ldlt.solve(g);
    if (!delta.allFinite()) break;
    double max_update = 0.0;
    for (int f = 1; f < n; ++f) {
      const Eigen::Vector3d d = delta.segment<3>(3 * (f - 1));
      max_update = std::max(max_update, d.norm());
      rotations[f] = ProjectToRotation(ExpSO3(d) * rotations[f]);
    }
    result.iterations = iter;
    const double cost = TotalCost(edges, rotations, inf);
    if (cost <= best_cost) {
      best_cost = cost;
      best = rotations;
    }
    if (max_update < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  if (dim == 0) result.converged = true;
  result.rotations = std::move(best);
  result.cost = best_cost;
  return result;
}

ViewGraph FilterRotationOutliers(const ViewGraph& graph,
                                 const std::vector<Eigen::Matrix3d>& rotations,
                                 double max_error_deg) {
  ViewGraph filtered;
  filtered.num_frames = graph.num_frames;
  const double max_error = DegToRad(max_error_deg);
  for (const auto& e : graph.edges) {
    const double err =
        RotationAngle(e.rotation, rotations[e.j] * rotations[e.i].transpose());
    if (err <= max_error) filtered.edges.push_back(e);
  }
  RequireConnected(filtered);
  return filtered;
}

}  // namespace trajsfm
