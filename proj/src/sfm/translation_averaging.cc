#include "trajsfm/sfm/translation_averaging.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "trajsfm/sfm/view_graph.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm {
namespace {

// Pulls each scale toward 1 so that the bound-constrained problem is strictly
// convex even when directions are collinear; relative to the mean weight.
constexpr double kScalePrior = 1e-12;

struct EdgeTerm {
  int i;
  int j;
  Eigen::Vector3d direction;
};

// min sum_e w_e |c_j - c_i - s_e d_e|^2 + rho sum_e (s_e - 1)^2, s_e >= 1,
// c_0 = 0, by a primal active-set method started from the feasible z.
// z = [c_1 .. c_{n-1}, s_1 .. s_E].
class BoundedLeastSquares {
 public:
  BoundedLeastSquares(int num_frames, const std::vector<EdgeTerm>& edges)
      : edges_(edges), num_c_(3 * (num_frames - 1)),
        dim_(num_c_ + static_cast<int>(edges.size())) {}

  int dim() const { return dim_; }
  int scale_index(int e) const { return num_c_ + e; }

  void Solve(const std::vector<double>& weights, Eigen::VectorXd& z,
             std::vector<bool>& active) {
    BuildSystem(weights);
    const int num_edges = static_cast<int>(edges_.size());
    const int max_steps = 4 * num_edges + 16;
    for (int step = 0; step < max_steps; ++step) {
      const Eigen::VectorXd target = SolveEquality(active);
      double alpha = 1.0;
      int blocking = -1;
      for (int e = 0; e < num_edges; ++e) {
        if (active[e]) continue;
        const int k = scale_index(e);
        if (target(k) < 1.0 && z(k) > target(k)) {
          const double a = (z(k) - 1.0) / (z(k) - target(k));
          if (a < alpha) {
            alpha = a;
            blocking = e;
          }
        }
      }
      z += alpha * (target - z);
      if (blocking >= 0) {
        active[blocking] = true;
        z(scale_index(blocking)) = 1.0;
        continue;
      }
      // Stationary for the working set; release the most negative multiplier.
      const Eigen::VectorXd gradient = q_ * z - b_;
      int release = -1;
      double most_negative = -1e-12 * (1.0 + b_.cwiseAbs().maxCoeff());
      for (int e = 0; e < num_edges; ++e) {
        if (active[e] && gradient(scale_index(e)) < most_negative) {
          most_negative = gradient(scale_index(e));
          release = e;
        }
      }
      if (release < 0) return;
      active[release] = false;
    }
  }

 private:
  void BuildSystem(const std::vector<double>& weights) {
    q_ = Eigen::MatrixXd::Zero(dim_, dim_);
    b_ = Eigen::VectorXd::Zero(dim_);
    double mean_weight = 0.0;
    for (const double w : weights) mean_weight += w;
    mean_weight /= std::max<size_t>(1, weights.size());
    const double rho = kScalePrior * mean_weight;
    for (size_t e = 0; e < edges_.size(); ++e) {
      const EdgeTerm& t = edges_[e];
      const double w = weights[e];
      const int s = scale_index(static_cast<int>(e));
      const int ci = 3 * (t.i - 1);
      const int cj = 3 * (t.j - 1);
      if (t.i > 0) q_.block<3, 3>(ci, ci) += w * Eigen::Matrix3d::Identity();
      if (t.j > 0) q_.block<3, 3>(cj, cj) += w * Eigen::Matrix3d::Identity();
      if (t.i > 0 && t.j > 0) {
        q_.block<3, 3>(ci, cj) -= w * Eigen::Matrix3d::Identity();
        q_.block<3, 3>(cj, ci) -= w * Eigen::Matrix3d::Identity();
      }
      if (t.j > 0) {
        q_.block<3, 1>(cj, s) -= w * t.direction;
        q_.block<1, 3>(s, cj) -= w * t.direction.transpose();
      }
      if (t.i > 0) {
        q_.block<3, 1>(ci, s) += w * t.direction;
        q_.block<1, 3>(s, ci) += w * t.direction.transpose();
      }
      q_(s, s) += w * t.direction.squaredNorm() + rho;
      b_(s) += rho;
    }
  }

  // Minimizer with active scales held at 1.
  Eigen::VectorXd SolveEquality(const std::vector<bool>& active) const {
    std::vector<int> free;
    free.reserve(dim_);
    for (int k = 0; k < num_c_; ++k) free.push_back(k);
    for (size_t e = 0; e < edges_.size(); ++e) {
      if (!active[e]) free.push_back(scale_index(static_cast<int>(e)));
    }
    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(dim_);
    for (size_t e = 0; e < edges_.size(); ++e) {
      if (active[e]) fixed(scale_index(static_cast<int>(e))) = 1.0;
    }
    const Eigen::VectorXd rhs_full = b_ - q_ * fixed;
    const int m = static_cast<int>(free.size());
    Eigen::MatrixXd a(m, m);
    Eigen::VectorXd rhs(m);
    for (int r = 0; r < m; ++r) {
      rhs(r) = rhs_full(free[r]);
      for (int c = 0; c < m; ++c) a(r, c) = q_(free[r], free[c]);
    }
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
    const Eigen::VectorXd x = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !x.allFinite()) {
      throw NumericError("translation averaging: singular normal equations");
    }
    Eigen::VectorXd out = fixed;
    for (int r = 0; r < m; ++r) out(free[r]) = x(r);
    return out;
  }

  const std::vector<EdgeTerm>& edges_;
  int num_c_;
  int dim_;
  Eigen::MatrixXd q_;
  Eigen::VectorXd b_;
};

}  // namespace

bool IsParallelRigid(int num_frames, const std::vector<std::pair<int, int>>& edges,
                     const std::vector<Eigen::Vector3d>& directions) {
  if (num_frames <= 1) return true;
  if (ConnectedComponents(num_frames, [&] {
        std::vector<ViewEdge> v(edges.size());
        for (size_t k = 0; k < edges.size(); ++k) {
          v[k].i = edges[k].first;
          v[k].j = edges[k].second;
        }
        return v;
      }()).size() > 1) {
    return false;
  }
  // Unknowns: c_1..c_{n-1} (c_0 = 0) and one length per edge.
  const int m = static_cast<int>(edges.size());
  const int vars = 3 * (num_frames - 1) + m;
  if (3 * m < vars - 1) return false;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * m, vars);
  for (int k = 0; k < m; ++k) {
    const auto [i, j] = edges[k];
    if (j > 0) a.block<3, 3>(3 * k, 3 * (j - 1)).setIdentity();
    if (i > 0) a.block<3, 3>(3 * k, 3 * (i - 1)) -= Eigen::Matrix3d::Identity();
    a.block<3, 1>(3 * k, 3 * (num_frames - 1) + k) = -directions[k];
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a.transpose() * a,
                                                           Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = eig.eigenvalues();
  return ev(1) > 1e-10 * ev(vars - 1);
}

Eigen::Vector3d WorldDirection(const ViewEdge& edge, const Eigen::Matrix3d& rj) {
  return -(rj.transpose() * edge.direction).normalized();
}

namespace {

struct LudSolution {
  std::vector<Eigen::Vector3d> centers;
  int iterations = 0;
  bool converged = false;
};

LudSolution SolveLud(int n, const std::vector<EdgeTerm>& terms,
                     const TranslationAveragingOptions& options) {
  const int num_edges = static_cast<int>(terms.size());
  BoundedLeastSquares problem(n, terms);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(problem.dim());
  for (int e = 0; e < num_edges; ++e) z(problem.scale_index(e)) = 1.0;
  std::vector<bool> active(num_edges, true);
  std::vector<double> weights(num_edges, 1.0);

  auto center = [&](const Eigen::VectorXd& v, int f) -> Eigen::Vector3d {
    return f == 0 ? Eigen::Vector3d::Zero() : Eigen::Vector3d(v.segment<3>(3 * (f - 1)));
  };
  LudSolution out;
  Eigen::VectorXd previous = z;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    problem.Solve(weights, z, active);
    out.iterations = iter;
    double baseline = 0.0;
    for (int e = 0; e < num_edges; ++e) {
      const EdgeTerm& t = terms[e];
      const Eigen::Vector3d delta = center(z, t.j) - center(z, t.i);
      baseline += delta.norm();
      const double r = (delta - z(problem.scale_index(e)) * t.direction).norm();
      weights[e] = 1.0 / std::max(r, options.epsilon);
    }
    baseline /= std::max(1, num_edges);
    double change = 0.0;
    for (int f = 1; f < n; ++f) {
      change = std::max(change, (center(z, f) - center(previous, f)).norm());
    }
    previous = z;
    if (iter > 1 && change <= options.tolerance * std::max(baseline, 1.0)) {
      out.converged = true;
      break;
    }
  }
  out.centers.resize(n);
  for (int f = 0; f < n; ++f) out.centers[f] = center(z, f);
  return out;
}

double DirectionAngle(const std::vector<Eigen::Vector3d>& centers, const EdgeTerm& t) {
  const Eigen::Vector3d delta = centers[t.j] - centers[t.i];
  if (delta.norm() == 0.0) return M_PI;
  return std::acos(std::clamp(delta.normalized().dot(t.direction), -1.0, 1.0));
}

}  // namespace

TranslationAveragingResult AverageTranslations(
    const ViewGraph& graph, const std::vector<Eigen::Matrix3d>& rotations,
    const TranslationAveragingOptions& options) {
  RequireConnected(graph);
  const int n = graph.num_frames;
  TranslationAveragingResult result;
  result.centers.assign(n, Eigen::Vector3d::Zero());
  if (n <= 1) {
    result.converged = true;
    return result;
  }

  ViewGraph usable;
  usable.num_frames = n;
  for (const auto& e : graph.edges) {
    if (!e.degenerate_translation) usable.edges.push_back(e);
  }
  if (ConnectedComponents(n, usable.edges).size() > 1) {
    usable.edges = graph.edges;
  }
  result.skipped_edges =
      static_cast<int>(graph.edges.size() - usable.edges.size());

  std::vector<EdgeTerm> terms;
  terms.reserve(usable.edges.size());
  Eigen::MatrixXd stacked(usable.edges.size(), 3);
  for (size_t k = 0; k < usable.edges.size(); ++k) {
    const ViewEdge& e = usable.edges[k];
    terms.push_back({e.i, e.j, WorldDirection(e, rotations[e.j])});
    stacked.row(k) = terms.back().direction.transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked);
  const Eigen::VectorXd sv = svd.singularValues();
  result.collinear = sv.size() < 2 || sv(1) < options.collinear_ratio * sv(0);

  LudSolution solution = SolveLud(n, terms, options);
  const int max_pruned =
      static_cast<int>(options.max_prune_fraction * static_cast<double>(terms.size()));
  const double threshold = DegToRad(options.prune_threshold_deg);
  while (!result.collinear && result.rejected_edges < max_pruned) {
    std::vector<int> order(terms.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> angle(terms.size());
    for (size_t k = 0; k < terms.size(); ++k) angle[k] = DirectionAngle(solution.centers, terms[k]);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return angle[a] > angle[b]; });
    if (angle[order[0]] <= threshold) break;
    // Among the worst edges whose removal keeps the graph rigid, drop the one
    // after which the remaining directions are explained best.
    int drop = -1;
    double best_score = std::numeric_limits<double>::infinity();
    LudSolution best;
    int tried = 0;
    for (const int k : order) {
      if (angle[k] <= threshold || tried == options.prune_candidates) break;
      std::vector<EdgeTerm> rest;
      std::vector<std::pair<int, int>> pairs;
      std::vector<Eigen::Vector3d> dirs;
      for (size_t q = 0; q < terms.size(); ++q) {
        if (static_cast<int>(q) == k) continue;
        rest.push_back(terms[q]);
        pairs.emplace_back(terms[q].i, terms[q].j);
        dirs.push_back(terms[q].direction);
      }
      if (!IsParallelRigid(n, pairs, dirs)) continue;
      ++tried;
      LudSolution candidate = SolveLud(n, rest, options);
      double score = 0.0;
      for (const auto& t : rest) score += DirectionAngle(candidate.centers, t);
      if (score < best_score) {
        best_score = score;
        drop = k;
        best = std::move(candidate);
      }
    }
    if (drop < 0) break;
    terms.erase(terms.begin() + drop);
    ++result.rejected_edges;
    solution = std::move(best);
  }
  result.iterations = solution.iterations;
  result.converged = solution.converged;

  const int num_edges = static_cast<int>(terms.size());
  double total = 0.0;
  for (const auto& t : terms) total += (solution.centers[t.j] - solution.centers[t.i]).norm();
  const double scale = total > 0.0 ? num_edges / total : 1.0;
  for (int f = 0; f < n; ++f) result.centers[f] = scale * solution.centers[f];
  return result;
}

}  // namespace trajsfm
