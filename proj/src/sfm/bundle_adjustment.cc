#include "trajsfm/sfm/bundle_adjustment.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "trajsfm/util/errors.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm {
namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat63 = Eigen::Matrix<double, 6, 3>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

double HuberWeight(double squared_norm, double delta) {
  return squared_norm <= delta * delta ? 1.0 : delta / std::sqrt(squared_norm);
}

struct ObservationBlock {
  int camera;  // -1 when the frame is held fixed
  Mat63 w;     // J_c^T W J_p
};

// Gauss-Newton blocks at one linearization point.
struct Linearization {
  std::vector<Mat6> u;
  std::vector<Vec6> gc;
  std::vector<Eigen::Matrix3d> v;
  std::vector<Eigen::Vector3d> gp;
  std::vector<std::vector<ObservationBlock>> blocks;
};

}  // namespace

double HuberLoss(double squared_norm, double delta) {
  if (squared_norm <= delta * delta) return squared_norm;
  return 2.0 * delta * std::sqrt(squared_norm) - delta * delta;
}

ReprojectionTerm EvaluateReprojection(const CameraPose& pose,
                                      const Eigen::Vector3d& point,
                                      const Eigen::Vector2d& pixel,
                                      const Intrinsics& intrinsics) {
  const Eigen::Matrix3d r = pose.R();
  const Eigen::Vector3d rotated = r * point;
  const Eigen::Vector3d pc = rotated + pose.translation;
  const double iz = 1.0 / pc.z();
  Eigen::Matrix<double, 2, 3> d_proj;
  d_proj << intrinsics.fx * iz, 0.0, -intrinsics.fx * pc.x() * iz * iz,
      0.0, intrinsics.fy * iz, -intrinsics.fy * pc.y() * iz * iz;
  ReprojectionTerm term;
  term.residual = intrinsics.Project(pc) - pixel;
  term.d_pose.leftCols<3>() = -d_proj * CrossMatrix(rotated);
  term.d_pose.rightCols<3>() = d_proj;
  term.d_point = d_proj * r;
  return term;
}

double ReprojectionCost(const Reconstruction& recon, double huber) {
  double cost = 0.0;
  for (const auto& track : recon.tracks) {
    if (track.state != TrackState::kTriangulated) continue;
    for (const auto& obs : track.observations) {
      const Eigen::Vector3d pc = recon.poses[obs.frame].ToCamera(track.point);
      const Eigen::Vector2d r = recon.intrinsics.Project(pc) - obs.pixel;
      cost += HuberLoss(r.squaredNorm(), huber);
    }
  }
  return cost;
}

double RmsReprojectionError(const Reconstruction& recon) {
  double sum = 0.0;
  size_t count = 0;
  for (const auto& track : recon.tracks) {
    if (track.state != TrackState::kTriangulated) continue;
    for (const auto& obs : track.observations) {
      const Eigen::Vector3d pc = recon.poses[obs.frame].ToCamera(track.point);
      sum += (recon.intrinsics.Project(pc) - obs.pixel).squaredNorm();
      ++count;
    }
  }
  return count ? std::sqrt(sum / count) : 0.0;
}

BundleAdjustmentSummary BundleAdjust(Reconstruction& recon,
                                     const BundleAdjustmentOptions& options) {
  BundleAdjustmentSummary summary;
  const int n = static_cast<int>(recon.poses.size());
  if (n < 2) throw ValidationError("bundle adjustment needs at least 2 poses");
  std::vector<int> points;
  for (size_t t = 0; t < recon.tracks.size(); ++t) {
    if (recon.tracks[t].state == TrackState::kTriangulated) {
      points.push_back(static_cast<int>(t));
    }
  }
  if (points.empty()) {
    throw ValidationError("bundle adjustment needs at least 1 triangulated track");
  }

  const Eigen::Vector3d baseline =
      recon.poses[1].translation -
      recon.poses[1].R() * recon.poses[0].R().transpose() * recon.poses[0].translation;
  baseline.cwiseAbs().maxCoeff(&summary.scale_gauge_axis);
  const int num_cameras = n - 1;
  const int dim = 6 * num_cameras;
  const int gauge_index = 3 + summary.scale_gauge_axis;  // in camera 0 block

  double cost = ReprojectionCost(recon, options.huber);
  summary.initial_cost = cost;
  summary.cost_history.push_back(cost);
  double damping = options.initial_damping;
  int solve_failures = 0;
  int consecutive_rejections = 0;
  bool relinearize = true;
  Linearization lin;

  for (int iter = 0; iter < options.max_iterations; ++iter) {
    if (cost <= 0.0) {
      summary.converged = true;
      break;
    }
    summary.iterations = iter + 1;
    if (relinearize) {
      lin.u.assign(num_cameras, Mat6::Zero());
      lin.gc.assign(num_cameras, Vec6::Zero());
      lin.v.assign(points.size(), Eigen::Matrix3d::Zero());
      lin.gp.assign(points.size(), Eigen::Vector3d::Zero());
      lin.blocks.assign(points.size(), {});
      for (size_t p = 0; p < points.size(); ++p) {
        const Track& track = recon.tracks[points[p]];
        for (const auto& obs : track.observations) {
          const ReprojectionTerm term = EvaluateReprojection(
              recon.poses[obs.frame], track.point, obs.pixel, recon.intrinsics);
          const double w = HuberWeight(term.residual.squaredNorm(), options.huber);
          lin.v[p] += w * term.d_point.transpose() * term.d_point;
          lin.gp[p] += w * term.d_point.transpose() * term.residual;
          const int c = obs.frame - 1;
          if (c < 0) continue;
          lin.u[c] += w * term.d_pose.transpose() * term.d_pose;
          lin.gc[c] += w * term.d_pose.transpose() * term.residual;
          lin.blocks[p].push_back({c, w * term.d_pose.transpose() * term.d_point});
        }
      }
      relinearize = false;
    }

    // Damped reduced camera system S dc = rhs.
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd rhs(dim);
    for (int c = 0; c < num_cameras; ++c) {
      Mat6 u = lin.u[c];
      u.diagonal() += damping * (lin.u[c].diagonal().array() + 1e-12).matrix();
      s.block<6, 6>(6 * c, 6 * c) = u;
      rhs.segment<6>(6 * c) = -lin.gc[c];
    }
    std::vector<Eigen::Matrix3d> v_inv(points.size());
    bool ok = true;
    for (size_t p = 0; p < points.size() && ok; ++p) {
      Eigen::Matrix3d v = lin.v[p];
      v.diagonal() += damping * (lin.v[p].diagonal().array() + 1e-12).matrix();
      bool invertible = false;
      v.computeInverseWithCheck(v_inv[p], invertible);
      ok = invertible && v_inv[p].allFinite();
      if (!ok) break;
      const auto& blocks = lin.blocks[p];
      for (const auto& a : blocks) {
        const Mat63 wv = a.w * v_inv[p];
        rhs.segment<6>(6 * a.camera) += wv * lin.gp[p];
        for (const auto& b : blocks) {
          s.block<6, 6>(6 * a.camera, 6 * b.camera) -= wv * b.w.transpose();
        }
      }
    }
    Eigen::VectorXd dc;
    if (ok) {
      s.row(gauge_index).setZero();
      s.col(gauge_index).setZero();
      s(gauge_index, gauge_index) = 1.0;
      rhs(gauge_index) = 0.0;
      const Eigen::LDLT<Eigen::MatrixXd> ldlt(s);
      dc = ldlt.solve(rhs);
      ok = ldlt.info() == Eigen::Success && dc.allFinite();
    }
    if (!ok) {
      damping *= 2.0;
      if (++solve_failures > options.max_solve_retries) {
        summary.solve_failed = true;
        break;
      }
      continue;
    }

    Reconstruction candidate = recon;
    for (int c = 0; c < num_cameras; ++c) {
      CameraPose& pose = candidate.poses[c + 1];
      const Vec6 d = dc.segment<6>(6 * c);
      pose = CameraPose(ProjectToRotation(ExpSO3(d.head<3>()) * pose.R()),
                        pose.translation + d.tail<3>());
    }
    for (size_t p = 0; p < points.size(); ++p) {
      Eigen::Vector3d rhs_p = -lin.gp[p];
      for (const auto& a : lin.blocks[p]) {
        rhs_p -= a.w.transpose() * dc.segment<6>(6 * a.camera);
      }
      candidate.tracks[points[p]].point += v_inv[p] * rhs_p;
    }
    const double new_cost = ReprojectionCost(candidate, options.huber);
    if (std::isfinite(new_cost) && new_cost < cost) {
      const double relative = (cost - new_cost) / cost;
      recon = std::move(candidate);
      cost = new_cost;
      summary.cost_history.push_back(cost);
      ++summary.accepted_steps;
      damping *= 0.5;
      consecutive_rejections = 0;
      relinearize = true;
      if (relative < options.relative_tolerance) {
        summary.converged = true;
        break;
      }
    } else {
      damping *= 2.0;
      if (++consecutive_rejections >= options.max_solve_retries) {
        summary.converged = true;
        break;
      }
    }
  }
  summary.final_cost = cost;

  for (const int t : points) {
    Track& track = recon.tracks[t];
    for (const auto& obs : track.observations) {
      if (recon.poses[obs.frame].ToCamera(track.point).z() <= 0.0) {
        track.state = TrackState::kRejected;
        ++summary.cheirality_rejections;
        break;
      }
    }
  }
  return summary;
}

}  // namespace trajsfm
