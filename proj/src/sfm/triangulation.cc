#include "trajsfm/sfm/triangulation.h"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "trajsfm/util/parallel.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm {

std::vector<Track> BuildTracks(const std::vector<PointTrajectory>& trajectories,
                               const MotionLabelMap& labels) {
  std::vector<Track> tracks;
  for (size_t t = 0; t < trajectories.size(); ++t) {
    const PointTrajectory& traj = trajectories[t];
    Track track;
    track.trajectory = static_cast<int>(t);
    for (int f = traj.start_frame; f <= traj.end_frame(); ++f) {
      if (labels.IsStatic(track.trajectory, f)) {
        track.observations.push_back({f, traj.At(f)});
      }
    }
    if (track.observations.size() >= 2) tracks.push_back(std::move(track));
  }
  return tracks;
}

Eigen::Vector3d TriangulateMultiView(const std::vector<Observation>& observations,
                                     const std::vector<CameraPose>& poses,
                                     const Intrinsics& intrinsics) {
  Eigen::MatrixXd a(2 * observations.size(), 4);
  for (size_t k = 0; k < observations.size(); ++k) {
    const CameraPose& pose = poses[observations[k].frame];
    Eigen::Matrix<double, 3, 4> p;
    p.leftCols<3>() = pose.R();
    p.col(3) = pose.translation;
    const Eigen::Vector2d x = intrinsics.Normalize(observations[k].pixel);
    a.row(2 * k) = x.x() * p.row(2) - p.row(0);
    a.row(2 * k + 1) = x.y() * p.row(2) - p.row(1);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::Vector4d x = svd.matrixV().col(3);
  return x.head<3>() / x(3);
}

double MaxTriangulationAngleDeg(const Eigen::Vector3d& point,
                                const std::vector<Observation>& observations,
                                const std::vector<CameraPose>& poses) {
  std::vector<Eigen::Vector3d> rays;
  rays.reserve(observations.size());
  for (const auto& obs : observations) {
    rays.push_back((point - poses[obs.frame].Center()).normalized());
  }
  double min_cos = 1.0;
  for (size_t a = 0; a < rays.size(); ++a) {
    for (size_t b = a + 1; b < rays.size(); ++b) {
      min_cos = std::min(min_cos, rays[a].dot(rays[b]));
    }
  }
  return RadToDeg(std::acos(std::clamp(min_cos, -1.0, 1.0)));
}

double MeanReprojectionError(const Eigen::Vector3d& point,
                             const std::vector<Observation>& observations,
                             const std::vector<CameraPose>& poses,
                             const Intrinsics& intrinsics) {
  double sum = 0.0;
  for (const auto& obs : observations) {
    const Eigen::Vector3d pc = poses[obs.frame].ToCamera(point);
    sum += (intrinsics.Project(pc) - obs.pixel).norm();
  }
  return sum / static_cast<double>(observations.size());
}

void TriangulateTrack(Track& track, const std::vector<CameraPose>& poses,
                      const Intrinsics& intrinsics,
                      const TriangulationOptions& options) {
  track.state = TrackState::kRejected;
  if (track.observations.size() < 2) return;
  const Eigen::Vector3d point =
      TriangulateMultiView(track.observations, poses, intrinsics);
  if (!point.allFinite()) return;
  track.point = point;
  for (const auto& obs : track.observations) {
    if (poses[obs.frame].ToCamera(point).z() <= 0.0) return;
  }
  if (MaxTriangulationAngleDeg(point, track.observations, poses) <
      options.min_angle_deg) {
    return;
  }
  if (MeanReprojectionError(point, track.observations, poses, intrinsics) >
      options.max_reprojection) {
    return;
  }
  track.state = TrackState::kTriangulated;
}

Reconstruction TriangulateTracks(const std::vector<PointTrajectory>& trajectories,
                                 const MotionLabelMap& labels,
                                 const std::vector<CameraPose>& poses,
                                 const Intrinsics& intrinsics,
                                 const TriangulationOptions& options,
                                 int num_threads) {
  Reconstruction recon;
  recon.intrinsics = intrinsics;
  recon.poses = poses;
  recon.tracks = BuildTracks(trajectories, labels);
  ParallelFor(recon.tracks.size(), num_threads, [&](size_t k) {
    TriangulateTrack(recon.tracks[k], recon.poses, intrinsics, options);
  });
  return recon;
}

}  // namespace trajsfm
