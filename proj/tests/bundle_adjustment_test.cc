#include <random>

#include <gtest/gtest.h>

#include "test_util.h"
#include "trajsfm/eval/align.h"
#include "trajsfm/motionseg/label_map.h"
#include "trajsfm/sfm/bundle_adjustment.h"
#include "trajsfm/sfm/global_sfm.h"
#include "trajsfm/sfm/triangulation.h"

namespace trajsfm {
namespace {

using testing::MakeMultiViewScene;
using testing::MultiViewScene;

std::vector<PointTrajectory> SceneTrajectories(const MultiViewScene& scene) {
  std::vector<PointTrajectory> ts(scene.points.size());
  for (size_t k = 0; k < ts.size(); ++k) {
    for (size_t f = 0; f < scene.poses.size(); ++f) ts[k].positions.push_back(scene.Project(f, k));
  }
  return ts;
}

Reconstruction GroundTruthReconstruction(const MultiViewScene& scene) {
  Reconstruction r;
  r.intrinsics = scene.intrinsics;
  r.poses = scene.poses;
  for (size_t k = 0; k < scene.points.size(); ++k) {
    Track t;
    t.trajectory = static_cast<int>(k);
    for (size_t f = 0; f < scene.poses.size(); ++f) {
      t.observations.push_back({static_cast<int>(f), scene.Project(f, k)});
    }
    t.point = scene.points[k];
    t.state = TrackState::kTriangulated;
    r.tracks.push_back(t);
  }
  return r;
}

TEST(TriangulationTest, ExactDataAcceptsAll) {
  const auto scene = MakeMultiViewScene(5, 100, 1);
  const auto ts = SceneTrajectories(scene);
  const Reconstruction r =
      TriangulateTracks(ts, MotionLabelMap::AllStatic(ts), scene.poses, scene.intrinsics);
  EXPECT_EQ(r.NumTriangulated(), scene.points.size());
  for (size_t k = 0; k < r.tracks.size(); ++k) {
    EXPECT_LT((r.tracks[k].point - scene.points[k]).norm(), 1e-5);
  }
}

TEST(TriangulationTest, IdenticalPosesRejectedByAngle) {
  auto scene = MakeMultiViewScene(3, 10, 2);
  for (auto& p : scene.poses) p = scene.poses[0];
  const auto ts = SceneTrajectories(scene);
  const Reconstruction r =
      TriangulateTracks(ts, MotionLabelMap::AllStatic(ts), scene.poses, scene.intrinsics);
  EXPECT_EQ(r.NumTriangulated(), 0u);
  for (const auto& t : r.tracks) EXPECT_EQ(t.state, TrackState::kRejected);
}

TEST(TriangulationTest, HalfStaticTrajectoryUsesStaticHalf) {
  const auto scene = MakeMultiViewScene(6, 20, 3);
  auto ts = SceneTrajectories(scene);
  MotionLabelMap labels = MotionLabelMap::AllStatic(ts);
  // Frames 3..5 of trajectory 0 are corrupted and labeled moving.
  for (int f = 3; f < 6; ++f) {
    ts[0].At(f) += Eigen::Vector2d(25, 10);
    labels.SetProbability(0, f, 1.0);
  }
  const auto tracks = BuildTracks(ts, labels);
  ASSERT_EQ(tracks[0].observations.size(), 3u);
  for (const auto& o : tracks[0].observations) EXPECT_LT(o.frame, 3);
  const Reconstruction r = TriangulateTracks(ts, labels, scene.poses, scene.intrinsics);
  EXPECT_EQ(r.tracks[0].state, TrackState::kTriangulated);
  EXPECT_LT((r.tracks[0].point - scene.points[0]).norm(), 1e-5);
}

TEST(TriangulationTest, SingleStaticObservationNoTrack) {
  const auto scene = MakeMultiViewScene(3, 5, 4);
  const auto ts = SceneTrajectories(scene);
  MotionLabelMap labels(ts, 1.0);
  labels.SetProbability(2, 1, 0.0);
  EXPECT_TRUE(BuildTracks(ts, labels).empty());
}

TEST(ReprojectionTest, JacobiansMatchFiniteDifferences) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Intrinsics k = testing::TestIntrinsics();
  int checked = 0;
  while (checked < 200) {
    const CameraPose pose(testing::RandomRotation(rng, 0.5), testing::RandomVector(rng, 0.5));
    const Eigen::Vector3d cam(u(rng), u(rng), 4.0 + u(rng));
    const Eigen::Vector3d point = pose.rotation.conjugate() * (cam - pose.translation);
    const Eigen::Vector2d pixel = k.Project(cam) + Eigen::Vector2d(3 * u(rng), 3 * u(rng));
    const ReprojectionTerm term = EvaluateReprojection(pose, point, pixel, k);
    const double h = 1e-6;
    Eigen::Matrix<double, 2, 6> fd_pose;
    for (int d = 0; d < 6; ++d) {
      Eigen::Matrix<double, 6, 1> delta = Eigen::Matrix<double, 6, 1>::Zero();
      delta[d] = h;
      auto shifted = [&](double sign) {
        const Eigen::Matrix<double, 6, 1> s = sign * delta;
        const CameraPose p(ExpSO3(s.head<3>()) * pose.R(), pose.translation + s.tail<3>());
        return EvaluateReprojection(p, point, pixel, k).residual;
      };
      fd_pose.col(d) = (shifted(1) - shifted(-1)) / (2 * h);
    }
    Eigen::Matrix<double, 2, 3> fd_point;
    for (int d = 0; d < 3; ++d) {
      Eigen::Vector3d dp = Eigen::Vector3d::Zero();
      dp[d] = h;
      fd_point.col(d) = (EvaluateReprojection(pose, point + dp, pixel, k).residual -
                         EvaluateReprojection(pose, point - dp, pixel, k).residual) /
                        (2 * h);
    }
    EXPECT_LT((term.d_pose - fd_pose).norm() / fd_pose.norm(), 1e-5);
    EXPECT_LT((term.d_point - fd_point).norm() / fd_point.norm(), 1e-5);
    ++checked;
  }
}

TEST(HuberTest, Branches) {
  EXPECT_DOUBLE_EQ(HuberLoss(3.0, 2.0), 3.0);
  EXPECT_DOUBLE_EQ(HuberLoss(16.0, 2.0), 2 * 2 * 4 - 4);
  EXPECT_DOUBLE_EQ(HuberLoss(4.0, 2.0), 4.0);
}

TEST(BundleAdjustmentTest, GroundTruthIsStationary) {
  const auto scene = MakeMultiViewScene(4, 50, 6);
  Reconstruction r = GroundTruthReconstruction(scene);
  const auto before = r.poses;
  const auto summary = BundleAdjust(r);
  EXPECT_LT(summary.initial_cost, 1e-18);
  EXPECT_LE(summary.final_cost, summary.initial_cost);
  for (size_t i = 0; i < before.size(); ++i) {
    EXPECT_LT((r.poses[i].translation - before[i].translation).norm(), 1e-9);
    EXPECT_LT(RotationAngle(r.poses[i].R(), before[i].R()), 1e-9);
  }
}

double AlignedPoseError(const std::vector<CameraPose>& est, const std::vector<CameraPose>& gt,
                        double* rot_deg) {
  std::vector<Eigen::Vector3d> a, b;
  for (size_t i = 0; i < est.size(); ++i) {
    a.push_back(est[i].Center());
    b.push_back(gt[i].Center());
  }
  const Sim3Transform t = UmeyamaAlign(a, b);
  double worst = 0.0, worst_rot = 0.0;
  for (size_t i = 0; i < est.size(); ++i) {
    worst = std::max(worst, (t.Apply(a[i]) - b[i]).norm());
    const Eigen::Matrix3d aligned = est[i].R() * t.rotation.conjugate().toRotationMatrix();
    worst_rot = std::max(worst_rot, RadToDeg(RotationAngle(aligned, gt[i].R())));
  }
  if (rot_deg) *rot_deg = worst_rot;
  return worst;
}

TEST(BundleAdjustmentTest, RecoversPerturbedPoses) {
  const auto scene = MakeMultiViewScene(5, 80, 7);
  Reconstruction r = GroundTruthReconstruction(scene);
  std::mt19937_64 rng(8);
  for (size_t i = 1; i < r.poses.size(); ++i) {
    const Eigen::Vector3d axis = testing::RandomVector(rng).normalized();
    const Eigen::Vector3d c = r.poses[i].Center();
    const Eigen::Vector3d dir = testing::RandomVector(rng).normalized();
    r.poses[i] = CameraPose::FromCenter(ExpSO3(axis * DegToRad(1.0)) * r.poses[i].R(),
                                        c + 0.01 * c.norm() * dir);
  }
  for (auto& t : r.tracks) t.point += 0.01 * testing::RandomVector(rng);
  const auto summary = BundleAdjust(r);
  EXPECT_TRUE(summary.converged);
  EXPECT_LT(RmsReprojectionError(r), 1e-6);
  double rot_err = 0.0;
  EXPECT_LT(AlignedPoseError(r.poses, scene.poses, &rot_err), 1e-4);
  EXPECT_LT(rot_err, 1e-4);
  for (size_t k = 1; k < summary.cost_history.size(); ++k) {
    EXPECT_LE(summary.cost_history[k], summary.cost_history[k - 1]);
  }
  EXPECT_EQ(r.poses[0].translation, scene.poses[0].translation);
  for (const auto& t : r.tracks) {
    if (t.state != TrackState::kTriangulated) continue;
    for (const auto& o : t.observations) EXPECT_GT(r.poses[o.frame].ToCamera(t.point).z(), 0.0);
  }
}

TEST(BundleAdjustmentTest, HuberLimitsGrossOutlier) {
  const auto scene = MakeMultiViewScene(4, 60, 9);
  Reconstruction clean = GroundTruthReconstruction(scene);
  Reconstruction dirty = clean;
  dirty.tracks[3].observations[2].pixel += Eigen::Vector2d(80, -60);
  BundleAdjust(clean);
  BundleAdjust(dirty);
  double rot = 0.0;
  for (size_t i = 0; i < clean.poses.size(); ++i) {
    rot = std::max(rot, RadToDeg(RotationAngle(clean.poses[i].R(), dirty.poses[i].R())));
  }
  EXPECT_LT(rot, 0.01);
}

TEST(BundleAdjustmentTest, Preconditions) {
  const auto scene = MakeMultiViewScene(2, 5, 10);
  Reconstruction r = GroundTruthReconstruction(scene);
  for (auto& t : r.tracks) t.state = TrackState::kRejected;
  EXPECT_THROW(BundleAdjust(r), ValidationError);
}

TEST(GlobalSfmTest, EmptyStaticSetIsStageError) {
  const auto scene = MakeMultiViewScene(4, 50, 11);
  const auto ts = SceneTrajectories(scene);
  const MotionLabelMap moving(ts, 1.0);
  try {
    RunGlobalSfm(ts, moving, scene.intrinsics, 4, {});
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "view_graph");
  }
}

TEST(GlobalSfmTest, ExactSceneRecovered) {
  const auto scene = MakeMultiViewScene(6, 150, 12);
  const auto ts = SceneTrajectories(scene);
  GlobalSfmReport report;
  const Reconstruction r =
      RunGlobalSfm(ts, MotionLabelMap::AllStatic(ts), scene.intrinsics, 6, {}, &report);
  EXPECT_EQ(report.kept_edges, 12);
  double rot = 0.0;
  EXPECT_LT(AlignedPoseError(r.poses, scene.poses, &rot), 1e-6);
  EXPECT_LT(rot, 1e-6);
  const Reconstruction again =
      RunGlobalSfm(ts, MotionLabelMap::AllStatic(ts), scene.intrinsics, 6, {});
  for (size_t i = 0; i < r.poses.size(); ++i) {
    EXPECT_EQ(r.poses[i].translation, again.poses[i].translation);
    EXPECT_EQ(r.poses[i].rotation.coeffs(), again.poses[i].rotation.coeffs());
  }
}

}  // namespace
}  // namespace trajsfm
