#include <random>
#include <set>

#include <gtest/gtest.h>

#include "test_util.h"
#include "trajsfm/motionseg/label_map.h"
#include "trajsfm/sfm/correspondences.h"
#include "trajsfm/sfm/epipolar.h"
#include "trajsfm/sfm/two_view.h"
#include "trajsfm/sfm/view_graph.h"

namespace trajsfm {
namespace {

using testing::MakeMultiViewScene;
using testing::SceneMatches;

Eigen::Matrix3d GroundTruthRelativeRotation(const testing::MultiViewScene& s, int i, int j) {
  return s.poses[j].R() * s.poses[i].R().transpose();
}

Eigen::Vector3d GroundTruthDirection(const testing::MultiViewScene& s, int i, int j) {
  const Eigen::Matrix3d r = GroundTruthRelativeRotation(s, i, j);
  return (s.poses[j].translation - r * s.poses[i].translation).normalized();
}

TEST(EpipolarTest, HartleyNormalization) {
  std::vector<Eigen::Vector2d> pts{{0, 0}, {4, 0}, {4, 2}, {0, 2}};
  const Eigen::Matrix3d t = HartleyNormalization(pts);
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  double rms = 0.0;
  for (const auto& p : pts) {
    const Eigen::Vector2d q = (t * p.homogeneous()).hnormalized();
    mean += q / 4.0;
    rms += q.squaredNorm() / 4.0;
  }
  EXPECT_LT(mean.norm(), 1e-12);
  EXPECT_NEAR(std::sqrt(rms), std::sqrt(2.0), 1e-12);
}

TEST(EpipolarTest, EssentialOnManifoldAndDecomposes) {
  const auto scene = MakeMultiViewScene(2, 40, 3);
  std::vector<Eigen::Vector2d> x1, x2;
  for (size_t k = 0; k < scene.points.size(); ++k) {
    x1.push_back(scene.intrinsics.Normalize(scene.Project(0, k)));
    x2.push_back(scene.intrinsics.Normalize(scene.Project(1, k)));
  }
  const auto e = EstimateEssential8Point(x1, x2);
  ASSERT_TRUE(e.has_value());
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(*e);
  const auto s = svd.singularValues();
  EXPECT_NEAR(s[0], s[1], 1e-9 * s[0]);
  EXPECT_NEAR(s[2], 0.0, 1e-9 * s[0]);
  for (size_t k = 0; k < x1.size(); ++k) {
    EXPECT_NEAR(x2[k].homogeneous().dot(*e * x1[k].homogeneous()), 0.0, 1e-9);
  }
  const Eigen::Matrix3d r = GroundTruthRelativeRotation(scene, 0, 1);
  const Eigen::Vector3d t = GroundTruthDirection(scene, 0, 1);
  int found = 0;
  for (const auto& cand : DecomposeEssential(*e)) {
    EXPECT_NEAR(cand.rotation.determinant(), 1.0, 1e-9);
    if (RotationAngle(cand.rotation, r) < 1e-6 && (cand.translation - t).norm() < 1e-6) ++found;
  }
  EXPECT_EQ(found, 1);
}

TEST(EpipolarTest, SampsonZeroOnEpipolarLine) {
  Eigen::Matrix3d f = CrossMatrix(Eigen::Vector3d(1, 0, 0));
  EXPECT_NEAR(SampsonDistance(f, {3, 2}, {7, 2}), 0.0, 1e-12);
  // F = [e]x with e = (1,0,0): epipolar lines are horizontal rows. The
  // first-order distance of a vertical offset d is d / sqrt(2).
  EXPECT_NEAR(SampsonDistance(f, {3, 2}, {7, 3}), 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(TwoViewTest, ExactRecovery) {
  const auto scene = MakeMultiViewScene(3, 60, 4);
  for (const auto& [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}) {
    const TwoViewResult r = EstimateTwoView(SceneMatches(scene, i, j), scene.intrinsics);
    EXPECT_LT(RotationAngle(r.rotation, GroundTruthRelativeRotation(scene, i, j)), 1e-6);
    EXPECT_LT((r.direction - GroundTruthDirection(scene, i, j)).norm(), 1e-6);
    EXPECT_EQ(r.inliers.size(), scene.points.size());
    EXPECT_FALSE(r.degenerate_translation);
  }
}

TEST(TwoViewTest, PureRotationIsFlagged) {
  auto scene = MakeMultiViewScene(2, 60, 5);
  scene.poses[1] = CameraPose::FromCenter(scene.poses[1].R(), scene.poses[0].Center());
  const TwoViewResult r = EstimateTwoView(SceneMatches(scene, 0, 1), scene.intrinsics);
  EXPECT_TRUE(r.degenerate_translation);
  EXPECT_LT(r.median_triangulation_angle_deg, 0.1);
}

TEST(TwoViewTest, ThirtyPercentOutliers) {
  const auto scene = MakeMultiViewScene(2, 200, 6);
  auto matches = SceneMatches(scene, 0, 1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0, 640), uy(0, 480);
  std::set<int> outliers;
  while (outliers.size() < 60) outliers.insert(std::uniform_int_distribution<int>(0, 199)(rng));
  for (const int k : outliers) matches[k].second = {ux(rng), uy(rng)};
  TwoViewOptions opts;
  opts.seed = 3;
  const TwoViewResult r = EstimateTwoView(matches, scene.intrinsics, opts);
  int recalled = 0;
  for (const int k : r.inliers) recalled += outliers.count(k) ? 0 : 1;
  EXPECT_GE(recalled, static_cast<int>(0.99 * 140));
  EXPECT_LT(RadToDeg(RotationAngle(r.rotation, GroundTruthRelativeRotation(scene, 0, 1))), 0.1);
}

TEST(TwoViewTest, Deterministic) {
  const auto scene = MakeMultiViewScene(2, 100, 8);
  auto matches = SceneMatches(scene, 0, 1);
  for (int k = 0; k < 30; ++k) matches[k].second += Eigen::Vector2d(20, -15);
  TwoViewOptions opts;
  opts.seed = 11;
  const auto a = EstimateTwoView(matches, scene.intrinsics, opts);
  const auto b = EstimateTwoView(matches, scene.intrinsics, opts);
  EXPECT_EQ(a.inliers, b.inliers);
  EXPECT_EQ(a.rotation, b.rotation);
  EXPECT_EQ(a.direction, b.direction);
}

TEST(TwoViewTest, TooFewMatches) {
  const auto scene = MakeMultiViewScene(2, 7, 9);
  EXPECT_THROW(EstimateTwoView(SceneMatches(scene, 0, 1), scene.intrinsics), ValidationError);
}

std::vector<PointTrajectory> SceneTrajectories(const testing::MultiViewScene& scene) {
  std::vector<PointTrajectory> ts(scene.points.size());
  for (size_t k = 0; k < ts.size(); ++k) {
    for (size_t f = 0; f < scene.poses.size(); ++f) ts[k].positions.push_back(scene.Project(f, k));
  }
  return ts;
}

TEST(CorrespondenceTest, StaticPairsAndSubsampling) {
  const auto scene = MakeMultiViewScene(3, 50, 10);
  const auto ts = SceneTrajectories(scene);
  MotionLabelMap labels = MotionLabelMap::AllStatic(ts);
  for (int k = 0; k < 10; ++k) labels.SetProbability(k, 2, 0.9);
  const auto all = SampleCorrespondences(ts, labels, 0, 2, 1000, 1);
  ASSERT_EQ(all.size(), 40u);
  for (const auto& m : all) {
    EXPECT_GE(m.trajectory, 10);
    EXPECT_EQ(m.first, scene.Project(0, m.trajectory));
    EXPECT_EQ(m.second, scene.Project(2, m.trajectory));
  }
  const auto sub = SampleCorrespondences(ts, labels, 0, 2, 15, 1);
  EXPECT_EQ(sub.size(), 15u);
  for (size_t k = 1; k < sub.size(); ++k) EXPECT_LT(sub[k - 1].trajectory, sub[k].trajectory);
  EXPECT_EQ(sub.size(), SampleCorrespondences(ts, labels, 0, 2, 15, 1).size());
  const MotionLabelMap moving(ts, 1.0);
  EXPECT_TRUE(SampleCorrespondences(ts, moving, 0, 1, 100, 0).empty());
}

TEST(ViewGraphTest, ThreeFramesTwoStrides) {
  const auto scene = MakeMultiViewScene(3, 80, 12);
  const auto ts = SceneTrajectories(scene);
  ViewGraphOptions opts;
  opts.strides = {1, 2};
  const ViewGraph g = BuildViewGraph(ts, MotionLabelMap::AllStatic(ts), scene.intrinsics, 3, opts);
  ASSERT_EQ(g.edges.size(), 3u);
  for (const auto& e : g.edges) {
    EXPECT_EQ(e.num_inliers, 80);
    EXPECT_LT(RotationAngle(e.rotation, GroundTruthRelativeRotation(scene, e.i, e.j)), 1e-6);
  }
  RequireConnected(g);
}

TEST(ViewGraphTest, TexturelessFrameDisconnects) {
  const auto scene = MakeMultiViewScene(4, 80, 13);
  auto ts = SceneTrajectories(scene);
  for (auto& t : ts) t.positions.resize(3);
  ViewGraphOptions opts;
  EXPECT_THROW(BuildViewGraph(ts, MotionLabelMap::AllStatic(ts), scene.intrinsics, 4, opts),
               DisconnectedGraphError);
}

TEST(ViewGraphTest, MinInliersAboveAllCounts) {
  const auto scene = MakeMultiViewScene(3, 50, 14);
  const auto ts = SceneTrajectories(scene);
  ViewGraphOptions opts;
  opts.min_inliers = 51;
  EXPECT_THROW(BuildViewGraph(ts, MotionLabelMap::AllStatic(ts), scene.intrinsics, 3, opts),
               DisconnectedGraphError);
}

TEST(ViewGraphTest, ComponentsListed) {
  std::vector<ViewEdge> edges(2);
  edges[0].i = 0;
  edges[0].j = 1;
  edges[1].i = 2;
  edges[1].j = 4;
  const auto comps = ConnectedComponents(5, edges);
  ASSERT_EQ(comps.size(), 3u);
  EXPECT_EQ(comps[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(comps[1], (std::vector<int>{2, 4}));
  EXPECT_EQ(comps[2], (std::vector<int>{3}));
  ViewGraph g;
  g.num_frames = 5;
  g.edges = edges;
  try {
    RequireConnected(g);
    FAIL();
  } catch (const DisconnectedGraphError& e) {
    EXPECT_NE(std::string(e.what()).find("3"), std::string::npos);
  }
}

}  // namespace
}  // namespace trajsfm
