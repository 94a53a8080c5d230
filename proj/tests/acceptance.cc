// Acceptance checks; one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>

#include "averaging_oracles.h"
#include "test_util.h"
#include "trajsfm/cli/pipeline.h"
#include "trajsfm/eval/align.h"
#include "trajsfm/eval/metrics.h"
#include "trajsfm/eval/tum.h"
#include "trajsfm/flow_io/flo.h"
#include "trajsfm/flow_io/pfm.h"
#include "trajsfm/flow_io/pgm.h"
#include "trajsfm/motionseg/masks.h"
#include "trajsfm/motionseg/segnet.h"
#include "trajsfm/sfm/bundle_adjustment.h"
#include "trajsfm/sfm/rotation_averaging.h"
#include "trajsfm/sfm/translation_averaging.h"
#include "trajsfm/synth/generate.h"
#include "trajsfm/synth/scene.h"
#include "trajsfm/trajectory/builder.h"
#include "trajsfm/trajectory/dump.h"
#include "trajsfm/trajectory/window_optimizer.h"

namespace trajsfm {
namespace {

namespace fs = std::filesystem;
using namespace testing;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void Require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string DataFile(const std::string& name) {
  return (fs::path(TRAJSFM_DATA_DIR) / name).string();
}

std::vector<TimedPose> ToTimed(const std::vector<CameraPose>& poses) {
  std::vector<TimedPose> out;
  for (size_t i = 0; i < poses.size(); ++i) {
    out.push_back(TimedPose::FromCameraPose(static_cast<double>(i), poses[i]));
  }
  return out;
}

PipelineConfig BaseConfig(const std::string& data, const std::string& out) {
  PipelineConfig c;
  c.flows_dir = data + "/flows";
  c.intrinsics_path = data + "/intrinsics.txt";
  c.out_dir = out;
  c.threads = 1;
  c.strides = {1, 2, 3};
  c.segmenter = SegmenterKind::kFallback;
  return c;
}

// Rigid scene, end to end.
void RigidScene(const TempDir& dir, Outcome& o) {
  const synth::SceneSpec spec = synth::ReadSceneSpec(DataFile("rigid_room.json"));
  o.Require(spec.num_frames == 20 && spec.width == 64 && spec.height == 64,
            "scene must be 20 frames of 64x64");
  o.Require(spec.strides == std::vector<int>{1, 2, 3}, "strides {1,2,3}");
  o.Require(spec.noise_sigma.empty() && spec.outlier_fraction == 0.0 && spec.objects.empty(),
            "noise-free rigid scene");
  const std::string data = dir.File("rigid");
  synth::Generate(spec, data, 0, 1);
  const auto start = std::chrono::steady_clock::now();
  const PipelineResult r = RunPipeline(BaseConfig(data, dir.File("rigid_out")));
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const MetricsReport m =
      Evaluate(ToTimed(r.reconstruction.poses), ReadTum(data + "/groundtruth.txt"));
  o.detail << "ATE=" << m.ate_rmse << " RPE_rot=" << m.rpe_rot << "deg runtime=" << seconds
           << "s";
  o.Require(m.poses == 20, "all 20 poses");
  o.Require(m.ate_rmse < 1e-4, "ATE < 1e-4");
  o.Require(m.rpe_rot < 0.01, "RPE rot < 0.01 deg");
  o.Require(seconds < 60.0, "runtime < 60 s");
}

// Dynamic scene, segmentation on vs off.
void DynamicScene(const TempDir& dir, Outcome& o) {
  const synth::SceneSpec spec = synth::ReadSceneSpec(DataFile("dynamic_room.json"));
  const std::string data = dir.File("dynamic");
  const synth::Manifest manifest = synth::Generate(spec, data, 0, 1);
  std::vector<Field<1>> truth;
  double coverage = 0.0;
  for (const auto& mask : manifest.masks) {
    truth.push_back(ReadPgm(data + "/" + mask));
    int moving = 0;
    for (const float v : truth.back().data()) moving += v > 127.0f;
    coverage += static_cast<double>(moving) / truth.back().data().size() / manifest.masks.size();
  }
  o.Require(spec.objects.size() == 1, "exactly one moving object");
  o.Require(std::abs(coverage - 0.2) < 0.05, "object covers about 20% of pixels");

  PipelineConfig seg = BaseConfig(data, dir.File("dyn_seg"));
  PipelineConfig noseg = BaseConfig(data, dir.File("dyn_noseg"));
  noseg.segmentation = false;
  const PipelineResult a = RunPipeline(seg);
  const PipelineResult b = RunPipeline(noseg);
  const auto gt = ReadTum(data + "/groundtruth.txt");
  const double ate_seg = AteRmse(ToTimed(a.reconstruction.poses), gt);
  const double ate_noseg = AteRmse(ToTimed(b.reconstruction.poses), gt);
  const double agreement = MaskAgreement(a.trajectories, a.labels, truth);
  o.detail << "coverage=" << coverage << " ATE_seg=" << ate_seg << " ATE_noseg=" << ate_noseg
           << " agreement=" << agreement;
  o.Require(ate_seg < ate_noseg, "ATE with segmentation < ATE without");
  o.Require(agreement >= 0.95, "agreement >= 95%");
}

double MeanEndpointError(const synth::SyntheticScene& scene,
                         const std::vector<PointTrajectory>& trajectories) {
  double sum = 0.0;
  int count = 0;
  for (const auto& t : trajectories) {
    if (t.length() < 2) continue;
    const int end = t.start_frame + t.length() - 1;
    const auto truth = scene.Correspond(t.start_frame, t.positions.front(), end);
    if (!truth) continue;
    sum += (t.positions.back() - *truth).norm();
    ++count;
  }
  return count ? sum / count : std::numeric_limits<double>::infinity();
}

// Path-consistency refinement on noisy stride-1 flows.
void TrajectoryOptimization(const TempDir& dir, Outcome& o) {
  synth::SceneSpec spec = synth::ReadSceneSpec(DataFile("rigid_room.json"));
  spec.noise_sigma = {{1, 0.5}};
  o.Require(spec.NoiseSigma(1) == 0.5 && spec.NoiseSigma(2) == 0.0,
            "sigma 0.5 on stride 1, exact stride 2");
  const std::string data = dir.File("noisy");
  synth::Generate(spec, data, 0, 1);
  const synth::SyntheticScene scene(spec);
  TrajectoryOptions on;
  TrajectoryOptions off;
  off.enable_window_optim = false;
  const auto with = BuildTrajectories(data + "/flows", on);
  const auto without = BuildTrajectories(data + "/flows", off);
  const double e_on = MeanEndpointError(scene, with.set.trajectories());
  const double e_off = MeanEndpointError(scene, without.set.trajectories());
  const double reduction = 1.0 - e_on / e_off;
  o.detail << "endpoint_error on=" << e_on << " off=" << e_off << " reduction=" << 100 * reduction
           << "% windows=" << with.optimized_windows;
  o.Require(reduction >= 0.03, "reduction >= 3%");
}

FlowField RandomFlow(std::mt19937_64& rng, int w, int h, double scale) {
  FlowField f(w, h);
  std::uniform_real_distribution<float> u(-scale, scale);
  for (auto& v : f.data()) v = u(rng);
  return f;
}

FlowField ConstantFlow(int w, int h, const Eigen::Vector2d& v) {
  FlowField f(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) f.Set(x, y, v);
  }
  return f;
}

// Window objective and reprojection Jacobians against central differences.
void GradientAudits(Outcome& o) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3.0, 3.0), pos(5.0, 25.0), unit(-1.0, 1.0);
  double worst_window = 0.0;
  int window_configs = 0;
  for (; window_configs < 200; ++window_configs) {
    const FlowField f12 = ConstantFlow(32, 32, {u(rng), u(rng)});
    const FlowField f02 = ConstantFlow(32, 32, {u(rng), u(rng)});
    const WindowObjective obj({pos(rng), pos(rng)}, {pos(rng), pos(rng)}, f12, f02);
    const Eigen::Vector4d x(pos(rng), pos(rng), pos(rng), pos(rng));
    const Eigen::Vector4d g = obj.Gradient(x);
    Eigen::Vector4d fd;
    const double h = 1e-4;
    for (int k = 0; k < 4; ++k) {
      Eigen::Vector4d xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      fd[k] = (obj.Cost(xp) - obj.Cost(xm)) / (2 * h);
    }
    worst_window = std::max(worst_window, (g - fd).norm() / std::max(1e-12, fd.norm()));
  }

  const Intrinsics k = TestIntrinsics();
  double worst_ba = 0.0;
  int ba_configs = 0;
  for (; ba_configs < 200; ++ba_configs) {
    const CameraPose pose(RandomRotation(rng, 0.5), RandomVector(rng, 0.5));
    const Eigen::Vector3d cam(unit(rng), unit(rng), 4.0 + unit(rng));
    const Eigen::Vector3d point = pose.rotation.conjugate() * (cam - pose.translation);
    const Eigen::Vector2d pixel = k.Project(cam) + Eigen::Vector2d(3 * unit(rng), 3 * unit(rng));
    const ReprojectionTerm term = EvaluateReprojection(pose, point, pixel, k);
    const double h = 1e-6;
    Eigen::Matrix<double, 2, 6> fd_pose;
    for (int d = 0; d < 6; ++d) {
      auto shifted = [&](double sign) {
        Eigen::Matrix<double, 6, 1> s = Eigen::Matrix<double, 6, 1>::Zero();
        s[d] = sign * h;
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
    worst_ba = std::max({worst_ba, (term.d_pose - fd_pose).norm() / fd_pose.norm(),
                         (term.d_point - fd_point).norm() / fd_point.norm()});
  }
  o.detail << "window: " << window_configs << " configs worst_rel=" << worst_window
           << "; BA: " << ba_configs << " configs worst_rel=" << worst_ba;
  o.Require(worst_window < 1e-4, "window gradient rel error < 1e-4");
  o.Require(worst_ba < 1e-5, "BA Jacobian rel error < 1e-5");
}

// Noise-free exactness and corrupted graphs against brute-force oracles.
void Averaging(Outcome& o) {
  const auto poses = RandomPoses(8, 1);
  const ViewGraph clean = ExactGraph(poses, {1, 2, 3});
  const auto rot = GaugedRotations(poses);
  const double rot_exact = DegToRad(MaxRotationErrorDeg(AverageRotations(clean).rotations, rot));
  std::vector<Eigen::Vector3d> gt;
  for (const auto& p : poses) gt.push_back(poses[0].R() * (p.Center() - poses[0].Center()));
  const auto centers = AlignTo(AverageTranslations(clean, rot).centers, gt);
  double trans_exact = 0.0;
  for (size_t i = 0; i < gt.size(); ++i) trans_exact = std::max(trans_exact, (centers[i] - gt[i]).norm());

  std::mt19937_64 rng(5);
  double worst_rot = 0.0, worst_trans = 0.0;
  const int trials = 10;
  for (int trial = 0; trial < trials; ++trial) {
    const auto p = RandomPoses(6, 100 + trial);
    ViewGraph g = ExactGraph(p, {1, 2, 3});
    const int count = static_cast<int>(std::ceil(0.2 * g.edges.size()));
    for (const int e : DrawCorruption(g, count, rng)) g.edges[e].rotation = RandomRotation(rng);
    RotationAveragingOptions opts;
    opts.seed = trial;
    worst_rot = std::max(worst_rot,
                         MaxRotationErrorDeg(AverageRotations(g, opts).rotations, RotationOracle(g)));
  }
  std::mt19937_64 rng_t(9);
  for (int trial = 0; trial < trials; ++trial) {
    const auto p = RandomPoses(6, 200 + trial);
    ViewGraph g = ExactGraph(p, {1, 2, 3});
    const int count = static_cast<int>(std::ceil(0.2 * g.edges.size()));
    for (const int e : DrawCorruption(g, count, rng_t)) {
      g.edges[e].direction = RandomVector(rng_t).normalized();
    }
    const auto r = GaugedRotations(p);
    std::vector<Eigen::Vector3d> truth;
    for (const auto& q : p) truth.push_back(p[0].R() * (q.Center() - p[0].Center()));
    const auto oracle = AlignTo(TranslationOracle(g, r, count), truth);
    const auto est = AlignTo(AverageTranslations(g, r).centers, truth);
    std::vector<double> err;
    for (size_t i = 0; i < est.size(); ++i) err.push_back((est[i] - oracle[i]).norm());
    std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
    worst_trans = std::max(worst_trans, err[err.size() / 2] / SceneDiameter(truth));
  }
  o.detail << "exact rot=" << rot_exact << "rad trans=" << trans_exact << "; corrupted ("
           << trials << " trials each) rot_vs_oracle=" << worst_rot
           << "deg median_center_vs_oracle=" << 100 * worst_trans << "% of diameter";
  o.Require(rot_exact < 1e-6 && trans_exact < 1e-6, "noise-free exact to 1e-6");
  o.Require(worst_rot < 0.5, "rotation within 0.5 deg of oracle");
  o.Require(worst_trans < 0.02, "centers within 2% of diameter of oracle");
}

bool RoundTripBytes(const std::string& a, const std::string& b,
                    const std::function<void(const std::string&, const std::string&)>& copy) {
  copy(a, b);
  const std::string x = ReadFileBytes(a), y = ReadFileBytes(b);
  return !x.empty() && x == y;
}

// write(read(file)) reproduces the file; pipeline outputs repeat bit for bit.
void Formats(const TempDir& dir, Outcome& o) {
  std::mt19937_64 rng(3);
  WriteFlo(RandomFlow(rng, 17, 9, 40.0), dir.File("a.flo"));
  const bool flo = RoundTripBytes(dir.File("a.flo"), dir.File("b.flo"),
                                  [](const auto& a, const auto& b) { WriteFlo(ReadFlo(a), b); });
  DepthMap depth(13, 7);
  std::uniform_real_distribution<float> z(0.5f, 20.0f);
  for (auto& v : depth.data()) v = z(rng);
  WritePfm(depth, dir.File("a.pfm"));
  const bool pfm = RoundTripBytes(dir.File("a.pfm"), dir.File("b.pfm"),
                                  [](const auto& a, const auto& b) { WritePfm(ReadPfm(a), b); });
  SaveWeights(RandomWeights(SegNetConfig{}, 4), dir.File("a.sgnw"));
  const bool sgnw =
      RoundTripBytes(dir.File("a.sgnw"), dir.File("b.sgnw"),
                     [](const auto& a, const auto& b) { SaveWeights(LoadWeights(a), b); });
  const bool ptrj = RoundTripBytes(
      dir.File("rigid_out/trajectories.ptrj"), dir.File("b.ptrj"),
      [](const auto& a, const auto& b) { WriteTrajectoryDump(ReadTrajectoryDump(a), b); });
  const bool tum = RoundTripBytes(dir.File("rigid/groundtruth.txt"), dir.File("b.txt"),
                                  [](const auto& a, const auto& b) { WriteTum(ReadTum(a), b); });

  // Second run of the rigid scene and a second synth of the noisy one.
  RunPipeline(BaseConfig(dir.File("rigid"), dir.File("rigid_out2")));
  bool same_run = true;
  int files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(dir.File("rigid_out"))) {
    if (!entry.is_regular_file() || entry.path().filename() == "timing.txt") continue;
    const fs::path other = fs::path(dir.File("rigid_out2")) /
                           fs::relative(entry.path(), dir.File("rigid_out"));
    same_run = same_run && ReadFileBytes(entry.path().string()) == ReadFileBytes(other.string());
    ++files;
  }
  synth::SceneSpec spec = synth::ReadSceneSpec(DataFile("rigid_room.json"));
  spec.noise_sigma = {{1, 0.5}};
  synth::Generate(spec, dir.File("noisy2"), 0, 2);
  bool same_synth = true;
  for (const auto& entry : fs::recursive_directory_iterator(dir.File("noisy"))) {
    if (!entry.is_regular_file()) continue;
    const fs::path other =
        fs::path(dir.File("noisy2")) / fs::relative(entry.path(), dir.File("noisy"));
    same_synth = same_synth && ReadFileBytes(entry.path().string()) == ReadFileBytes(other.string());
  }
  o.detail << "flo=" << flo << " pfm=" << pfm << " sgnw=" << sgnw << " ptrj=" << ptrj
           << " tum=" << tum << " run_identical=" << same_run << " (" << files
           << " files) synth_identical=" << same_synth;
  o.Require(flo && pfm && sgnw && ptrj && tum, "byte-exact round trips");
  o.Require(same_run && files > 0, "bit-identical pipeline outputs");
  o.Require(same_synth, "bit-identical synth outputs");
}

std::vector<TrajectoryWindow> RandomWindows(std::mt19937_64& rng, int n, int length) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::uniform_int_distribution<int> valid(1, length);
  std::vector<TrajectoryWindow> windows(n);
  for (int i = 0; i < n; ++i) {
    auto& w = windows[i];
    w.trajectory = i;
    w.features = FeatureMatrix::Zero(length, kFeatureDim);
    w.mask.assign(length, 0);
    const int v = valid(rng);
    for (int r = 0; r < v; ++r) {
      w.mask[r] = 1;
      for (int c = 0; c < kFeatureDim; ++c) w.features(r, c) = u(rng);
    }
  }
  return windows;
}

// Forward pass with random weights.
void Network(Outcome& o) {
  std::mt19937_64 rng(11);
  double perm_dev = 0.0, pad_dev = 0.0, lo = 1.0, hi = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const SegNetWeights w = RandomWeights(SegNetConfig{}, 100 + trial);
    auto windows = RandomWindows(rng, 64, 10);
    const auto p = SegNetForward(windows, w);
    for (const double v : p) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::vector<size_t> perm(windows.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<TrajectoryWindow> shuffled;
    for (const size_t i : perm) shuffled.push_back(windows[i]);
    const auto q = SegNetForward(shuffled, w);
    for (size_t k = 0; k < perm.size(); ++k) perm_dev = std::max(perm_dev, std::abs(q[k] - p[perm[k]]));
    std::uniform_real_distribution<float> junk(-100.0f, 100.0f);
    for (auto& win : windows) {
      for (int r = win.valid(); r < win.length(); ++r) {
        for (int c = 0; c < kFeatureDim; ++c) win.features(r, c) = junk(rng);
      }
    }
    const auto padded = SegNetForward(windows, w);
    for (size_t k = 0; k < p.size(); ++k) pad_dev = std::max(pad_dev, std::abs(padded[k] - p[k]));
  }
  o.detail << "permutation_dev=" << perm_dev << " padding_dev=" << pad_dev << " range=[" << lo
           << ", " << hi << "]";
  o.Require(perm_dev <= 1e-6, "permutation equivariance <= 1e-6");
  o.Require(pad_dev <= 1e-6, "padding invariance <= 1e-6");
  o.Require(lo > 0.0 && hi < 1.0, "outputs in (0, 1)");
}

std::vector<TimedPose> RandomTrajectory(std::mt19937_64& rng, int n) {
  std::vector<TimedPose> out;
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
  for (int i = 0; i < n; ++i) {
    TimedPose t;
    t.timestamp = i;
    t.position = p;
    t.orientation = Eigen::Quaterniond(r);
    out.push_back(t);
    p += RandomVector(rng, 0.5);
    r = RandomRotation(rng, 0.2) * r;
  }
  return out;
}

std::vector<TimedPose> Transformed(std::vector<TimedPose> poses, double s,
                                   const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
  for (auto& p : poses) {
    p.position = s * r * p.position + t;
    p.orientation = Eigen::Quaterniond(r) * p.orientation;
  }
  return poses;
}

// Alignment and metric invariances.
void Metrics(Outcome& o) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  double ate_dev = 0.0, rpe_dev = 0.0, umeyama = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto gt = RandomTrajectory(rng, 12);
    auto est = gt;
    for (auto& p : est) {
      p.position += RandomVector(rng, 0.2);
      p.orientation = Eigen::Quaterniond(RandomRotation(rng, 0.05)) * p.orientation;
    }
    const double ate = AteRmse(est, gt);
    const auto moved = Transformed(est, scale(rng), RandomRotation(rng), RandomVector(rng, 5));
    ate_dev = std::max(ate_dev, std::abs(AteRmse(moved, gt) - ate));
    const RpeResult rpe = Rpe(est, gt);
    const auto rigid = Transformed(est, 1.0, RandomRotation(rng), RandomVector(rng, 5));
    const RpeResult rpe_moved = Rpe(rigid, gt);
    rpe_dev = std::max({rpe_dev, std::abs(rpe.trans - rpe_moved.trans),
                        std::abs(rpe.rot_deg - rpe_moved.rot_deg)});

    std::vector<Eigen::Vector3d> a, b;
    const double s = scale(rng);
    const Eigen::Matrix3d r = RandomRotation(rng);
    const Eigen::Vector3d t = RandomVector(rng, 5);
    for (int i = 0; i < 10; ++i) {
      a.push_back(RandomVector(rng, 3));
      b.push_back(s * r * a.back() + t);
    }
    const Sim3Transform fit = UmeyamaAlign(a, b);
    umeyama = std::max({umeyama, std::abs(fit.scale - s) / s,
                        (fit.rotation.toRotationMatrix() - r).norm(),
                        (fit.translation - t).norm() / (1.0 + t.norm())});
  }
  o.detail << "ATE_sim3_dev=" << ate_dev << " RPE_rigid_dev=" << rpe_dev
           << " umeyama_err=" << umeyama;
  o.Require(ate_dev < 1e-9, "ATE invariant under similarity");
  o.Require(rpe_dev < 1e-7, "RPE invariant under rigid motion");
  o.Require(umeyama < 1e-10, "Umeyama recovers similarity to 1e-10");
}

int Run() {
  TempDir dir;
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"rigid_scene", [&](Outcome& o) { RigidScene(dir, o); }},
      {"dynamic_scene", [&](Outcome& o) { DynamicScene(dir, o); }},
      {"trajectory_optimization", [&](Outcome& o) { TrajectoryOptimization(dir, o); }},
      {"gradient_audits", GradientAudits},
      {"averaging_oracles", Averaging},
      {"formats_determinism", [&](Outcome& o) { Formats(dir, o); }},
      {"network_properties", Network},
      {"metrics", Metrics},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace trajsfm

int main() { return trajsfm::Run(); }
