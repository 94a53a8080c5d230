#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "trajsfm/sfm/types.h"
#include "trajsfm/synth/scene.h"
#include "trajsfm/util/camera.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm::testing {

// Directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("trajsfm_test_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFileBytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void WriteFileBytes(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

template <typename T>
void AppendLE(std::string& bytes, T value) {
  const auto* p = reinterpret_cast<const char*>(&value);
  bytes.append(p, sizeof(T));
}

inline Eigen::Matrix3d RandomRotation(std::mt19937_64& rng, double max_angle = M_PI) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, max_angle);
  const Eigen::Vector3d axis = Eigen::Vector3d(n(rng), n(rng), n(rng)).normalized();
  return ExpSO3(axis * u(rng));
}

inline Eigen::Vector3d RandomVector(std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline Intrinsics TestIntrinsics() { return {500.0, 500.0, 320.0, 240.0}; }

// Cameras on a gentle arc looking at a point cloud around (0, 0, 6).
struct MultiViewScene {
  Intrinsics intrinsics = TestIntrinsics();
  std::vector<CameraPose> poses;
  std::vector<Eigen::Vector3d> points;

  Eigen::Vector2d Project(int frame, int point) const {
    return intrinsics.Project(poses[frame].ToCamera(points[point]));
  }
};

inline MultiViewScene MakeMultiViewScene(int num_frames, int num_points,
                                         uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiViewScene scene;
  for (int f = 0; f < num_frames; ++f) {
    const Eigen::Vector3d center(0.4 * f + 0.05 * u(rng), 0.1 * std::sin(f) + 0.05 * u(rng),
                                 0.05 * f);
    const Eigen::Matrix3d r =
        ExpSO3(Eigen::Vector3d(0.02 * u(rng), -0.04 * f + 0.02 * u(rng), 0.02 * u(rng)));
    scene.poses.push_back(CameraPose::FromCenter(r, center));
  }
  while (static_cast<int>(scene.points.size()) < num_points) {
    const Eigen::Vector3d p(3.0 * u(rng) + 0.2 * num_frames, 2.0 * u(rng),
                            6.0 + 2.0 * u(rng));
    bool visible = true;
    for (const auto& pose : scene.poses) {
      const Eigen::Vector3d c = pose.ToCamera(p);
      const Eigen::Vector2d px = scene.intrinsics.Project(c);
      visible = visible && c.z() > 1.0 && px.x() > 0 && px.x() < 640 && px.y() > 0 &&
                px.y() < 480;
    }
    if (visible) scene.points.push_back(p);
  }
  return scene;
}

inline std::vector<Match> SceneMatches(const MultiViewScene& scene, int i, int j) {
  std::vector<Match> matches;
  for (int k = 0; k < static_cast<int>(scene.points.size()); ++k) {
    matches.push_back({scene.Project(i, k), scene.Project(j, k), k});
  }
  return matches;
}

// Exact edge between frames i < j of world-to-camera poses.
inline ViewEdge ExactEdge(const std::vector<CameraPose>& poses, int i, int j,
                          int inliers = 100) {
  ViewEdge e;
  e.i = i;
  e.j = j;
  e.rotation = poses[j].R() * poses[i].R().transpose();
  const Eigen::Vector3d t = poses[j].translation - e.rotation * poses[i].translation;
  e.direction = t.normalized();
  e.num_inliers = inliers;
  return e;
}

inline ViewGraph ExactGraph(const std::vector<CameraPose>& poses,
                            const std::vector<int>& strides) {
  ViewGraph g;
  g.num_frames = static_cast<int>(poses.size());
  for (const int s : strides) {
    for (int i = 0; i + s < g.num_frames; ++i) g.edges.push_back(ExactEdge(poses, i, i + s));
  }
  return g;
}

// Small static room used by several end-to-end tests.
inline synth::SceneSpec SmallRoomSpec(int num_frames = 6) {
  synth::SceneSpec spec;
  spec.width = 48;
  spec.height = 48;
  spec.intrinsics = {45.0, 45.0, 24.0, 24.0};
  spec.num_frames = num_frames;
  spec.camera.velocity = {0.1, 0.03, 0.04};
  spec.camera.wobble_amplitude = {0.05, 0.1, 0.05};
  spec.camera.wobble_period = 16.0;
  spec.camera.angular_velocity = {0.004, -0.006, 0.008};
  spec.planes = {{Eigen::Vector3d(0.15, 0.1, 1.0), 10.0},
                 {Eigen::Vector3d(1.0, 0.0, 0.3), 5.0},
                 {Eigen::Vector3d(-1.0, 0.0, 0.2), 5.0},
                 {Eigen::Vector3d(0.0, 1.0, 0.25), 4.0},
                 {Eigen::Vector3d(0.0, -1.0, 0.4), 5.0}};
  spec.strides = {1, 2};
  return spec;
}

}  // namespace trajsfm::testing
