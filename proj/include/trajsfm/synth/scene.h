#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trajsfm/flow_io/field.h"
#include "trajsfm/util/camera.h"

namespace trajsfm::synth {

// Half-space n . X < offset. The static scene is the inside of the convex
// region bounded by all planes, so the visible surface is continuous and
// piecewise planar.
struct Plane {
  Eigen::Vector3d normal = Eigen::Vector3d::UnitZ();
  double offset = 1.0;
};

// Planar rectangle moving rigidly about its own center.
struct MovingObject {
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d axis_u = Eigen::Vector3d::UnitX();
  Eigen::Vector3d axis_v = Eigen::Vector3d::UnitY();
  Eigen::Vector2d half_size = Eigen::Vector2d::Ones();
  // Per-frame translation and axis-angle rotation.
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
};

// center(t) = start + velocity * t + wobble_amplitude * sin(2 pi t / period)
// camera-to-world rotation(t) = Exp(angular_velocity * t) * Exp(start_rotation)
struct CameraPath {
  Eigen::Vector3d start_center = Eigen::Vector3d::Zero();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Vector3d wobble_amplitude = Eigen::Vector3d::Zero();
  double wobble_period = 20.0;
  Eigen::Vector3d start_rotation = Eigen::Vector3d::Zero();
  Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero();
};

struct SceneSpec {
  int width = 64;
  int height = 64;
  Intrinsics intrinsics{60.0, 60.0, 32.0, 32.0};
  int num_frames = 10;
  CameraPath camera;
  std::vector<Plane> planes;
  std::vector<MovingObject> objects;
  // Gaussian flow noise (pixels) per stride; strides not listed are exact.
  std::vector<std::pair<int, double>> noise_sigma;
  double outlier_fraction = 0.0;
  std::vector<int> strides{1, 2};

  double NoiseSigma(int stride) const;
  // Throws ValidationError on inconsistent specs.
  void Validate() const;
};

SceneSpec ParseSceneSpec(const std::string& json_text);
SceneSpec ReadSceneSpec(const std::string& path);
std::string SceneSpecToJson(const SceneSpec& spec);

// Backward-flow value written where the source point is hidden in the target
// frame, so that every forward-backward check through it fails.
inline constexpr float kOcclusionFlow = 1000.0f;

struct SurfaceHit {
  double depth = 0.0;  // camera z
  Eigen::Vector3d world = Eigen::Vector3d::Zero();
  // -1 for the static scene, otherwise the object index.
  int surface = -1;
  // Point in the object's frame-0 coordinates (equals world for static).
  Eigen::Vector3d reference = Eigen::Vector3d::Zero();
};

class SyntheticScene {
 public:
  explicit SyntheticScene(SceneSpec spec);

  const SceneSpec& spec() const { return spec_; }
  int num_frames() const { return spec_.num_frames; }

  CameraPose Pose(int frame) const;
  std::optional<SurfaceHit> CastRay(int frame, const Eigen::Vector2d& pixel) const;
  // World position at `frame` of a surface point given by its reference.
  Eigen::Vector3d PointAt(int surface, const Eigen::Vector3d& reference,
                          int frame) const;

  // Projection in `to` of the surface point seen at `pixel` in `from`,
  // ignoring visibility. Empty when the point is behind the camera.
  std::optional<Eigen::Vector2d> Correspond(int from, const Eigen::Vector2d& pixel,
                                            int to) const;
  // True when the point seen at `pixel` in `from` is the first surface hit at
  // its projection in `to` (outside-image projections count as visible).
  bool VisibleIn(int from, const Eigen::Vector2d& pixel, int to) const;

  bool IsMoving(int frame, const Eigen::Vector2d& pixel) const;

  // Noise-free flow from `from` to `to`. When from > to, pixels whose point is
  // hidden in the earlier frame carry kOcclusionFlow.
  FlowField Flow(int from, int to) const;
  DepthMap Depth(int frame) const;
  // 255 on moving-object pixels, 0 elsewhere.
  Field<1> MotionMask(int frame) const;

 private:
  SceneSpec spec_;
};

}  // namespace trajsfm::synth
