#include "trajsfm/synth/scene.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "trajsfm/util/errors.h"
#include "trajsfm/util/rotation.h"

namespace trajsfm::synth {
namespace {

using json = nlohmann::json;

Eigen::Vector3d Vec3(const json& j, const char* key,
                     const Eigen::Vector3d& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 3) {
    throw ValidationError(std::string("'") + key + "' must be a 3-vector");
  }
  return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

json ToJson(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

struct CameraState {
  Eigen::Vector3d center;
  Eigen::Matrix3d camera_to_world;
};

CameraState CameraAt(const CameraPath& path, int frame) {
  const double t = frame;
  CameraState s;
  s.center = path.start_center + path.velocity * t +
             path.wobble_amplitude * std::sin(2.0 * M_PI * t / path.wobble_period);
  s.camera_to_world =
      ExpSO3(path.angular_velocity * t) * ExpSO3(path.start_rotation);
  return s;
}

}  // namespace

double SceneSpec::NoiseSigma(int stride) const {
  for (const auto& [s, sigma] : noise_sigma) {
    if (s == stride) return sigma;
  }
  return 0.0;
}

void SceneSpec::Validate() const {
  if (width <= 0 || height <= 0) {
    throw ValidationError("scene image size must be positive");
  }
  if (num_frames < 2) {
    throw ValidationError("scene needs at least 2 frames");
  }
  if (!(intrinsics.fx > 0.0) || !(intrinsics.fy > 0.0)) {
    throw ValidationError("scene focal lengths must be positive");
  }
  if (planes.empty()) {
    throw ValidationError("scene needs at least one static plane");
  }
  for (const auto& plane : planes) {
    if (plane.normal.norm() < 1e-9) {
      throw ValidationError("plane normal must be non-zero");
    }
  }
  if (!(camera.wobble_period > 0.0)) {
    throw ValidationError("camera wobble_period must be positive");
  }
  for (const auto& object : objects) {
    if ((object.half_size.array() <= 0.0).any() ||
        std::abs(object.axis_u.normalized().dot(object.axis_v.normalized())) >
            1e-9) {
      throw ValidationError(
          "object axes must be orthogonal with positive half sizes");
    }
  }
  for (const int stride : strides) {
    if (stride < 1) throw ValidationError("strides must be >= 1");
  }
  if (outlier_fraction < 0.0 || outlier_fraction > 1.0) {
    throw ValidationError("outlier_fraction must lie in [0, 1]");
  }
  for (int frame = 0; frame < num_frames; ++frame) {
    const CameraState cam = CameraAt(camera, frame);
    for (const auto& plane : planes) {
      if (plane.normal.normalized().dot(cam.center) >=
          plane.offset / plane.normal.norm()) {
        throw ValidationError("camera leaves the static scene at frame " +
                              std::to_string(frame));
      }
    }
  }
  const SyntheticScene scene(*this);
  for (int frame : {0, num_frames / 2, num_frames - 1}) {
    for (int i = 0; i <= 8; ++i) {
      for (int j = 0; j <= 8; ++j) {
        const Eigen::Vector2d pixel((width - 1) * i / 8.0, (height - 1) * j / 8.0);
        if (!scene.CastRay(frame, pixel)) {
          throw ValidationError("pixel ray misses the scene at frame " +
                                std::to_string(frame));
        }
      }
    }
  }
  for (size_t k = 0; k < objects.size(); ++k) {
    const CameraState cam = CameraAt(camera, 0);
    const Eigen::Vector3d p =
        cam.camera_to_world.transpose() * (objects[k].center - cam.center);
    const Eigen::Vector2d pixel = intrinsics.Project(p);
    if (p.z() <= 0.0 || pixel.x() < 0 || pixel.y() < 0 || pixel.x() > width - 1 ||
        pixel.y() > height - 1) {
      throw ValidationError("object " + std::to_string(k) +
                            " is not inside the first image");
    }
  }
}

SceneSpec ParseSceneSpec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid scene JSON: ") + e.what());
  }
  SceneSpec spec;
  try {
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.num_frames = j.value("num_frames", spec.num_frames);
    if (j.contains("intrinsics")) {
      const auto& k = j.at("intrinsics");
      if (!k.is_array() || k.size() != 4) {
        throw ValidationError("'intrinsics' must be [fx, fy, cx, cy]");
      }
      spec.intrinsics = {k[0].get<double>(), k[1].get<double>(),
                         k[2].get<double>(), k[3].get<double>()};
    } else {
      spec.intrinsics = Intrinsics::Default(spec.width, spec.height);
    }
    if (j.contains("camera")) {
      const auto& c = j.at("camera");
      auto& path = spec.camera;
      path.start_center = Vec3(c, "start_center", path.start_center);
      path.velocity = Vec3(c, "velocity", path.velocity);
      path.wobble_amplitude = Vec3(c, "wobble_amplitude", path.wobble_amplitude);
      path.wobble_period = c.value("wobble_period", path.wobble_period);
      path.start_rotation = Vec3(c, "start_rotation", path.start_rotation);
      path.angular_velocity = Vec3(c, "angular_velocity", path.angular_velocity);
    }
    for (const auto& p : j.value("planes", json::array())) {
      Plane plane;
      plane.normal = Vec3(p, "normal", plane.normal);
      plane.offset = p.at("offset").get<double>();
      spec.planes.push_back(plane);
    }
    for (const auto& o : j.value("objects", json::array())) {
      MovingObject object;
      object.center = Vec3(o, "center", object.center);
      object.axis_u = Vec3(o, "axis_u", object.axis_u).normalized();
      object.axis_v = Vec3(o, "axis_v", object.axis_v).normalized();
      const auto& h = o.at("half_size");
      object.half_size = {h.at(0).get<double>(), h.at(1).get<double>()};
      object.velocity = Vec3(o, "velocity", object.velocity);
      object.angular_velocity =
          Vec3(o, "angular_velocity", object.angular_velocity);
      spec.objects.push_back(object);
    }
    if (j.contains("noise_sigma")) {
      for (const auto& [key, value] : j.at("noise_sigma").items()) {
        spec.noise_sigma.emplace_back(std::stoi(key), value.get<double>());
      }
    }
    spec.outlier_fraction = j.value("outlier_fraction", spec.outlier_fraction);
    if (j.contains("strides")) {
      spec.strides = j.at("strides").get<std::vector<int>>();
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid scene spec: ") + e.what());
  } catch (const std::invalid_argument&) {
    throw FormatError("invalid scene spec: noise_sigma keys must be strides");
  }
  spec.Validate();
  return spec;
}

SceneSpec ReadSceneSpec(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open scene spec " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseSceneSpec(buffer.str());
}

std::string SceneSpecToJson(const SceneSpec& spec) {
  json j;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["num_frames"] = spec.num_frames;
  j["intrinsics"] = {spec.intrinsics.fx, spec.intrinsics.fy,
                     spec.intrinsics.cx, spec.intrinsics.cy};
  j["camera"] = {{"start_center", ToJson(spec.camera.start_center)},
                 {"velocity", ToJson(spec.camera.velocity)},
                 {"wobble_amplitude", ToJson(spec.camera.wobble_amplitude)},
                 {"wobble_period", spec.camera.wobble_period},
                 {"start_rotation", ToJson(spec.camera.start_rotation)},
                 {"angular_velocity", ToJson(spec.camera.angular_velocity)}};
  j["planes"] = json::array();
  for (const auto& p : spec.planes) {
    j["planes"].push_back({{"normal", ToJson(p.normal)}, {"offset", p.offset}});
  }
  j["objects"] = json::array();
  for (const auto& o : spec.objects) {
    j["objects"].push_back(
        {{"center", ToJson(o.center)},
         {"axis_u", ToJson(o.axis_u)},
         {"axis_v", ToJson(o.axis_v)},
         {"half_size", {o.half_size.x(), o.half_size.y()}},
         {"velocity", ToJson(o.velocity)},
         {"angular_velocity", ToJson(o.angular_velocity)}});
  }
  j["noise_sigma"] = json::object();
  for (const auto& [stride, sigma] : spec.noise_sigma) {
    j["noise_sigma"][std::to_string(stride)] = sigma;
  }
  j["outlier_fraction"] = spec.outlier_fraction;
  j["strides"] = spec.strides;
  return j.dump(2);
}

SyntheticScene::SyntheticScene(SceneSpec spec) : spec_(std::move(spec)) {
  for (auto& plane : spec_.planes) {
    const double norm = plane.normal.norm();
    plane.normal /= norm;
    plane.offset /= norm;
  }
  for (auto& object : spec_.objects) {
    object.axis_u.normalize();
    object.axis_v.normalize();
  }
}

CameraPose SyntheticScene::Pose(int frame) const {
  const CameraState cam = CameraAt(spec_.camera, frame);
  return CameraPose::FromCenter(cam.camera_to_world.transpose(), cam.center);
}

Eigen::Vector3d SyntheticScene::PointAt(int surface,
                                        const Eigen::Vector3d& reference,
                                        int frame) const {
  if (surface < 0) return reference;
  const MovingObject& object = spec_.objects[surface];
  return object.center + object.velocity * frame +
         ExpSO3(object.angular_velocity * frame) * (reference - object.center);
}

std::optional<SurfaceHit> SyntheticScene::CastRay(
    int frame, const Eigen::Vector2d& pixel) const {
  const CameraState cam = CameraAt(spec_.camera, frame);
  const Eigen::Vector2d n = spec_.intrinsics.Normalize(pixel);
  const Eigen::Vector3d ray = cam.camera_to_world * Eigen::Vector3d(n.x(), n.y(), 1.0);

  double best = std::numeric_limits<double>::infinity();
  for (const auto& plane : spec_.planes) {
    const double denom = plane.normal.dot(ray);
    if (denom <= 1e-12) continue;
    const double s = (plane.offset - plane.normal.dot(cam.center)) / denom;
    if (s > 0.0 && s < best) best = s;
  }
  if (!std::isfinite(best)) return std::nullopt;

  SurfaceHit hit;
  hit.depth = best;
  hit.world = cam.center + best * ray;
  hit.reference = hit.world;
  hit.surface = -1;

  for (size_t k = 0; k < spec_.objects.size(); ++k) {
    const MovingObject& object = spec_.objects[k];
    const Eigen::Matrix3d rotation = ExpSO3(object.angular_velocity * frame);
    const Eigen::Vector3d center = object.center + object.velocity * frame;
    const Eigen::Vector3d u = rotation * object.axis_u;
    const Eigen::Vector3d v = rotation * object.axis_v;
    const Eigen::Vector3d normal = u.cross(v);
    const double denom = normal.dot(ray);
    if (std::abs(denom) < 1e-12) continue;
    const double s = normal.dot(center - cam.center) / denom;
    if (!(s > 0.0) || s >= hit.depth) continue;
    const Eigen::Vector3d x = cam.center + s * ray;
    const Eigen::Vector3d local = x - center;
    if (std::abs(u.dot(local)) > object.half_size.x() ||
        std::abs(v.dot(local)) > object.half_size.y()) {
      continue;
    }
    hit.depth = s;
    hit.world = x;
    hit.surface = static_cast<int>(k);
    hit.reference = object.center + rotation.transpose() * local;
  }
  return hit;
}

std::optional<Eigen::Vector2d> SyntheticScene::Correspond(
    int from, const Eigen::Vector2d& pixel, int to) const {
  const auto hit = CastRay(from, pixel);
  if (!hit) return std::nullopt;
  const Eigen::Vector3d camera_point =
      Pose(to).ToCamera(PointAt(hit->surface, hit->reference, to));
  if (camera_point.z() <= 1e-9) return std::nullopt;
  return spec_.intrinsics.Project(camera_point);
}

bool SyntheticScene::VisibleIn(int from, const Eigen::Vector2d& pixel,
                               int to) const {
  const auto hit = CastRay(from, pixel);
  if (!hit) return false;
  const Eigen::Vector3d world = PointAt(hit->surface, hit->reference, to);
  const Eigen::Vector3d camera_point = Pose(to).ToCamera(world);
  if (camera_point.z() <= 1e-9) return false;
  const Eigen::Vector2d target = spec_.intrinsics.Project(camera_point);
  if (target.x() < 0.0 || target.y() < 0.0 || target.x() > spec_.width - 1 ||
      target.y() > spec_.height - 1) {
    return true;
  }
  const auto seen = CastRay(to, target);
  return seen && seen->surface == hit->surface &&
         (seen->world - world).norm() <= 1e-6 * (1.0 + camera_point.z());
}

bool SyntheticScene::IsMoving(int frame, const Eigen::Vector2d& pixel) const {
  const auto hit = CastRay(frame, pixel);
  return hit && hit->surface >= 0;
}

FlowField SyntheticScene::Flow(int from, int to) const {
  FlowField flow(spec_.width, spec_.height);
  for (int y = 0; y < spec_.height; ++y) {
    for (int x = 0; x < spec_.width; ++x) {
      const Eigen::Vector2d pixel(x, y);
      const auto target = Correspond(from, pixel, to);
      if (!target) {
        if (!CastRay(from, pixel)) {
          throw ValidationError("pixel ray misses the scene at frame " +
                                std::to_string(from));
        }
        flow.Set(x, y, Eigen::Vector2d::Constant(kOcclusionFlow));
        continue;
      }
      if (from > to && !VisibleIn(from, pixel, to)) {
        flow.Set(x, y, Eigen::Vector2d::Constant(kOcclusionFlow));
        continue;
      }
      flow.Set(x, y, *target - pixel);
    }
  }
  return flow;
}

DepthMap SyntheticScene::Depth(int frame) const {
  DepthMap depth(spec_.width, spec_.height);
  for (int y = 0; y < spec_.height; ++y) {
    for (int x = 0; x < spec_.width; ++x) {
      const auto hit = CastRay(frame, Eigen::Vector2d(x, y));
      if (!hit) {
        throw ValidationError("pixel ray misses the scene at frame " +
                              std::to_string(frame));
      }
      depth.at(x, y) = static_cast<float>(hit->depth);
    }
  }
  return depth;
}

Field<1> SyntheticScene::MotionMask(int frame) const {
  Field<1> mask(spec_.width, spec_.height);
  for (int y = 0; y < spec_.height; ++y) {
    for (int x = 0; x < spec_.width; ++x) {
      mask.at(x, y) = IsMoving(frame, Eigen::Vector2d(x, y)) ? 255.0f : 0.0f;
    }
  }
  return mask;
}

}  // namespace trajsfm::synth
