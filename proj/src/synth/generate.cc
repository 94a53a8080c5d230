#include "trajsfm/synth/generate.h"

#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "trajsfm/eval/tum.h"
#include "trajsfm/flow_io/flo.h"
#include "trajsfm/flow_io/pfm.h"
#include "trajsfm/flow_io/pgm.h"
#include "trajsfm/util/errors.h"
#include "trajsfm/util/parallel.h"
#include "trajsfm/util/random.h"

namespace trajsfm::synth {
namespace {

namespace fs = std::filesystem;

std::string MaskFileName(int frame) {
  return "mask_" + std::to_string(frame) + ".pgm";
}

}  // namespace

void PerturbFlow(const SceneSpec& spec, uint64_t seed, int from, int to,
                 FlowField& flow) {
  const double sigma = spec.NoiseSigma(std::abs(to - from));
  if (sigma <= 0.0 && spec.outlier_fraction <= 0.0) return;
  std::mt19937_64 rng(DeriveSeed(seed, from, to));
  std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int y = 0; y < flow.height(); ++y) {
    for (int x = 0; x < flow.width(); ++x) {
      // Draw the same number of variates for every pixel so that the stream
      // does not depend on the flow content.
      const double nu = noise(rng);
      const double nv = noise(rng);
      const double pick = unit(rng);
      const double ou = unit(rng);
      const double ov = unit(rng);
      if (flow.at(x, y, 0) == kOcclusionFlow) continue;
      if (pick < spec.outlier_fraction) {
        flow.at(x, y, 0) = static_cast<float>((ou - 0.5) * 0.5 * spec.width);
        flow.at(x, y, 1) = static_cast<float>((ov - 0.5) * 0.5 * spec.height);
      } else if (sigma > 0.0) {
        flow.at(x, y, 0) += static_cast<float>(nu);
        flow.at(x, y, 1) += static_cast<float>(nv);
      }
    }
  }
}

Manifest Generate(const SceneSpec& spec, const std::string& out_dir,
                  uint64_t seed, int num_threads) {
  spec.Validate();
  const SyntheticScene scene(spec);
  const fs::path root(out_dir);
  fs::create_directories(root / "flows");
  fs::create_directories(root / "depths");
  fs::create_directories(root / "masks");

  Manifest manifest;
  manifest.seed = seed;
  manifest.num_frames = spec.num_frames;

  std::vector<std::pair<int, int>> pairs;
  for (const int stride : spec.strides) {
    for (int i = 0; i + stride < spec.num_frames; ++i) {
      pairs.emplace_back(i, i + stride);
      pairs.emplace_back(i + stride, i);
    }
  }
  for (const auto& [from, to] : pairs) {
    manifest.flows.push_back("flows/" + FlowFileName(from, to));
  }
  for (int i = 0; i < spec.num_frames; ++i) {
    manifest.depths.push_back("depths/" + DepthFileName(i));
    manifest.masks.push_back("masks/" + MaskFileName(i));
  }
  manifest.groundtruth = "groundtruth.txt";
  manifest.intrinsics = "intrinsics.txt";

  ParallelFor(pairs.size(), num_threads, [&](size_t k) {
    const auto [from, to] = pairs[k];
    FlowField flow = scene.Flow(from, to);
    PerturbFlow(spec, seed, from, to, flow);
    WriteFlo(flow, (root / manifest.flows[k]).string());
  });
  ParallelFor(spec.num_frames, num_threads, [&](size_t i) {
    const int frame = static_cast<int>(i);
    WritePfm(scene.Depth(frame), (root / manifest.depths[i]).string());
    WritePgm(scene.MotionMask(frame), (root / manifest.masks[i]).string());
  });

  std::vector<TimedPose> groundtruth;
  for (int i = 0; i < spec.num_frames; ++i) {
    groundtruth.push_back(TimedPose::FromCameraPose(i, scene.Pose(i)));
  }
  WriteTum(groundtruth, (root / manifest.groundtruth).string());
  WriteIntrinsics(spec.intrinsics, (root / manifest.intrinsics).string());

  nlohmann::json j;
  j["seed"] = seed;
  j["width"] = spec.width;
  j["height"] = spec.height;
  j["num_frames"] = spec.num_frames;
  j["strides"] = spec.strides;
  j["intrinsics"] = manifest.intrinsics;
  j["groundtruth"] = manifest.groundtruth;
  j["flows"] = manifest.flows;
  j["depths"] = manifest.depths;
  j["masks"] = manifest.masks;
  j["scene"] = nlohmann::json::parse(SceneSpecToJson(spec));
  std::ofstream out(root / "manifest.json");
  if (!out) {
    throw IoError("cannot write manifest in " + out_dir);
  }
  out << j.dump(2) << "\n";
  return manifest;
}

}  // namespace trajsfm::synth
