#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajsfm/synth/scene.h"

namespace trajsfm::synth {

struct Manifest {
  uint64_t seed = 0;
  int num_frames = 0;
  std::vector<std::string> flows;
  std::vector<std::string> depths;
  std::vector<std::string> masks;
  std::string groundtruth;
  std::string intrinsics;
};

// Adds spec noise and outliers to an exact flow with a generator derived from
// (seed, from, to).
void PerturbFlow(const SceneSpec& spec, uint64_t seed, int from, int to,
                 FlowField& flow);

// Writes flows/flow_{i}_{j}.flo for every spec stride in both directions,
// depths/depth_{i}.pfm, masks/mask_{i}.pgm, groundtruth.txt (TUM),
// intrinsics.txt and manifest.json into out_dir.
Manifest Generate(const SceneSpec& spec, const std::string& out_dir,
                  uint64_t seed, int num_threads = 1);

}  // namespace trajsfm::synth
