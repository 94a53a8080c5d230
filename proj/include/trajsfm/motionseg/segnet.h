#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trajsfm/motionseg/features.h"

namespace trajsfm {

struct SegNetConfig {
  int channels = 64;
  int clusters = 100;
  int heads = 4;
  int feedforward = 64;
  int encoder_blocks = 4;
  int context_layers = 2;
  int pointcn_layers = 8;
};

struct Tensor {
  std::vector<uint32_t> dims;
  std::vector<float> data;

  size_t size() const {
    size_t n = 1;
    for (const auto d : dims) n *= d;
    return n;
  }
  bool operator==(const Tensor& other) const = default;
};

// Named parameter tensors in [out, in] layout for affine maps.
struct SegNetWeights {
  SegNetConfig config;
  std::map<std::string, Tensor> tensors;

  const Tensor& Get(const std::string& name) const;
  bool operator==(const SegNetWeights& other) const {
    return config.channels == other.config.channels &&
           config.clusters == other.config.clusters && tensors == other.tensors;
  }
};

// Names and shapes the architecture requires, in file order.
std::vector<std::pair<std::string, std::vector<uint32_t>>> ExpectedTensors(
    const SegNetConfig& config);

// Throws ValidationError on a missing, unexpected, misshaped, or non-finite
// tensor, or when channels is not divisible by heads.
void ValidateWeights(const SegNetWeights& weights);

// Deterministic random parameters for tests and smoke runs.
SegNetWeights RandomWeights(const SegNetConfig& config, uint64_t seed);

// "SGNW" container.
inline constexpr uint32_t kWeightsVersion = 1;
SegNetWeights LoadWeights(const std::string& path);
void SaveWeights(const SegNetWeights& weights, const std::string& path);

// Motion probability of every window, each strictly inside (0, 1). Needs at
// least 2 windows of equal length with at least one valid row each.
std::vector<double> SegNetForward(const std::vector<TrajectoryWindow>& windows,
                                  const SegNetWeights& weights, int num_threads = 1);

}  // namespace trajsfm
