#pragma once

#include <string>
#include <vector>

#include "trajsfm/motionseg/segnet.h"

namespace trajsfm {

// One recorded forward pass: a batch of windows and the probabilities the
// exporting implementation produced for them.
struct ProbeRecord {
  std::vector<TrajectoryWindow> windows;
  std::vector<float> outputs;
};

// "SGPB" file: magic, u32 record count, then per record u32 N, u32 L,
// N x (L x 10 float32 features, L u8 mask), N float32 outputs.
std::vector<ProbeRecord> ReadProbes(const std::string& path);
void WriteProbes(const std::vector<ProbeRecord>& probes, const std::string& path);

// Largest absolute difference between recorded and recomputed outputs.
double MaxProbeDeviation(const std::vector<ProbeRecord>& probes,
                         const SegNetWeights& weights);

}  // namespace trajsfm
