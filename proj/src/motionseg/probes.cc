#include "trajsfm/motionseg/probes.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "trajsfm/util/binary_io.h"
#include "trajsfm/util/errors.h"

namespace trajsfm {
namespace {

constexpr char kMagic[4] = {'S', 'G', 'P', 'B'};

}  // namespace

std::vector<ProbeRecord> ReadProbes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open probes " + path);
  if (ReadBytes(in, 4, "SGPB magic") != std::string(kMagic, 4)) {
    throw FormatError(path + ": bad magic, expected SGPB");
  }
  const auto count = ReadLittleEndian<uint32_t>(in, "probe count");
  std::vector<ProbeRecord> probes(count);
  for (auto& record : probes) {
    const auto n = ReadLittleEndian<uint32_t>(in, "probe window count");
    const auto length = ReadLittleEndian<uint32_t>(in, "probe window length");
    record.windows.resize(n);
    for (uint32_t w = 0; w < n; ++w) {
      TrajectoryWindow& window = record.windows[w];
      window.trajectory = static_cast<int>(w);
      window.features = FeatureMatrix::Zero(length, kFeatureDim);
      for (uint32_t r = 0; r < length; ++r) {
        for (int c = 0; c < kFeatureDim; ++c) {
          window.features(r, c) = ReadLittleEndian<float>(in, "probe features");
        }
      }
      window.mask.resize(length);
      for (auto& m : window.mask) m = ReadLittleEndian<uint8_t>(in, "probe mask");
    }
    record.outputs.resize(n);
    for (auto& o : record.outputs) o = ReadLittleEndian<float>(in, "probe outputs");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(path + ": trailing bytes after " + std::to_string(count) +
                      " probe records");
  }
  return probes;
}

void WriteProbes(const std::vector<ProbeRecord>& probes, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  WriteLittleEndian<uint32_t>(out, static_cast<uint32_t>(probes.size()));
  for (const auto& record : probes) {
    const uint32_t n = static_cast<uint32_t>(record.windows.size());
    const uint32_t length = n ? static_cast<uint32_t>(record.windows[0].length()) : 0;
    if (record.outputs.size() != n) {
      throw ValidationError("probe record has " + std::to_string(n) +
                            " windows but " + std::to_string(record.outputs.size()) +
                            " outputs");
    }
    WriteLittleEndian<uint32_t>(out, n);
    WriteLittleEndian<uint32_t>(out, length);
    for (const auto& window : record.windows) {
      if (static_cast<uint32_t>(window.length()) != length) {
        throw ValidationError("probe windows differ in length");
      }
      for (uint32_t r = 0; r < length; ++r) {
        for (int c = 0; c < kFeatureDim; ++c) {
          WriteLittleEndian<float>(out, window.features(r, c));
        }
      }
      for (const auto m : window.mask) WriteLittleEndian<uint8_t>(out, m);
    }
    for (const float o : record.outputs) WriteLittleEndian<float>(out, o);
  }
  if (!out) throw IoError("failed writing " + path);
}

double MaxProbeDeviation(const std::vector<ProbeRecord>& probes,
                         const SegNetWeights& weights) {
  double worst = 0.0;
  for (const auto& record : probes) {
    const std::vector<double> out = SegNetForward(record.windows, weights);
    for (size_t k = 0; k < out.size(); ++k) {
      worst = std::max(worst, std::abs(out[k] - static_cast<double>(record.outputs[k])));
    }
  }
  return worst;
}

}  // namespace trajsfm
