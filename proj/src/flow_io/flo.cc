#include "trajsfm/flow_io/flo.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "trajsfm/util/binary_io.h"

namespace trajsfm {

FlowField ReadFlo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open flow file " + path);
  }
  const float magic = ReadLittleEndian<float>(in, "flo magic");
  if (std::memcmp(&magic, &kFloMagic, sizeof(float)) != 0) {
    throw FormatError("bad .flo magic in " + path);
  }
  const int32_t width = ReadLittleEndian<int32_t>(in, "flo width");
  const int32_t height = ReadLittleEndian<int32_t>(in, "flo height");
  if (width <= 0 || height <= 0 || width > (1 << 16) || height > (1 << 16)) {
    throw FormatError("implausible .flo dimensions in " + path);
  }
  FlowField flow(width, height);
  auto& data = flow.data();
  for (size_t i = 0; i < data.size(); ++i) {
    data[i] = ReadLittleEndian<float>(in, "flo payload of " + path);
  }
  for (size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      const size_t pixel = i / 2;
      throw ValidationError(
          "non-finite flow value in " + path + " at index " +
          std::to_string(i) + " (pixel x=" + std::to_string(pixel % width) +
          ", y=" + std::to_string(pixel / width) + ")");
    }
  }
  return flow;
}

void WriteFlo(const FlowField& flow, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  WriteLittleEndian(out, kFloMagic);
  WriteLittleEndian<int32_t>(out, flow.width());
  WriteLittleEndian<int32_t>(out, flow.height());
  for (const float v : flow.data()) {
    WriteLittleEndian(out, v);
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

std::string FlowFileName(int from_frame, int to_frame) {
  return "flow_" + std::to_string(from_frame) + "_" + std::to_string(to_frame) +
         ".flo";
}

}  // namespace trajsfm
