#include "trajsfm/flow_io/pfm.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include "trajsfm/util/binary_io.h"

namespace trajsfm {
namespace {

std::string ReadToken(std::istream& in, const std::string& path) {
  std::string token;
  char c;
  while (in.get(c)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) return token;
    } else {
      token.push_back(c);
    }
  }
  if (token.empty()) {
    throw FormatError("truncated PFM header in " + path);
  }
  return token;
}

float ByteSwap(float value) {
  uint32_t bits;
  std::memcpy(&bits, &value, sizeof(bits));
  bits = ((bits & 0xFF) << 24) | ((bits & 0xFF00) << 8) |
         ((bits >> 8) & 0xFF00) | (bits >> 24);
  std::memcpy(&value, &bits, sizeof(bits));
  return value;
}

}  // namespace

DepthMap ReadPfm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open depth file " + path);
  }
  const std::string type = ReadToken(in, path);
  if (type != "Pf") {
    throw FormatError("expected grayscale PFM header 'Pf' in " + path +
                      ", got '" + type + "'");
  }
  int width = 0;
  int height = 0;
  double scale = 0.0;
  try {
    width = std::stoi(ReadToken(in, path));
    height = std::stoi(ReadToken(in, path));
    scale = std::stod(ReadToken(in, path));
  } catch (const std::logic_error&) {
    throw FormatError("malformed PFM header in " + path);
  }
  if (width <= 0 || height <= 0 || scale == 0.0) {
    throw FormatError("invalid PFM dimensions or scale in " + path);
  }
  const bool little_endian = scale < 0.0;
  const bool swap = little_endian != (std::endian::native == std::endian::little);
  DepthMap map(width, height);
  for (int row = 0; row < height; ++row) {
    const int y = height - 1 - row;
    for (int x = 0; x < width; ++x) {
      float v;
      in.read(reinterpret_cast<char*>(&v), sizeof(v));
      if (in.gcount() != sizeof(v)) {
        throw LengthError("truncated PFM payload in " + path);
      }
      map.at(x, y) = swap ? ByteSwap(v) : v;
    }
  }
  return map;
}

void WritePfm(const DepthMap& map, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "Pf\n" << map.width() << " " << map.height() << "\n-1\n";
  for (int row = 0; row < map.height(); ++row) {
    const int y = map.height() - 1 - row;
    for (int x = 0; x < map.width(); ++x) {
      WriteLittleEndian(out, map.at(x, y));
    }
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

DepthMap NormalizeDepth(const DepthMap& raw) {
  const auto& data = raw.data();
  for (size_t i = 0; i < data.size(); ++i) {
    if (!std::isfinite(data[i])) {
      throw ValidationError("non-finite depth at index " + std::to_string(i));
    }
  }
  const auto [min_it, max_it] = std::minmax_element(data.begin(), data.end());
  const double lo = *min_it;
  const double hi = *max_it;
  if (!(hi > lo)) {
    throw ValidationError(
        "constant depth map cannot be normalized (all values " +
        std::to_string(lo) + ")");
  }
  const double eps = kDepthNormalizationEps;
  DepthMap out(raw.width(), raw.height());
  for (size_t i = 0; i < data.size(); ++i) {
    const float v =
        static_cast<float>((data[i] - lo + eps) / (hi - lo + 2.0 * eps));
    // float32 rounding must not close the interval on wide depth ranges.
    out.data()[i] = std::clamp(v, std::numeric_limits<float>::min(),
                               std::nextafter(1.0f, 0.0f));
  }
  return out;
}

DepthMap ReadDepth(const std::string& path) { return NormalizeDepth(ReadPfm(path)); }

std::string DepthFileName(int frame) {
  return "depth_" + std::to_string(frame) + ".pfm";
}

}  // namespace trajsfm
