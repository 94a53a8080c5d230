#include "trajsfm/flow_io/pgm.h"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace trajsfm {

void WritePgm(const Field<1>& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
  for (const float v : image.data()) {
    const auto byte = static_cast<unsigned char>(
        std::clamp(std::lround(v), 0L, 255L));
    out.put(static_cast<char>(byte));
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

Field<1> ReadPgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  std::string magic;
  int width = 0;
  int height = 0;
  int max_value = 0;
  if (!(in >> magic >> width >> height >> max_value) || magic != "P5" ||
      max_value != 255) {
    throw FormatError("unsupported PGM header in " + path);
  }
  in.get();
  Field<1> image(width, height);
  for (float& v : image.data()) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw LengthError("truncated PGM payload in " + path);
    }
    v = static_cast<float>(c);
  }
  return image;
}

}  // namespace trajsfm
