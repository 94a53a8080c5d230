#include "trajsfm/util/camera.h"

#include <fstream>
#include <iomanip>

#include "trajsfm/util/errors.h"

namespace trajsfm {

Intrinsics ReadIntrinsics(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open intrinsics file " + path);
  }
  Intrinsics k;
  if (!(in >> k.fx >> k.fy >> k.cx >> k.cy)) {
    throw FormatError("intrinsics file " + path +
                      " must contain four numbers: fx fy cx cy");
  }
  if (!(k.fx > 0.0) || !(k.fy > 0.0)) {
    throw ValidationError("focal lengths must be positive in " + path);
  }
  return k;
}

void WriteIntrinsics(const Intrinsics& k, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out << std::setprecision(17) << k.fx << " " << k.fy << " " << k.cx << " "
      << k.cy << "\n";
}

}  // namespace trajsfm
