#include "trajsfm/trajectory/dump.h"

#include <fstream>

#include "trajsfm/util/binary_io.h"

namespace trajsfm {

void WriteTrajectoryDump(const std::vector<PointTrajectory>& trajectories,
                         const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open " + path + " for writing");
  }
  out.write("PTRJ", 4);
  WriteLittleEndian(out, kTrajectoryDumpVersion);
  for (const auto& trajectory : trajectories) {
    WriteLittleEndian<uint32_t>(out, trajectory.start_frame);
    WriteLittleEndian<uint32_t>(out, trajectory.positions.size());
    for (const auto& p : trajectory.positions) {
      WriteLittleEndian(out, static_cast<float>(p.x()));
      WriteLittleEndian(out, static_cast<float>(p.y()));
    }
  }
  if (!out) {
    throw IoError("failed writing " + path);
  }
}

std::vector<PointTrajectory> ReadTrajectoryDump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open trajectory dump " + path);
  }
  if (ReadBytes(in, 4, "PTRJ magic") != "PTRJ") {
    throw FormatError("bad trajectory dump magic in " + path);
  }
  const uint32_t version = ReadLittleEndian<uint32_t>(in, "PTRJ version");
  if (version != kTrajectoryDumpVersion) {
    throw FormatError("unsupported trajectory dump version " +
                      std::to_string(version));
  }
  std::vector<PointTrajectory> trajectories;
  while (in.peek() != std::char_traits<char>::eof()) {
    PointTrajectory trajectory;
    trajectory.alive = false;
    trajectory.start_frame =
        static_cast<int>(ReadLittleEndian<uint32_t>(in, "start frame"));
    const uint32_t length = ReadLittleEndian<uint32_t>(in, "length");
    if (length == 0) {
      throw FormatError("empty trajectory record in " + path);
    }
    trajectory.positions.reserve(length);
    for (uint32_t k = 0; k < length; ++k) {
      const float u = ReadLittleEndian<float>(in, "trajectory position");
      const float v = ReadLittleEndian<float>(in, "trajectory position");
      trajectory.positions.emplace_back(u, v);
    }
    trajectories.push_back(std::move(trajectory));
  }
  return trajectories;
}

}  // namespace trajsfm
