#pragma once

#include <string>
#include <vector>

#include "trajsfm/trajectory/trajectory.h"

namespace trajsfm {

// Binary trajectory dump: "PTRJ", u32 version, then per trajectory u32
// start_frame, u32 length and `length` float32 (u, v) pairs, little-endian.
inline constexpr uint32_t kTrajectoryDumpVersion = 1;

void WriteTrajectoryDump(const std::vector<PointTrajectory>& trajectories,
                         const std::string& path);
// Loaded trajectories are marked dead; liveness is not stored.
std::vector<PointTrajectory> ReadTrajectoryDump(const std::string& path);

}  // namespace trajsfm
