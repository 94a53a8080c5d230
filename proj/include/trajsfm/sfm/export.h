#pragma once

#include <string>

#include "trajsfm/sfm/types.h"

namespace trajsfm {

// Camera-to-world poses in TUM format, timestamp = frame index.
void WritePosesTum(const Reconstruction& recon, const std::string& path);

// ASCII PLY of triangulated points, colored by depth along the mean viewing
// direction.
void WritePly(const Reconstruction& recon, const std::string& path);

}  // namespace trajsfm
