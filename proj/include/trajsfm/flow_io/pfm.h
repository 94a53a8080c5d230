#pragma once

#include <string>

#include "trajsfm/flow_io/field.h"

namespace trajsfm {

// Grayscale PFM ("Pf"). Rows are stored bottom to top as in the reference
// format; a negative scale marks little-endian data. The returned map is top
// to bottom.
DepthMap ReadPfm(const std::string& path);
void WritePfm(const DepthMap& map, const std::string& path);

inline constexpr double kDepthNormalizationEps = 1e-6;

// Reads a PFM depth map and min-max normalizes it into (0, 1):
//   d' = (d - min + eps) / (max - min + 2 eps).
// Constant images are rejected.
DepthMap ReadDepth(const std::string& path);
DepthMap NormalizeDepth(const DepthMap& raw);

std::string DepthFileName(int frame);

}  // namespace trajsfm
