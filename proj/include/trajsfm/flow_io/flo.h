#pragma once

#include <string>

#include "trajsfm/flow_io/field.h"

namespace trajsfm {

// Middlebury .flo: float32 magic 202021.25 ("PIEH"), int32 width, int32
// height, then interleaved little-endian float32 (du, dv) in row-major order.
inline constexpr float kFloMagic = 202021.25f;

FlowField ReadFlo(const std::string& path);
void WriteFlo(const FlowField& flow, const std::string& path);

// Conventional file name of the flow from frame i to frame j.
std::string FlowFileName(int from_frame, int to_frame);

}  // namespace trajsfm
