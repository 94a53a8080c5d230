#pragma once

#include <string>

#include "trajsfm/flow_io/field.h"

namespace trajsfm {

// 8-bit binary PGM (P5). Values are rounded and clamped to [0, 255].
void WritePgm(const Field<1>& image, const std::string& path);
Field<1> ReadPgm(const std::string& path);

}  // namespace trajsfm
