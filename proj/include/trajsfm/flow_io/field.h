#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "trajsfm/util/errors.h"

namespace trajsfm {

// Dense row-major grid of `Channels` float32 values per pixel.
template <int Channels>
class Field {
 public:
  using Value = Eigen::Matrix<double, Channels, 1>;

  Field() = default;
  Field(int width, int height)
      : width_(width),
        height_(height),
        data_(static_cast<size_t>(width) * height * Channels, 0.0f) {
    if (width <= 0 || height <= 0) {
      throw ValidationError("field dimensions must be positive, got " +
                            std::to_string(width) + "x" +
                            std::to_string(height));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return data_.empty(); }

  float& at(int x, int y, int c = 0) {
    return data_[(static_cast<size_t>(y) * width_ + x) * Channels + c];
  }
  float at(int x, int y, int c = 0) const {
    return data_[(static_cast<size_t>(y) * width_ + x) * Channels + c];
  }

  Value Get(int x, int y) const {
    Value v;
    for (int c = 0; c < Channels; ++c) v[c] = at(x, y, c);
    return v;
  }
  void Set(int x, int y, const Value& v) {
    for (int c = 0; c < Channels; ++c) at(x, y, c) = static_cast<float>(v[c]);
  }

  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  bool Contains(const Eigen::Vector2d& p) const {
    return p.x() >= 0.0 && p.y() >= 0.0 && p.x() <= width_ - 1 &&
           p.y() <= height_ - 1;
  }

  bool SameSize(const Field& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  bool operator==(const Field& other) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<float> data_;
};

// Per-pixel (du, dv) displacement in pixels.
using FlowField = Field<2>;
// Per-pixel scalar depth.
using DepthMap = Field<1>;

// Bilinear interpolation at p = (u, v). Grid points return the stored value
// exactly. Throws RangeError outside [0, W-1] x [0, H-1]; there is no clamping.
template <int Channels>
typename Field<Channels>::Value SampleBilinear(const Field<Channels>& field,
                                               const Eigen::Vector2d& p) {
  if (!(field.Contains(p))) {
    throw RangeError("sample position (" + std::to_string(p.x()) + ", " +
                     std::to_string(p.y()) + ") outside " +
                     std::to_string(field.width()) + "x" +
                     std::to_string(field.height()) + " field");
  }
  const int x0 = static_cast<int>(std::floor(p.x()));
  const int y0 = static_cast<int>(std::floor(p.y()));
  const int x1 = std::min(x0 + 1, field.width() - 1);
  const int y1 = std::min(y0 + 1, field.height() - 1);
  const double ax = p.x() - x0;
  const double ay = p.y() - y0;
  typename Field<Channels>::Value v;
  for (int c = 0; c < Channels; ++c) {
    const double top = (1.0 - ax) * field.at(x0, y0, c) + ax * field.at(x1, y0, c);
    const double bottom =
        (1.0 - ax) * field.at(x0, y1, c) + ax * field.at(x1, y1, c);
    v[c] = (1.0 - ay) * top + ay * bottom;
  }
  return v;
}

inline constexpr double kFailedCheck = std::numeric_limits<double>::infinity();

// ||F_fwd(p) + F_bwd(p + F_fwd(p))||. Returns kFailedCheck when the forward
// target leaves the image.
double ForwardBackwardError(const FlowField& forward, const FlowField& backward,
                            const Eigen::Vector2d& p);

}  // namespace trajsfm
