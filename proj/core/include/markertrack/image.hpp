#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <vector>

namespace mtrack {

struct Rgb8 {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb8&) const = default;
};

struct Hsv8 {
  std::uint8_t h = 0, s = 0, v = 0;
  bool operator==(const Hsv8&) const = default;
};

/// Row-major raster with (x, y) = (column, row) addressing, origin top-left.
template <typename T>
class Image {
 public:
  Image() = default;
  Image(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(static_cast<std::size_t>(width) * height, fill) {
    assert(width >= 0 && height >= 0);
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::int64_t pixel_count() const {
    return static_cast<std::int64_t>(width_) * height_;
  }
  bool empty() const { return data_.empty(); }

  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width_ && y >= 0 && y < height_;
  }

  T& at(int x, int y) {
    assert(in_bounds(x, y));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }
  const T& at(int x, int y) const {
    assert(in_bounds(x, y));
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  /// Sample with replicated (clamped) edges.
  const T& at_clamped(int x, int y) const {
    x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
    y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
    return data_[static_cast<std::size_t>(y) * width_ + x];
  }

  std::vector<T>& pixels() { return data_; }
  const std::vector<T>& pixels() const { return data_; }

  bool operator==(const Image&) const = default;

 private:
  int width_ = 0, height_ = 0;
  std::vector<T> data_;
};

using RgbFrame = Image<Rgb8>;
using HsvFrame = Image<Hsv8>;
using GrayFrame = Image<std::uint8_t>;

/// Binary mask: 0 background, 1 marker. Same dimensions as its source frame.
using BinaryMask = Image<std::uint8_t>;

/// Round-half-away-from-zero to an 8-bit channel; the one rounding
/// convention used everywhere a float maps to a channel value.
inline std::uint8_t to_byte(double v) {
  long r = std::lround(v);
  if (r < 0) return 0;
  if (r > 255) return 255;
  return static_cast<std::uint8_t>(r);
}

/// Axis-aligned integer rectangle (used for ROI windows and crops).
struct Rect {
  int x0 = 0, y0 = 0, width = 0, height = 0;
  bool operator==(const Rect&) const = default;
};

template <typename T>
Image<T> crop(const Image<T>& src, const Rect& r) {
  assert(r.x0 >= 0 && r.y0 >= 0 && r.x0 + r.width <= src.width() &&
         r.y0 + r.height <= src.height());
  Image<T> out(r.width, r.height);
  for (int y = 0; y < r.height; ++y)
    for (int x = 0; x < r.width; ++x)
      out.at(x, y) = src.at(r.x0 + x, r.y0 + y);
  return out;
}

}  // namespace mtrack
