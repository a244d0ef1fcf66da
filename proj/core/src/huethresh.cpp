#include "markertrack/huethresh.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "markertrack/errors.hpp"
#include "markertrack/frameio.hpp"

namespace mtrack {

namespace {

// Sliding coarse/fine histogram over one output row. The coarse level has
// 16 buckets of 16 bins each, so selecting the k-th order statistic costs
// at most 32 scans instead of 256.
struct SlidingHistogram {
  std::array<int, 256> fine{};
  std::array<int, 16> coarse{};

  void add(std::uint8_t v) {
    ++fine[v];
    ++coarse[v >> 4];
  }
  void remove(std::uint8_t v) {
    --fine[v];
    --coarse[v >> 4];
  }
  // k-th smallest, 0-based.
  std::uint8_t select(int k) const {
    int rest = k;
    for (int c = 0; c < 16; ++c) {
      if (rest < coarse[c]) {
        for (int f = c << 4; f < (c + 1) << 4; ++f) {
          if (rest < fine[f]) return static_cast<std::uint8_t>(f);
          rest -= fine[f];
        }
      }
      rest -= coarse[c];
    }
    return 255;  // unreachable for a populated histogram
  }
};

}  // namespace

GrayFrame median_filter(const GrayFrame& channel, int window) {
  if (window < 1) throw ParameterError("median window must be >= 1");
  if (window > channel.width() && window > channel.height())
    throw ParameterError("median window larger than both image dimensions");
  if (window == 1) return channel;

  const int w = channel.width(), h = channel.height();
  // Offsets [lo, hi]; for even windows the anchor is the top-left of the
  // 2x2 center block (e.g. window 10 spans -4..+5).
  const int lo = -((window - 1) / 2);
  const int hi = window / 2;
  const int samples = window * window;
  const int k = (samples - 1) / 2;  // lower middle for even counts

  GrayFrame out(w, h);
  for (int y = 0; y < h; ++y) {
    SlidingHistogram hist;
    for (int dy = lo; dy <= hi; ++dy)
      for (int dx = lo; dx <= hi; ++dx) hist.add(channel.at_clamped(dx, y + dy));
    out.at(0, y) = hist.select(k);
    for (int x = 1; x < w; ++x) {
      for (int dy = lo; dy <= hi; ++dy) {
        hist.remove(channel.at_clamped(x - 1 + lo, y + dy));
        hist.add(channel.at_clamped(x + hi, y + dy));
      }
      out.at(x, y) = hist.select(k);
    }
  }
  return out;
}

BinaryMask threshold_hue(const GrayFrame& hue, int threshold, bool keep_above,
                         int upper_bound) {
  BinaryMask mask(hue.width(), hue.height());
  for (int y = 0; y < hue.height(); ++y) {
    for (int x = 0; x < hue.width(); ++x) {
      const int v = hue.at(x, y);
      const bool keep = keep_above ? (v >= threshold && v <= upper_bound) : (v <= threshold);
      mask.at(x, y) = keep ? 1 : 0;
    }
  }
  return mask;
}

namespace {

std::vector<std::pair<int, int>> disk_offsets(int radius) {
  std::vector<std::pair<int, int>> offsets;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx)
      if (dx * dx + dy * dy <= radius * radius) offsets.emplace_back(dx, dy);
  return offsets;
}

}  // namespace

BinaryMask dilate(const BinaryMask& mask, int radius) {
  if (radius < 1) throw ParameterError("structuring radius must be >= 1");
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      std::uint8_t v = 0;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        if (mask.in_bounds(nx, ny) && mask.at(nx, ny)) {
          v = 1;
          break;
        }
      }
      out.at(x, y) = v;
    }
  }
  return out;
}

BinaryMask erode(const BinaryMask& mask, int radius) {
  if (radius < 1) throw ParameterError("structuring radius must be >= 1");
  const auto offsets = disk_offsets(radius);
  BinaryMask out(mask.width(), mask.height());
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      std::uint8_t v = 1;
      for (const auto& [dx, dy] : offsets) {
        const int nx = x + dx, ny = y + dy;
        if (!mask.in_bounds(nx, ny) || !mask.at(nx, ny)) {
          v = 0;  // out-of-bounds counts as background
          break;
        }
      }
      out.at(x, y) = v;
    }
  }
  return out;
}

BinaryMask morph_close_then_open(const BinaryMask& mask, int radius) {
  BinaryMask closed = erode(dilate(mask, radius), radius);
  return dilate(erode(closed, radius), radius);
}

BinaryMask hue_segment(const HsvFrame& frame, const HueThreshParams& params) {
  GrayFrame hue = hue_channel(frame);
  hue = median_filter(hue, params.median_window);
  BinaryMask mask = threshold_hue(hue, params.threshold, params.keep_above, params.upper_bound);
  return morph_close_then_open(mask, params.structuring_radius);
}

}  // namespace mtrack
