#pragma once

#include "markertrack/image.hpp"

namespace mtrack {

struct HueThreshParams {
  int median_window = 10;
  int threshold = 57;
  bool keep_above = true;     // markers occupy the high-hue band
  int upper_bound = 255;      // optional band top, inclusive
  int structuring_radius = 3; // disk element
};

/// window x window median with replicated edges. An even window anchors at
/// the top-left of its 2x2 center block; even-length medians take the lower
/// of the two middle order statistics. Throws ParameterError when the window
/// is < 1 or larger than both image dimensions.
GrayFrame median_filter(const GrayFrame& channel, int window);

/// Keep-if->= threshold by default (band [threshold, upper_bound]);
/// keep_above=false selects the complementary low band [0, threshold].
BinaryMask threshold_hue(const GrayFrame& hue, int threshold, bool keep_above = true,
                         int upper_bound = 255);

/// Disk structuring element of the given radius: offsets with
/// dx^2 + dy^2 <= radius^2. Out-of-bounds pixels count as background.
BinaryMask dilate(const BinaryMask& mask, int radius);
BinaryMask erode(const BinaryMask& mask, int radius);

/// Closing (dilate, erode) followed by opening (erode, dilate).
BinaryMask morph_close_then_open(const BinaryMask& mask, int radius);

/// Median filter on the hue channel, fixed threshold, then closing/opening.
BinaryMask hue_segment(const HsvFrame& frame, const HueThreshParams& params);

}  // namespace mtrack
