#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "markertrack/image.hpp"

namespace mtrack {

enum class BayerPattern { kRggb, kBggr, kGrbg, kGbrg };

BayerPattern bayer_pattern_from_string(const std::string& s);
std::string to_string(BayerPattern p);

/// Single-sensor color filter mosaic. Width and height must be even.
struct BayerFrame {
  int width = 0, height = 0;
  std::vector<std::uint8_t> data;  // row-major samples
  BayerPattern pattern = BayerPattern::kRggb;

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
};

/// Bilinear demosaic. The measured sample is kept untouched; each missing
/// channel is the mean of the same-color samples in the 3x3 neighborhood,
/// with replicated edges. Throws DimensionError on odd dimensions.
RgbFrame debayer(const BayerFrame& frame);

/// RGB -> HSV with all three channels scaled to 0-255
/// (H maps [0,360) degrees onto [0,255]; achromatic pixels get H=0).
HsvFrame rgb_to_hsv(const RgbFrame& frame);
Hsv8 rgb_to_hsv(Rgb8 p);

/// Luminance 0.299R + 0.587G + 0.114B, rounded half away from zero.
GrayFrame rgb_to_gray(const RgbFrame& frame);
std::uint8_t rgb_to_gray(Rgb8 p);

GrayFrame hue_channel(const HsvFrame& frame);

enum class SequenceFormat { kPngSequence, kRawBayer };

/// Sidecar header for raw Bayer sequences: plain text key=value lines
/// (width, height, pattern), one `header.txt` per directory.
struct BayerHeader {
  int width = 0, height = 0;
  BayerPattern pattern = BayerPattern::kRggb;
};

BayerHeader read_bayer_header(const std::filesystem::path& file);
void write_bayer_header(const std::filesystem::path& file, const BayerHeader& h);

std::string frame_file_name(int index, const std::string& extension);

/// Lists `frame_<index>.<ext>` files in ascending index order and verifies
/// the indices are contiguous from the smallest. Throws GapError naming the
/// first missing index, IoError for unreadable directories.
std::vector<std::filesystem::path> list_sequence(const std::filesystem::path& dir,
                                                 const std::string& extension);

/// Frame-sequence reader that decodes one frame at a time. PNG sequences
/// decode to RGB directly; raw Bayer sequences are debayered on read.
class SequenceReader {
 public:
  SequenceReader(const std::filesystem::path& dir, SequenceFormat format);

  int size() const { return static_cast<int>(files_.size()); }
  SequenceFormat format() const { return format_; }

  RgbFrame read_rgb(int index) const;
  BayerFrame read_bayer(int index) const;  // raw-bayer sequences only

 private:
  std::vector<std::filesystem::path> files_;
  SequenceFormat format_;
  BayerHeader header_;
};

/// Eager loaders for small sequences.
std::vector<RgbFrame> load_rgb_sequence(const std::filesystem::path& dir);
std::vector<BayerFrame> load_bayer_sequence(const std::filesystem::path& dir);

void write_raw_bayer(const std::filesystem::path& file, const BayerFrame& frame);

}  // namespace mtrack
