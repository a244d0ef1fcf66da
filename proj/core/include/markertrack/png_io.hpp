#pragma once

#include <cstdint>
#include <filesystem>

#include "markertrack/image.hpp"

namespace mtrack {

RgbFrame read_png_rgb(const std::filesystem::path& file);
GrayFrame read_png_gray(const std::filesystem::path& file);
Image<std::uint16_t> read_png_gray16(const std::filesystem::path& file);

/// Reads a 1-bit or 8-bit grayscale PNG; any nonzero sample becomes 1.
BinaryMask read_png_mask(const std::filesystem::path& file);

void write_png_rgb(const std::filesystem::path& file, const RgbFrame& img);
void write_png_gray(const std::filesystem::path& file, const GrayFrame& img);
void write_png_gray16(const std::filesystem::path& file, const Image<std::uint16_t>& img);

/// Writes a bit-depth-1 grayscale PNG (0 background, 1 marker).
void write_png_mask(const std::filesystem::path& file, const BinaryMask& mask);

}  // namespace mtrack
