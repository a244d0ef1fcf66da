#include "markertrack/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "markertrack/errors.hpp"

namespace mtrack {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

struct PngReader {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngReader() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
  }
};

struct PngWriter {
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~PngWriter() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
  }
};

// Decodes any PNG into 8-bit (or 16-bit passthrough) rows with `channels`
// output channels. bit_depth_out is 8 or 16.
void read_png_common(const std::filesystem::path& file, int want_channels,
                     bool allow16, int& width, int& height, int& bit_depth_out,
                     std::vector<std::uint8_t>& bytes) {
  FilePtr fp(std::fopen(file.string().c_str(), "rb"));
  if (!fp) throw IoError("cannot open PNG file: " + file.string());

  PngReader r;
  r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!r.png) throw IoError("png_create_read_struct failed");
  r.info = png_create_info_struct(r.png);
  if (!r.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(r.png))) throw IoError("failed to decode PNG: " + file.string());

  png_init_io(r.png, fp.get());
  png_read_info(r.png, r.info);

  png_uint_32 w = 0, h = 0;
  int depth = 0, color = 0;
  png_get_IHDR(r.png, r.info, &w, &h, &depth, &color, nullptr, nullptr, nullptr);

  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(r.png);
  if (png_get_valid(r.png, r.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(r.png);
  if (depth == 16 && !allow16) png_set_strip_16(r.png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(r.png);

  if (want_channels == 3) {
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(r.png);
  } else if (want_channels == 1) {
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA ||
        color == PNG_COLOR_TYPE_PALETTE)
      png_set_rgb_to_gray_fixed(r.png, 1, -1, -1);
  }
  png_read_update_info(r.png, r.info);

  width = static_cast<int>(w);
  height = static_cast<int>(h);
  bit_depth_out = png_get_bit_depth(r.png, r.info);
  const std::size_t rowbytes = png_get_rowbytes(r.png, r.info);
  bytes.resize(rowbytes * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = bytes.data() + y * rowbytes;
  png_read_image(r.png, rows.data());
  png_read_end(r.png, nullptr);
}

void write_png_common(const std::filesystem::path& file, int width, int height,
                      int bit_depth, int color_type,
                      const std::vector<png_bytep>& rows) {
  FilePtr fp(std::fopen(file.string().c_str(), "wb"));
  if (!fp) throw IoError("cannot create PNG file: " + file.string());

  PngWriter wtr;
  wtr.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!wtr.png) throw IoError("png_create_write_struct failed");
  wtr.info = png_create_info_struct(wtr.png);
  if (!wtr.info) throw IoError("png_create_info_struct failed");
  if (setjmp(png_jmpbuf(wtr.png))) throw IoError("failed to encode PNG: " + file.string());

  png_init_io(wtr.png, fp.get());
  png_set_IHDR(wtr.png, wtr.info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(wtr.png, wtr.info);
  if (bit_depth == 16) png_set_swap(wtr.png);  // little-endian in memory
  png_write_image(wtr.png, const_cast<png_bytepp>(rows.data()));
  png_write_end(wtr.png, nullptr);
}

}  // namespace

RgbFrame read_png_rgb(const std::filesystem::path& file) {
  int w = 0, h = 0, depth = 0;
  std::vector<std::uint8_t> bytes;
  read_png_common(file, 3, false, w, h, depth, bytes);
  RgbFrame img(w, h);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w * 3;
    for (int x = 0; x < w; ++x)
      img.at(x, y) = Rgb8{row[3 * x], row[3 * x + 1], row[3 * x + 2]};
  }
  return img;
}

GrayFrame read_png_gray(const std::filesystem::path& file) {
  int w = 0, h = 0, depth = 0;
  std::vector<std::uint8_t> bytes;
  read_png_common(file, 1, false, w, h, depth, bytes);
  GrayFrame img(w, h);
  for (int y = 0; y < h; ++y) {
    const std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) img.at(x, y) = row[x];
  }
  return img;
}

Image<std::uint16_t> read_png_gray16(const std::filesystem::path& file) {
  int w = 0, h = 0, depth = 0;
  std::vector<std::uint8_t> bytes;
  read_png_common(file, 1, true, w, h, depth, bytes);
  Image<std::uint16_t> img(w, h);
  if (depth == 16) {
    for (int y = 0; y < h; ++y) {
      const std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w * 2;
      for (int x = 0; x < w; ++x)  // PNG stores big-endian samples
        img.at(x, y) = static_cast<std::uint16_t>((row[2 * x] << 8) | row[2 * x + 1]);
    }
  } else {
    for (int y = 0; y < h; ++y) {
      const std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w;
      for (int x = 0; x < w; ++x) img.at(x, y) = row[x];
    }
  }
  return img;
}

BinaryMask read_png_mask(const std::filesystem::path& file) {
  GrayFrame g = read_png_gray(file);
  BinaryMask m(g.width(), g.height());
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) m.at(x, y) = g.at(x, y) ? 1 : 0;
  return m;
}

void write_png_rgb(const std::filesystem::path& file, const RgbFrame& img) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * 3);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w * 3;
    rows[y] = row;
    for (int x = 0; x < w; ++x) {
      const Rgb8& p = img.at(x, y);
      row[3 * x] = p.r;
      row[3 * x + 1] = p.g;
      row[3 * x + 2] = p.b;
    }
  }
  write_png_common(file, w, h, 8, PNG_COLOR_TYPE_RGB, rows);
}

void write_png_gray(const std::filesystem::path& file, const GrayFrame& img) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w;
    rows[y] = row;
    for (int x = 0; x < w; ++x) row[x] = img.at(x, y);
  }
  write_png_common(file, w, h, 8, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png_gray16(const std::filesystem::path& file, const Image<std::uint16_t>& img) {
  const int w = img.width(), h = img.height();
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(w) * h * 2);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * w * 2;
    rows[y] = row;
    for (int x = 0; x < w; ++x) {
      std::uint16_t v = img.at(x, y);
      row[2 * x] = static_cast<std::uint8_t>(v & 0xff);
      row[2 * x + 1] = static_cast<std::uint8_t>(v >> 8);
    }
  }
  write_png_common(file, w, h, 16, PNG_COLOR_TYPE_GRAY, rows);
}

void write_png_mask(const std::filesystem::path& file, const BinaryMask& mask) {
  const int w = mask.width(), h = mask.height();
  const int rowbytes = (w + 7) / 8;
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(rowbytes) * h, 0);
  std::vector<png_bytep> rows(h);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* row = bytes.data() + static_cast<std::size_t>(y) * rowbytes;
    rows[y] = row;
    for (int x = 0; x < w; ++x)
      if (mask.at(x, y)) row[x / 8] |= static_cast<std::uint8_t>(0x80 >> (x % 8));
  }
  write_png_common(file, w, h, 1, PNG_COLOR_TYPE_GRAY, rows);
}

}  // namespace mtrack
