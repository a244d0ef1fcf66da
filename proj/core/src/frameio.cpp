#include "markertrack/frameio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "markertrack/errors.hpp"
#include "markertrack/png_io.hpp"

namespace mtrack {

namespace {

// Channel of a mosaic position: 0=R, 1=G, 2=B.
inline int bayer_channel(BayerPattern p, int x, int y) {
  static constexpr int kTile[4][4] = {
      // index = (y&1)*2 + (x&1)
      {0, 1, 1, 2},  // RGGB
      {2, 1, 1, 0},  // BGGR
      {1, 0, 2, 1},  // GRBG
      {1, 2, 0, 1},  // GBRG
  };
  return kTile[static_cast<int>(p)][(y & 1) * 2 + (x & 1)];
}

}  // namespace

BayerPattern bayer_pattern_from_string(const std::string& s) {
  std::string up;
  for (char c : s) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "RGGB") return BayerPattern::kRggb;
  if (up == "BGGR") return BayerPattern::kBggr;
  if (up == "GRBG") return BayerPattern::kGrbg;
  if (up == "GBRG") return BayerPattern::kGbrg;
  throw ParameterError("unknown Bayer pattern: " + s);
}

std::string to_string(BayerPattern p) {
  switch (p) {
    case BayerPattern::kRggb: return "RGGB";
    case BayerPattern::kBggr: return "BGGR";
    case BayerPattern::kGrbg: return "GRBG";
    case BayerPattern::kGbrg: return "GBRG";
  }
  return "RGGB";
}

RgbFrame debayer(const BayerFrame& frame) {
  if (frame.width % 2 != 0 || frame.height % 2 != 0)
    throw DimensionError("Bayer frame dimensions must be even");
  if (static_cast<std::size_t>(frame.width) * frame.height != frame.data.size())
    throw DimensionError("Bayer data length does not match dimensions");

  const int w = frame.width, h = frame.height;
  RgbFrame out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int sum[3] = {0, 0, 0};
      int cnt[3] = {0, 0, 0};
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          int nx = std::clamp(x + dx, 0, w - 1);
          int ny = std::clamp(y + dy, 0, h - 1);
          int c = bayer_channel(frame.pattern, nx, ny);
          sum[c] += frame.at(nx, ny);
          cnt[c] += 1;
        }
      }
      const int own = bayer_channel(frame.pattern, x, y);
      std::uint8_t rgb[3];
      for (int c = 0; c < 3; ++c) {
        if (c == own) {
          rgb[c] = frame.at(x, y);
        } else {
          rgb[c] = to_byte(static_cast<double>(sum[c]) / cnt[c]);
        }
      }
      out.at(x, y) = Rgb8{rgb[0], rgb[1], rgb[2]};
    }
  }
  return out;
}

Hsv8 rgb_to_hsv(Rgb8 p) {
  const int r = p.r, g = p.g, b = p.b;
  const int maxc = std::max({r, g, b});
  const int minc = std::min({r, g, b});
  const int chroma = maxc - minc;

  double h_deg = 0.0;
  if (chroma != 0) {
    if (maxc == r)
      h_deg = 60.0 * (static_cast<double>(g - b) / chroma);
    else if (maxc == g)
      h_deg = 60.0 * (2.0 + static_cast<double>(b - r) / chroma);
    else
      h_deg = 60.0 * (4.0 + static_cast<double>(r - g) / chroma);
    if (h_deg < 0.0) h_deg += 360.0;
  }
  const std::uint8_t hh = to_byte(h_deg * 255.0 / 360.0);
  const std::uint8_t ss = maxc == 0 ? 0 : to_byte(255.0 * chroma / maxc);
  const std::uint8_t vv = static_cast<std::uint8_t>(maxc);
  return Hsv8{hh, ss, vv};
}

HsvFrame rgb_to_hsv(const RgbFrame& frame) {
  HsvFrame out(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x) out.at(x, y) = rgb_to_hsv(frame.at(x, y));
  return out;
}

std::uint8_t rgb_to_gray(Rgb8 p) {
  return to_byte(0.299 * p.r + 0.587 * p.g + 0.114 * p.b);
}

GrayFrame rgb_to_gray(const RgbFrame& frame) {
  GrayFrame out(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x) out.at(x, y) = rgb_to_gray(frame.at(x, y));
  return out;
}

GrayFrame hue_channel(const HsvFrame& frame) {
  GrayFrame out(frame.width(), frame.height());
  for (int y = 0; y < frame.height(); ++y)
    for (int x = 0; x < frame.width(); ++x) out.at(x, y) = frame.at(x, y).h;
  return out;
}

BayerHeader read_bayer_header(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open Bayer header: " + file.string());
  BayerHeader h;
  bool saw_w = false, saw_h = false, saw_p = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    };
    trim(key);
    trim(value);
    if (key == "width") {
      h.width = std::stoi(value);
      saw_w = true;
    } else if (key == "height") {
      h.height = std::stoi(value);
      saw_h = true;
    } else if (key == "pattern") {
      h.pattern = bayer_pattern_from_string(value);
      saw_p = true;
    }
  }
  if (!saw_w || !saw_h || !saw_p)
    throw IoError("Bayer header missing width/height/pattern: " + file.string());
  return h;
}

void write_bayer_header(const std::filesystem::path& file, const BayerHeader& h) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write Bayer header: " + file.string());
  out << "width=" << h.width << "\n"
      << "height=" << h.height << "\n"
      << "pattern=" << to_string(h.pattern) << "\n";
}

std::string frame_file_name(int index, const std::string& extension) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d", index);
  return std::string(buf) + "." + extension;
}

std::vector<std::filesystem::path> list_sequence(const std::filesystem::path& dir,
                                                 const std::string& extension) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());

  std::map<int, fs::path> by_index;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path& p = entry.path();
    if (p.extension() != "." + extension) continue;
    std::string stem = p.stem().string();
    if (stem.rfind("frame_", 0) != 0) continue;
    std::string digits = stem.substr(6);
    if (digits.empty() ||
        !std::all_of(digits.begin(), digits.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    by_index.emplace(std::stoi(digits), p);
  }

  std::vector<fs::path> files;
  if (by_index.empty()) return files;
  int expect = by_index.begin()->first;
  for (const auto& [index, path] : by_index) {
    if (index != expect)
      throw GapError("missing frame index " + std::to_string(expect) + " in " + dir.string(),
                     expect);
    files.push_back(path);
    ++expect;
  }
  return files;
}

SequenceReader::SequenceReader(const std::filesystem::path& dir, SequenceFormat format)
    : format_(format) {
  if (format == SequenceFormat::kPngSequence) {
    files_ = list_sequence(dir, "png");
  } else {
    files_ = list_sequence(dir, "raw");
    header_ = read_bayer_header(dir / "header.txt");
  }
}

BayerFrame SequenceReader::read_bayer(int index) const {
  if (format_ != SequenceFormat::kRawBayer)
    throw ParameterError("read_bayer on a PNG sequence");
  const auto& file = files_.at(index);
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot open raw frame: " + file.string());
  BayerFrame f;
  f.width = header_.width;
  f.height = header_.height;
  f.pattern = header_.pattern;
  f.data.resize(static_cast<std::size_t>(f.width) * f.height);
  in.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(f.data.size()));
  if (static_cast<std::size_t>(in.gcount()) != f.data.size())
    throw IoError("raw frame shorter than header dimensions: " + file.string());
  return f;
}

RgbFrame SequenceReader::read_rgb(int index) const {
  if (format_ == SequenceFormat::kPngSequence) return read_png_rgb(files_.at(index));
  return debayer(read_bayer(index));
}

std::vector<RgbFrame> load_rgb_sequence(const std::filesystem::path& dir) {
  SequenceReader reader(dir, SequenceFormat::kPngSequence);
  std::vector<RgbFrame> frames;
  frames.reserve(reader.size());
  for (int i = 0; i < reader.size(); ++i) frames.push_back(reader.read_rgb(i));
  return frames;
}

std::vector<BayerFrame> load_bayer_sequence(const std::filesystem::path& dir) {
  SequenceReader reader(dir, SequenceFormat::kRawBayer);
  std::vector<BayerFrame> frames;
  frames.reserve(reader.size());
  for (int i = 0; i < reader.size(); ++i) frames.push_back(reader.read_bayer(i));
  return frames;
}

void write_raw_bayer(const std::filesystem::path& file, const BayerFrame& frame) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw IoError("cannot write raw frame: " + file.string());
  out.write(reinterpret_cast<const char*>(frame.data.data()),
            static_cast<std::streamsize>(frame.data.size()));
}

}  // namespace mtrack
