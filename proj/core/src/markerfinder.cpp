#include "markertrack/markerfinder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>

#include "markertrack/errors.hpp"

namespace mtrack {

namespace {

void finalize_stats(Region& r, const HsvFrame& hsv, const GrayFrame& gray) {
  double sx = 0, sy = 0, sh = 0, sg = 0;
  for (const auto& [x, y] : r.pixels) {
    sx += x;
    sy += y;
    sh += hsv.at(x, y).h;
    sg += gray.at(x, y);
  }
  const double n = static_cast<double>(r.pixels.size());
  r.area = static_cast<int>(r.pixels.size());
  r.centroid_x = sx / n;
  r.centroid_y = sy / n;
  r.mean_hue = sh / n;
  r.mean_gray = sg / n;
}

}  // namespace

std::string to_string(CandidateTier tier) {
  switch (tier) {
    case CandidateTier::kStrict5Pct: return "strict-5pct";
    case CandidateTier::kRelaxed10Pct: return "relaxed-10pct";
    case CandidateTier::kEmpty: return "empty";
  }
  return "empty";
}

std::vector<Region> extract_regions(const SuperpixelLabels& labels, const HsvFrame& hsv,
                                    const GrayFrame& gray) {
  if (labels.width != hsv.width() || labels.height != hsv.height() ||
      labels.width != gray.width() || labels.height != gray.height())
    throw DimensionError("segmentation dimensions must match frames");

  std::vector<Region> regions(labels.num_labels);
  for (int l = 0; l < labels.num_labels; ++l) regions[l].id = l;
  for (int y = 0; y < labels.height; ++y)
    for (int x = 0; x < labels.width; ++x)
      regions[labels.at(x, y)].pixels.emplace_back(x, y);
  for (Region& r : regions) finalize_stats(r, hsv, gray);
  return regions;
}

std::vector<Region> extract_regions(const BinaryMask& mask, const HsvFrame& hsv,
                                    const GrayFrame& gray) {
  if (mask.width() != hsv.width() || mask.height() != hsv.height() ||
      mask.width() != gray.width() || mask.height() != gray.height())
    throw DimensionError("segmentation dimensions must match frames");

  const int w = mask.width(), h = mask.height();
  std::vector<bool> seen(static_cast<std::size_t>(w) * h, false);
  std::vector<Region> regions;
  std::deque<std::pair<int, int>> queue;
  for (int sy = 0; sy < h; ++sy) {
    for (int sx = 0; sx < w; ++sx) {
      if (!mask.at(sx, sy) || seen[static_cast<std::size_t>(sy) * w + sx]) continue;
      Region r;
      r.id = static_cast<int>(regions.size());
      seen[static_cast<std::size_t>(sy) * w + sx] = true;
      queue.emplace_back(sx, sy);
      while (!queue.empty()) {
        auto [x, y] = queue.front();
        queue.pop_front();
        r.pixels.emplace_back(x, y);
        const int nx4[4] = {x - 1, x + 1, x, x};
        const int ny4[4] = {y, y, y - 1, y + 1};
        for (int i = 0; i < 4; ++i) {
          const int nx = nx4[i], ny = ny4[i];
          if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
          const std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
          if (!seen[idx] && mask.at(nx, ny)) {
            seen[idx] = true;
            queue.emplace_back(nx, ny);
          }
        }
      }
      finalize_stats(r, hsv, gray);
      regions.push_back(std::move(r));
    }
  }
  return regions;
}

CandidateSet marker_finder(const std::vector<Region>& regions, double prev_hue,
                           int frame_index, int marker_index,
                           const MarkerFinderParams& params) {
  if (prev_hue <= 0.0 || prev_hue > 255.0)
    throw ParameterError("marker_finder prev_hue must be in (0, 255]");

  CandidateSet out;
  out.frame_index = frame_index;
  out.marker_index = marker_index;

  for (const Region& r : regions)
    if (std::abs(r.mean_hue - prev_hue) <= params.strict_tol * prev_hue)
      out.regions.push_back(r);
  if (!out.regions.empty()) {
    out.tier = CandidateTier::kStrict5Pct;
    return out;
  }

  for (const Region& r : regions)
    if (std::abs(r.mean_hue - prev_hue) <= params.relaxed_tol * prev_hue)
      out.regions.push_back(r);
  out.tier = out.regions.empty() ? CandidateTier::kEmpty : CandidateTier::kRelaxed10Pct;
  return out;
}

CandidateSet merge_adjacent(const CandidateSet& candidates, const SuperpixelLabels& labels) {
  if (candidates.regions.size() <= 1) return candidates;

  // Map label -> position in the candidate list.
  std::map<std::int32_t, int> pos;
  for (int i = 0; i < static_cast<int>(candidates.regions.size()); ++i)
    pos.emplace(candidates.regions[i].id, i);

  const int n = static_cast<int>(candidates.regions.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };
  auto unite = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);  // keep the smaller list position as root
    parent[b] = a;
  };

  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const std::int32_t a = labels.at(x, y);
      const auto ia = pos.find(a);
      if (ia == pos.end()) continue;
      if (x + 1 < labels.width) {
        const std::int32_t b = labels.at(x + 1, y);
        if (b != a) {
          const auto ib = pos.find(b);
          if (ib != pos.end()) unite(ia->second, ib->second);
        }
      }
      if (y + 1 < labels.height) {
        const std::int32_t b = labels.at(x, y + 1);
        if (b != a) {
          const auto ib = pos.find(b);
          if (ib != pos.end()) unite(ia->second, ib->second);
        }
      }
    }
  }

  // Gather groups in root order; area-weighted statistics.
  std::map<int, Region> merged;
  for (int i = 0; i < n; ++i) {
    const Region& r = candidates.regions[i];
    const int root = find(i);
    auto it = merged.find(root);
    if (it == merged.end()) {
      merged.emplace(root, r);
      continue;
    }
    Region& m = it->second;
    const double wa = static_cast<double>(m.area);
    const double wb = static_cast<double>(r.area);
    m.centroid_x = (m.centroid_x * wa + r.centroid_x * wb) / (wa + wb);
    m.centroid_y = (m.centroid_y * wa + r.centroid_y * wb) / (wa + wb);
    m.mean_hue = (m.mean_hue * wa + r.mean_hue * wb) / (wa + wb);
    m.mean_gray = (m.mean_gray * wa + r.mean_gray * wb) / (wa + wb);
    m.area += r.area;
    m.pixels.insert(m.pixels.end(), r.pixels.begin(), r.pixels.end());
    m.id = std::min(m.id, r.id);
  }

  CandidateSet out;
  out.frame_index = candidates.frame_index;
  out.marker_index = candidates.marker_index;
  out.tier = candidates.tier;
  for (auto& [root, region] : merged) out.regions.push_back(std::move(region));
  std::sort(out.regions.begin(), out.regions.end(),
            [](const Region& a, const Region& b) { return a.id < b.id; });
  return out;
}

std::string candidates_to_csv(const CandidateSet& candidates) {
  std::ostringstream out;
  out << "frame,marker,region,centroid_x,centroid_y,area,mean_hue,tier\n";
  char buf[160];
  for (const Region& r : candidates.regions) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.4f,%.4f,%d,%.4f,%s\n",
                  candidates.frame_index, candidates.marker_index, r.id, r.centroid_x,
                  r.centroid_y, r.area, r.mean_hue, to_string(candidates.tier).c_str());
    out << buf;
  }
  return out.str();
}

}  // namespace mtrack
