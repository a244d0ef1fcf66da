#include "markertrack/slic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "markertrack/errors.hpp"

namespace mtrack {

namespace {

inline double sq(double v) { return v * v; }

// Forward-difference RGB gradient magnitude; differences vanish at the
// far borders where the forward neighbor clamps onto the pixel itself.
double gradient_magnitude(const RgbFrame& f, int x, int y) {
  const Rgb8& c = f.at(x, y);
  const Rgb8& xr = f.at_clamped(x + 1, y);
  const Rgb8& yd = f.at_clamped(x, y + 1);
  double gx = sq(static_cast<double>(xr.r) - c.r) + sq(static_cast<double>(xr.g) - c.g) +
              sq(static_cast<double>(xr.b) - c.b);
  double gy = sq(static_cast<double>(yd.r) - c.r) + sq(static_cast<double>(yd.g) - c.g) +
              sq(static_cast<double>(yd.b) - c.b);
  return std::sqrt(gx + gy);
}

}  // namespace

double slic_grid_interval(int width, int height, int target_count) {
  return std::sqrt(static_cast<double>(width) * height / target_count);
}

std::vector<ClusterCenter> init_centers(const RgbFrame& frame, const SlicParams& params) {
  const std::int64_t pixels = frame.pixel_count();
  if (params.target_count < 1 || params.target_count > pixels)
    throw ParameterError("SLIC target_count must be in [1, pixel count]");

  const double s = slic_grid_interval(frame.width(), frame.height(), params.target_count);
  std::vector<ClusterCenter> centers;
  for (int iy = 0;; ++iy) {
    const double cy = s / 2.0 + iy * s;
    if (cy >= frame.height()) break;
    for (int ix = 0;; ++ix) {
      const double cx = s / 2.0 + ix * s;
      if (cx >= frame.width()) break;
      const int px = std::clamp(static_cast<int>(std::lround(cx)), 0, frame.width() - 1);
      const int py = std::clamp(static_cast<int>(std::lround(cy)), 0, frame.height() - 1);
      const Rgb8& p = frame.at(px, py);
      centers.push_back(ClusterCenter{cx, cy, static_cast<double>(p.r),
                                      static_cast<double>(p.g), static_cast<double>(p.b)});
    }
  }
  return centers;
}

std::vector<ClusterCenter> perturb_to_min_gradient(const RgbFrame& frame,
                                                   std::vector<ClusterCenter> centers) {
  for (ClusterCenter& c : centers) {
    const int bx = std::clamp(static_cast<int>(std::lround(c.x)), 0, frame.width() - 1);
    const int by = std::clamp(static_cast<int>(std::lround(c.y)), 0, frame.height() - 1);
    double best = std::numeric_limits<double>::infinity();
    int best_x = bx, best_y = by;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int nx = bx + dx, ny = by + dy;
        if (!frame.in_bounds(nx, ny)) continue;
        const double g = gradient_magnitude(frame, nx, ny);
        if (g < best) {  // strict: first (y, x) in scan order wins ties
          best = g;
          best_x = nx;
          best_y = ny;
        }
      }
    }
    const Rgb8& p = frame.at(best_x, best_y);
    c = ClusterCenter{static_cast<double>(best_x), static_cast<double>(best_y),
                      static_cast<double>(p.r), static_cast<double>(p.g),
                      static_cast<double>(p.b)};
  }
  return centers;
}

double distance_5d(double px, double py, double pr, double pg, double pb,
                   const ClusterCenter& center, double nc, double np) {
  if (nc <= 0.0 || np <= 0.0)
    throw ParameterError("distance_5d normalizers must be positive");
  const double dc = std::sqrt(sq(pr - center.r) + sq(pg - center.g) + sq(pb - center.b));
  const double dp = std::sqrt(sq(px - center.x) + sq(py - center.y));
  return std::sqrt(sq(dc / nc) + sq(dp / np));
}

AssignResult assign_and_update(const RgbFrame& frame, std::vector<ClusterCenter> centers,
                               const SlicParams& params) {
  const int w = frame.width(), h = frame.height();
  const double s = slic_grid_interval(w, h, params.target_count);
  const double nc = params.compactness;
  const double np = s;
  const int k = static_cast<int>(centers.size());

  std::vector<std::int32_t> labels(static_cast<std::size_t>(w) * h, -1);
  std::vector<double> dist(static_cast<std::size_t>(w) * h, 0.0);
  std::vector<double> objectives;

  auto assign = [&]() {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    std::fill(labels.begin(), labels.end(), -1);
    const double reach = 2.0 * s;
    for (int ci = 0; ci < k; ++ci) {
      const ClusterCenter& c = centers[ci];
      const int x0 = std::max(0, static_cast<int>(std::ceil(c.x - reach)));
      const int x1 = std::min(w - 1, static_cast<int>(std::floor(c.x + reach)));
      const int y0 = std::max(0, static_cast<int>(std::ceil(c.y - reach)));
      const int y1 = std::min(h - 1, static_cast<int>(std::floor(c.y + reach)));
      for (int y = y0; y <= y1; ++y) {
        const double dy2 = sq((static_cast<double>(y) - c.y) / np);
        for (int x = x0; x <= x1; ++x) {
          const Rgb8& p = frame.at(x, y);
          const double dc2 = (sq(p.r - c.r) + sq(p.g - c.g) + sq(p.b - c.b)) / (nc * nc);
          const double dp2 = dy2 + sq((static_cast<double>(x) - c.x) / np);
          const double d = std::sqrt(dc2 + dp2);
          const std::size_t idx = static_cast<std::size_t>(y) * w + x;
          if (d < dist[idx]) {  // strict: lowest cluster index wins ties
            dist[idx] = d;
            labels[idx] = ci;
          }
        }
      }
    }
    // A pixel outside every window falls back to its spatially nearest center.
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        if (labels[idx] >= 0) continue;
        double best = std::numeric_limits<double>::infinity();
        for (int ci = 0; ci < k; ++ci) {
          const double d = sq(x - centers[ci].x) + sq(y - centers[ci].y);
          if (d < best) {
            best = d;
            labels[idx] = ci;
          }
        }
        const ClusterCenter& c = centers[labels[idx]];
        const Rgb8& p = frame.at(x, y);
        dist[idx] = distance_5d(x, y, p.r, p.g, p.b, c, nc, np);
      }
    }
    objectives.push_back(std::accumulate(dist.begin(), dist.end(), 0.0));
  };

  // Recompute centers as member means; reseed empties at the worst-covered
  // pixel. Returns total L1 motion over all 5 coordinates.
  std::vector<double> sums(static_cast<std::size_t>(k) * 5);
  std::vector<std::int64_t> counts(k);
  auto update = [&]() -> double {
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        const int ci = labels[idx];
        const Rgb8& p = frame.at(x, y);
        double* acc = &sums[static_cast<std::size_t>(ci) * 5];
        acc[0] += x;
        acc[1] += y;
        acc[2] += p.r;
        acc[3] += p.g;
        acc[4] += p.b;
        counts[ci] += 1;
      }
    }
    double motion = 0.0;
    std::vector<std::size_t> taken;  // pixels consumed by reseeds this pass
    for (int ci = 0; ci < k; ++ci) {
      ClusterCenter next;
      if (counts[ci] > 0) {
        const double* acc = &sums[static_cast<std::size_t>(ci) * 5];
        const double n = static_cast<double>(counts[ci]);
        next = ClusterCenter{acc[0] / n, acc[1] / n, acc[2] / n, acc[3] / n, acc[4] / n};
      } else {
        std::size_t worst = 0;
        double worst_d = -1.0;
        for (std::size_t idx = 0; idx < dist.size(); ++idx) {
          if (dist[idx] > worst_d &&
              std::find(taken.begin(), taken.end(), idx) == taken.end()) {
            worst_d = dist[idx];
            worst = idx;
          }
        }
        taken.push_back(worst);
        const int x = static_cast<int>(worst % w);
        const int y = static_cast<int>(worst / w);
        const Rgb8& p = frame.at(x, y);
        next = ClusterCenter{static_cast<double>(x), static_cast<double>(y),
                             static_cast<double>(p.r), static_cast<double>(p.g),
                             static_cast<double>(p.b)};
      }
      motion += std::abs(next.x - centers[ci].x) + std::abs(next.y - centers[ci].y) +
                std::abs(next.r - centers[ci].r) + std::abs(next.g - centers[ci].g) +
                std::abs(next.b - centers[ci].b);
      centers[ci] = next;
    }
    return motion;
  };

  assign();
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    const double motion = update();
    assign();
    if (motion < params.convergence_epsilon) break;
  }

  AssignResult result;
  result.labels = SuperpixelLabels{w, h, std::move(labels), k};
  result.centers = std::move(centers);
  result.iteration_objectives = std::move(objectives);
  return result;
}

SuperpixelLabels enforce_connectivity(const SuperpixelLabels& in, double min_fragment_size) {
  const int w = in.width, h = in.height;
  const std::size_t n = static_cast<std::size_t>(w) * h;

  // 1. Split into 4-connected components, ids in raster discovery order.
  std::vector<std::int32_t> comp(n, -1);
  std::vector<std::int64_t> comp_size;
  std::deque<std::size_t> queue;
  for (std::size_t start = 0; start < n; ++start) {
    if (comp[start] >= 0) continue;
    const std::int32_t id = static_cast<std::int32_t>(comp_size.size());
    const std::int32_t label = in.labels[start];
    comp[start] = id;
    comp_size.push_back(0);
    queue.push_back(start);
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      comp_size[id] += 1;
      const int x = static_cast<int>(idx % w);
      const int y = static_cast<int>(idx / w);
      const int nx4[4] = {x - 1, x + 1, x, x};
      const int ny4[4] = {y, y, y - 1, y + 1};
      for (int i = 0; i < 4; ++i) {
        if (nx4[i] < 0 || nx4[i] >= w || ny4[i] < 0 || ny4[i] >= h) continue;
        const std::size_t nidx = static_cast<std::size_t>(ny4[i]) * w + nx4[i];
        if (comp[nidx] < 0 && in.labels[nidx] == label) {
          comp[nidx] = id;
          queue.push_back(nidx);
        }
      }
    }
  }
  const int ncomp = static_cast<int>(comp_size.size());

  // 2. Union-find merge of undersized components into their largest
  //    current neighbor; repeat until stable.
  std::vector<std::int32_t> parent(ncomp);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::int32_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    // Root adjacency and sizes from the current merge state.
    std::vector<std::vector<std::int32_t>> adj(ncomp);
    auto add_adj = [&](std::int32_t a, std::int32_t b) {
      if (a == b) return;
      auto& va = adj[a];
      if (std::find(va.begin(), va.end(), b) == va.end()) va.push_back(b);
    };
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * w + x;
        const std::int32_t a = find(comp[idx]);
        if (x + 1 < w) {
          const std::int32_t b = find(comp[idx + 1]);
          add_adj(a, b);
          add_adj(b, a);
        }
        if (y + 1 < h) {
          const std::int32_t b = find(comp[idx + w]);
          add_adj(a, b);
          add_adj(b, a);
        }
      }
    }
    std::vector<std::int64_t> root_size(ncomp, 0);
    for (int c = 0; c < ncomp; ++c) root_size[find(c)] += comp_size[c];

    for (int c = 0; c < ncomp; ++c) {
      const std::int32_t root = find(c);
      if (root != c) continue;  // only roots act
      if (static_cast<double>(root_size[root]) >= min_fragment_size) continue;
      // Largest adjacent root; ties toward the smaller root id.
      std::int32_t best = -1;
      std::int64_t best_size = -1;
      for (std::int32_t nb : adj[root]) {
        const std::int32_t nroot = find(nb);
        if (nroot == root) continue;
        if (root_size[nroot] > best_size ||
            (root_size[nroot] == best_size && nroot < best)) {
          best = nroot;
          best_size = root_size[nroot];
        }
      }
      if (best < 0) continue;  // no neighbor (single-region image)
      parent[root] = best;
      root_size[best] += root_size[root];
      changed = true;
    }
  }

  // 3. Contiguous output labels in raster order of first occurrence.
  std::vector<std::int32_t> remap(ncomp, -1);
  SuperpixelLabels out;
  out.width = w;
  out.height = h;
  out.labels.resize(n);
  std::int32_t next_label = 0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const std::int32_t root = find(comp[idx]);
    if (remap[root] < 0) remap[root] = next_label++;
    out.labels[idx] = remap[root];
  }
  out.num_labels = next_label;
  return out;
}

SlicResult slic_segment(const RgbFrame& frame, const SlicParams& params) {
  const double s = slic_grid_interval(frame.width(), frame.height(), params.target_count);
  std::vector<ClusterCenter> centers = init_centers(frame, params);
  centers = perturb_to_min_gradient(frame, std::move(centers));
  AssignResult assigned = assign_and_update(frame, std::move(centers), params);
  SuperpixelLabels labels = enforce_connectivity(assigned.labels, s * s / 4.0);

  // Final centers are the 5D means of the connected regions.
  std::vector<double> sums(static_cast<std::size_t>(labels.num_labels) * 5, 0.0);
  std::vector<std::int64_t> counts(labels.num_labels, 0);
  for (int y = 0; y < labels.height; ++y) {
    for (int x = 0; x < labels.width; ++x) {
      const std::int32_t l = labels.at(x, y);
      const Rgb8& p = frame.at(x, y);
      double* acc = &sums[static_cast<std::size_t>(l) * 5];
      acc[0] += x;
      acc[1] += y;
      acc[2] += p.r;
      acc[3] += p.g;
      acc[4] += p.b;
      counts[l] += 1;
    }
  }
  std::vector<ClusterCenter> final_centers(labels.num_labels);
  for (int l = 0; l < labels.num_labels; ++l) {
    const double* acc = &sums[static_cast<std::size_t>(l) * 5];
    const double npx = static_cast<double>(counts[l]);
    final_centers[l] = ClusterCenter{acc[0] / npx, acc[1] / npx, acc[2] / npx,
                                     acc[3] / npx, acc[4] / npx};
  }

  SlicResult result;
  result.labels = std::move(labels);
  result.centers = std::move(final_centers);
  result.iteration_objectives = std::move(assigned.iteration_objectives);
  result.grid_interval = s;
  return result;
}

Image<std::uint16_t> labels_to_image16(const SuperpixelLabels& labels) {
  Image<std::uint16_t> img(labels.width, labels.height);
  for (int y = 0; y < labels.height; ++y)
    for (int x = 0; x < labels.width; ++x)
      img.at(x, y) = static_cast<std::uint16_t>(labels.at(x, y));
  return img;
}

std::string labels_to_rle(const SuperpixelLabels& labels) {
  std::ostringstream out;
  for (int y = 0; y < labels.height; ++y) {
    std::int32_t run_label = labels.at(0, y);
    int run_len = 1;
    bool first = true;
    for (int x = 1; x <= labels.width; ++x) {
      if (x < labels.width && labels.at(x, y) == run_label) {
        ++run_len;
        continue;
      }
      if (!first) out << ' ';
      out << run_label << ':' << run_len;
      first = false;
      if (x < labels.width) {
        run_label = labels.at(x, y);
        run_len = 1;
      }
    }
    out << '\n';
  }
  return out.str();
}

SuperpixelLabels labels_from_rle(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::vector<std::int32_t>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::int32_t> row;
    std::istringstream ls(line);
    std::string token;
    while (ls >> token) {
      const auto colon = token.find(':');
      if (colon == std::string::npos) throw ParameterError("bad RLE token: " + token);
      const std::int32_t label = std::stoi(token.substr(0, colon));
      const int len = std::stoi(token.substr(colon + 1));
      row.insert(row.end(), len, label);
    }
    rows.push_back(std::move(row));
  }
  SuperpixelLabels out;
  out.height = static_cast<int>(rows.size());
  out.width = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  std::int32_t max_label = -1;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != out.width)
      throw ParameterError("ragged RLE rows");
    for (std::int32_t l : row) max_label = std::max(max_label, l);
    out.labels.insert(out.labels.end(), row.begin(), row.end());
  }
  out.num_labels = max_label + 1;
  return out;
}

}  // namespace mtrack
