#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "markertrack/image.hpp"

namespace mtrack {

struct SlicParams {
  int target_count = 1500;          // requested number of cluster centers
  double compactness = 10.0;        // Nc, color normalizer
  int max_iterations = 10;
  double convergence_epsilon = 1.0; // total L1 center motion in 5D units
};

/// Cluster state in the joint (x, y, R, G, B) space.
struct ClusterCenter {
  double x = 0, y = 0;
  double r = 0, g = 0, b = 0;
};

/// Full labeling of a frame: one cluster index in [0, num_labels) per pixel.
struct SuperpixelLabels {
  int width = 0, height = 0;
  std::vector<std::int32_t> labels;
  int num_labels = 0;

  std::int32_t at(int x, int y) const {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
  std::int32_t& at(int x, int y) {
    return labels[static_cast<std::size_t>(y) * width + x];
  }
  bool operator==(const SuperpixelLabels&) const = default;
};

/// Grid interval S = sqrt(pixel count / target_count).
double slic_grid_interval(int width, int height, int target_count);

/// Seeds centers on a regular grid with interval S, offset S/2, colors
/// sampled from the frame. Throws ParameterError if target_count exceeds
/// the pixel count or is below 1.
std::vector<ClusterCenter> init_centers(const RgbFrame& frame, const SlicParams& params);

/// Moves each center to the lowest-gradient pixel in its 3x3 neighborhood
/// (forward-difference RGB gradient, L2 magnitude). Ties keep the
/// lexicographically smallest (y, x). Neighborhoods clip at frame borders.
std::vector<ClusterCenter> perturb_to_min_gradient(const RgbFrame& frame,
                                                   std::vector<ClusterCenter> centers);

/// 5D distance: sqrt((Dc/Nc)^2 + (Dp/Np)^2) with Dc the RGB Euclidean
/// distance and Dp the spatial Euclidean distance. Normalizers must be > 0.
double distance_5d(double px, double py, double pr, double pg, double pb,
                   const ClusterCenter& center, double nc, double np);

struct AssignResult {
  SuperpixelLabels labels;
  std::vector<ClusterCenter> centers;
  /// Sum over pixels of distance_5d to the assigned center, recorded after
  /// every assignment pass.
  std::vector<double> iteration_objectives;
};

/// Iterates {assign within a +/-2S window of each center; recompute centers
/// as member means} until total L1 center motion drops below
/// convergence_epsilon or max_iterations passes run. Always ends on an
/// assignment pass, so every pixel lies within 2S of its center in x and y.
/// Empty clusters are reseeded at the worst-covered pixel.
AssignResult assign_and_update(const RgbFrame& frame, std::vector<ClusterCenter> centers,
                               const SlicParams& params);

/// Splits disconnected label regions, then repeatedly merges any 4-connected
/// fragment smaller than min_fragment_size into its largest adjacent region.
/// Output labels are contiguous 0..K-1 in raster order of first occurrence.
SuperpixelLabels enforce_connectivity(const SuperpixelLabels& labels,
                                      double min_fragment_size);

struct SlicResult {
  SuperpixelLabels labels;
  /// Per-label 5D means recomputed over the final regions.
  std::vector<ClusterCenter> centers;
  std::vector<double> iteration_objectives;
  double grid_interval = 0;  // S
};

/// Grid seeding, gradient perturbation, windowed 5D k-means, connectivity
/// enforcement with min fragment size S^2/4.
SlicResult slic_segment(const RgbFrame& frame, const SlicParams& params);

Image<std::uint16_t> labels_to_image16(const SuperpixelLabels& labels);

/// Text form for fixtures: one line per row of `label:runlength` tokens.
std::string labels_to_rle(const SuperpixelLabels& labels);
SuperpixelLabels labels_from_rle(const std::string& text);

}  // namespace mtrack
