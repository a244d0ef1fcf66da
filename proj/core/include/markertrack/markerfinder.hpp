#pragma once

#include <string>
#include <vector>

#include "markertrack/image.hpp"
#include "markertrack/slic.hpp"

namespace mtrack {

/// A connected candidate blob with summary statistics.
struct Region {
  int id = 0;
  std::vector<std::pair<int, int>> pixels;  // (x, y)
  double centroid_x = 0, centroid_y = 0;
  int area = 0;
  double mean_hue = 0;
  double mean_gray = 0;
};

enum class CandidateTier { kStrict5Pct, kRelaxed10Pct, kEmpty };

std::string to_string(CandidateTier tier);

struct CandidateSet {
  int frame_index = 0;
  int marker_index = 0;
  CandidateTier tier = CandidateTier::kEmpty;
  std::vector<Region> regions;
};

struct MarkerFinderParams {
  double strict_tol = 0.05;
  double relaxed_tol = 0.10;
};

/// One region per superpixel label. Region ids equal label values.
std::vector<Region> extract_regions(const SuperpixelLabels& labels, const HsvFrame& hsv,
                                    const GrayFrame& gray);

/// 4-connected foreground components, ids in raster discovery order.
std::vector<Region> extract_regions(const BinaryMask& mask, const HsvFrame& hsv,
                                    const GrayFrame& gray);

/// Two-tier hue filter: keep regions with |mean_hue - prev_hue| within
/// strict_tol * prev_hue; only if that tier is empty, retry with
/// relaxed_tol; an empty result is a valid outcome signaling possible
/// marker loss.
CandidateSet marker_finder(const std::vector<Region>& regions, double prev_hue,
                           int frame_index, int marker_index,
                           const MarkerFinderParams& params = {});

/// Unions candidate superpixels that share a 4-connected border. Merged
/// statistics are area-weighted; the merged id is the smallest constituent
/// id. Only meaningful for candidates drawn from the given labeling.
CandidateSet merge_adjacent(const CandidateSet& candidates, const SuperpixelLabels& labels);

/// Debug dump: frame, marker, region id, centroid, area, mean_hue, tier.
std::string candidates_to_csv(const CandidateSet& candidates);

}  // namespace mtrack
