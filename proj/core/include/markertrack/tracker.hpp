#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "markertrack/huethresh.hpp"
#include "markertrack/image.hpp"
#include "markertrack/markerfinder.hpp"
#include "markertrack/slic.hpp"

namespace mtrack {

enum class SegMethod { kSlic, kHue };

SegMethod seg_method_from_string(const std::string& s);
std::string to_string(SegMethod m);

/// Per-marker tracker memory carried from frame to frame.
struct TrackState {
  int marker_index = 0;
  double x = 0, y = 0;    // frame coordinates
  double vx = 0, vy = 0;  // pixels/frame
  double mean_hue = 0;
  double mean_gray = 0;
  int area = 0;
  int lost_streak = 0;
};

struct TrackRecord {
  int frame = 0;
  double x = 0, y = 0;
  int area = 0;
  double mean_hue = 0;
  bool found = false;
};

struct MarkerTrack {
  int marker_index = 0;
  std::vector<TrackRecord> records;
  bool flagged_lost = false;  // lost_streak exceeded the configured limit
};

/// Search window, shifted (never shrunk) to stay inside the frame; frames
/// smaller than the window use the whole frame.
struct RoiWindow {
  int x0 = 0, y0 = 0;
  int width = 0, height = 0;
  bool operator==(const RoiWindow&) const = default;
};

struct TrackerParams {
  int roi_size = 80;
  int lost_streak_limit = 25;  // 0.1 s at 250 fps
  double w_closest = 3, w_direction = 2, w_hue = 2, w_size = 1, w_gray = 1;
  bool full_frame_rescan = false;
  int init_target_count = 1500;  // full-frame SLIC count for first-frame seeding
  MarkerFinderParams finder;
};

RoiWindow crop_roi(int frame_width, int frame_height, double prev_x, double prev_y,
                   int roi_size = 80);

/// Superpixel sizing from the previous marker area: the full-frame count is
/// frame pixels / prev_area, and the ROI count keeps superpixels at half the
/// marker size so a marker spans about two of them. A nonpositive area falls
/// back to the default 1500-per-full-frame density.
struct SlicSize {
  double full_frame = 0;  // logged per frame
  int roi_target = 0;
};

SlicSize update_slic_size(double prev_area, int frame_width, int frame_height,
                          int roi_width, int roi_height);

/// Seeds one TrackState per marker from the region containing its click.
/// Throws InitError for a click outside all regions or two clicks landing
/// in one region.
std::vector<TrackState> init_tracks(const std::vector<Region>& first_frame_regions,
                                    const std::vector<std::pair<double, double>>& clicks,
                                    int n_markers);

struct ScoredRegion {
  Region region;
  double weight = 0;
  double centroid_distance = 0;  // to the previous position
};

/// Five-cue weights: +3 closest centroid, +2 every region moving in the
/// previous direction (vacuously all when velocity is zero), +2 closest
/// hue, +1 closest size, +1 closest gray. Minimum-based bonuses go to
/// exactly one region; ties break by centroid distance then region id.
std::vector<ScoredRegion> score_candidates(const CandidateSet& candidates,
                                           const TrackState& state,
                                           const TrackerParams& params);

/// Maximum-weight region becomes the new tracked marker; ties break by
/// centroid distance then region id.
TrackState select_track(const std::vector<ScoredRegion>& scored, const TrackState& state,
                        int frame_index);

/// One tracking step debug output (size-function log, ROI, selection).
struct StepDebug {
  RoiWindow roi;
  double sslicf = 0;
  int roi_target = 0;
  CandidateTier tier = CandidateTier::kEmpty;
  bool found = false;
  Region selected;  // pixels in frame coordinates, valid when found
};

/// Crop ROI, segment with the chosen method, filter by hue tiers, merge
/// adjacent superpixel candidates, score, select. An empty candidate set
/// holds position and velocity and increments lost_streak.
TrackState track_step(const RgbFrame& frame, const HsvFrame& hsv, const GrayFrame& gray,
                      const TrackState& state, SegMethod method,
                      const SlicParams& slic_base, const HueThreshParams& hue_params,
                      const TrackerParams& params, int frame_index,
                      StepDebug* debug = nullptr);

struct SizeLogRow {
  int frame = 0;
  int marker = 0;
  double prev_area = 0;
  double sslicf = 0;
  int roi_target = 0;
};

/// Predicted marker mask for one frame: the selected region inside its ROI.
struct PredictedMask {
  int frame = 0;
  int marker = 0;
  bool found = false;
  RoiWindow window;
  BinaryMask mask;  // ROI-sized
};

struct TrialResult {
  std::vector<MarkerTrack> tracks;       // one per marker
  std::vector<PredictedMask> masks;      // frame-major, marker-minor
  std::vector<SizeLogRow> size_log;      // slic method only
};

using FrameProvider = std::function<RgbFrame(int)>;

/// Tracks all markers over a frame sequence. Frame 0 is segmented with the
/// chosen method (full frame) and seeded from the click coordinates; frames
/// 1..n-1 run track_step. Markers may be processed on `jobs` threads; the
/// output order is deterministic either way.
TrialResult track_sequence(const FrameProvider& frames, int n_frames,
                           const std::vector<std::pair<double, double>>& clicks,
                           int n_markers, SegMethod method, const SlicParams& slic_base,
                           const HueThreshParams& hue_params, const TrackerParams& params,
                           int jobs = 1);

std::string tracks_to_csv(const std::vector<MarkerTrack>& tracks);
std::vector<MarkerTrack> tracks_from_csv(const std::string& text);

std::string size_log_to_csv(const std::vector<SizeLogRow>& rows);
std::vector<SizeLogRow> size_log_from_csv(const std::string& text);

std::string masks_to_rle(const std::vector<PredictedMask>& masks);
std::vector<PredictedMask> masks_from_rle(const std::string& text);

}  // namespace mtrack
