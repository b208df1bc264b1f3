#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "newsdig/domain.hpp"

namespace newsdig {

struct GeometryConfig {
  double tall_ratio = 2.0;    // split regions when height/width strictly exceeds
  double wide_ratio = 30.0;   // split lines when width/height strictly exceeds
  double split_overlap_frac = 0.10;  // window overlap, fraction of window size
  double nms_iou = 0.2;
  double conf_threshold = 0.1;
  std::size_t max_detections = 500;
};

struct Detection {
  BoundingBox box;
  std::string label;
  double score = 0.0;

  bool operator==(const Detection&) const = default;
};

double intersection_area(const BoundingBox& a, const BoundingBox& b);
double iou(const BoundingBox& a, const BoundingBox& b);

// Greedy per-label NMS. Survivors come back sorted by descending score; ties
// break on (y0, x0, input index).
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_thresh);

// Same suppression, but reports surviving input indices in ascending order so
// callers can keep the detector's own ordering.
std::vector<std::size_t> nms_survivors(const std::vector<Detection>& dets,
                                       double iou_thresh);

// Windows covering a tall region, top to bottom, each width·tall_ratio high
// with the final window shifted up to fit. Returns {region} when
// height/width <= tall_ratio.
std::vector<BoundingBox> split_tall_region(const BoundingBox& region,
                                           const GeometryConfig& cfg);

// Horizontal counterpart for wide lines.
std::vector<BoundingBox> split_wide_line(const BoundingBox& line,
                                         const GeometryConfig& cfg);

// Collapses duplicates across overlapping windows: detections arrive in
// window-local coordinates, are translated into the parent frame, suppressed
// jointly (one class, cfg.nms_iou), and sorted by (y0, x0).
std::vector<Detection> merge_split_lines(
    const std::vector<std::pair<BoundingBox, std::vector<Detection>>>& per_window,
    const GeometryConfig& cfg);

struct GroundTruth {
  BoundingBox box;
  std::string label;
};

// mAP averaged over IoU thresholds 0.50:0.05:0.95 with 101-point
// interpolation, then over the classes present in the ground truth.
// Keys of both maps are scan ids; every prediction key must exist in gts.
double mean_average_precision(
    const std::map<std::string, std::vector<Detection>>& preds,
    const std::map<std::string, std::vector<GroundTruth>>& gts);

// Single-class AP at one IoU threshold, exposed for diagnostics.
double average_precision(
    const std::map<std::string, std::vector<Detection>>& preds,
    const std::map<std::string, std::vector<GroundTruth>>& gts,
    const std::string& label, double iou_thresh);

}  // namespace newsdig
