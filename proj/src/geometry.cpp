#include "newsdig/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace newsdig {

double intersection_area(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  const double h = std::min(a.y1, b.y1) - std::max(a.y0, b.y0);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = intersection_area(a, b);
  if (inter <= 0.0) return 0.0;
  const double uni = a.area() + b.area() - inter;
  return inter / uni;
}

namespace {

// Greedy suppression; returns surviving indices in pick order (score desc).
std::vector<std::size_t> suppress(const std::vector<Detection>& dets,
                                  double iou_thresh, bool class_aware) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::tie(dets[b].score, dets[a].box.y0,
                                     dets[a].box.x0, a) <
                            std::tie(dets[a].score, dets[b].box.y0,
                                     dets[b].box.x0, b);
                   });
  std::vector<bool> dead(dets.size(), false);
  std::vector<std::size_t> picks;
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t i = order[oi];
    if (dead[i]) continue;
    picks.push_back(i);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t j = order[oj];
      if (dead[j]) continue;
      if (class_aware && dets[i].label != dets[j].label) continue;
      if (iou(dets[i].box, dets[j].box) > iou_thresh) dead[j] = true;
    }
  }
  return picks;
}

}  // namespace

std::vector<Detection> nms(const std::vector<Detection>& dets,
                           double iou_thresh) {
  std::vector<Detection> out;
  for (std::size_t i : suppress(dets, iou_thresh, true)) out.push_back(dets[i]);
  return out;
}

std::vector<std::size_t> nms_survivors(const std::vector<Detection>& dets,
                                       double iou_thresh) {
  std::vector<std::size_t> picks = suppress(dets, iou_thresh, true);
  std::sort(picks.begin(), picks.end());
  return picks;
}

namespace {

// Window starts along one axis: stride = size - overlap, final window shifted
// back so it ends exactly at `hi`.
std::vector<double> window_starts(double lo, double hi, double size,
                                  double overlap) {
  std::vector<double> starts;
  double pos = lo;
  while (true) {
    if (pos + size >= hi) {
      starts.push_back(hi - size);
      break;
    }
    starts.push_back(pos);
    pos += size - overlap;
  }
  return starts;
}

}  // namespace

std::vector<BoundingBox> split_tall_region(const BoundingBox& region,
                                           const GeometryConfig& cfg) {
  const double w = region.width();
  const double h = region.height();
  if (w <= 0.0 || h / w <= cfg.tall_ratio) return {region};
  const double win = w * cfg.tall_ratio;
  std::vector<BoundingBox> out;
  for (double top : window_starts(region.y0, region.y1, win,
                                  cfg.split_overlap_frac * win)) {
    out.push_back({region.x0, top, region.x1, top + win});
  }
  return out;
}

std::vector<BoundingBox> split_wide_line(const BoundingBox& line,
                                         const GeometryConfig& cfg) {
  const double w = line.width();
  const double h = line.height();
  if (h <= 0.0 || w / h <= cfg.wide_ratio) return {line};
  const double win = h * cfg.wide_ratio;
  std::vector<BoundingBox> out;
  for (double left : window_starts(line.x0, line.x1, win,
                                   cfg.split_overlap_frac * win)) {
    out.push_back({left, line.y0, left + win, line.y1});
  }
  return out;
}

std::vector<Detection> merge_split_lines(
    const std::vector<std::pair<BoundingBox, std::vector<Detection>>>& per_window,
    const GeometryConfig& cfg) {
  std::vector<Detection> all;
  for (const auto& [window, dets] : per_window) {
    for (Detection d : dets) {
      d.box = d.box.translated(window.x0, window.y0);
      all.push_back(std::move(d));
    }
  }
  std::vector<Detection> merged;
  for (std::size_t i : suppress(all, cfg.nms_iou, false))
    merged.push_back(all[i]);
  std::sort(merged.begin(), merged.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.box.y0, a.box.x0) < std::tie(b.box.y0, b.box.x0);
  });
  return merged;
}

namespace {

struct FlatPred {
  std::size_t scan = 0;
  BoundingBox box;
  double score = 0.0;
};

struct FlatGt {
  std::size_t scan = 0;
  BoundingBox box;
};

// AP with 101-point interpolation over one class at one IoU threshold.
double ap_for_class(const std::vector<FlatPred>& preds,
                    const std::vector<FlatGt>& gts, double thresh) {
  if (gts.empty()) return 0.0;
  std::vector<bool> taken(gts.size(), false);
  std::vector<char> is_tp(preds.size(), 0);
  for (std::size_t pi = 0; pi < preds.size(); ++pi) {
    double best = -1.0;
    std::size_t best_gt = gts.size();
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
      if (taken[gi] || gts[gi].scan != preds[pi].scan) continue;
      const double v = iou(preds[pi].box, gts[gi].box);
      if (v >= thresh && v > best) {
        best = v;
        best_gt = gi;
      }
    }
    if (best_gt != gts.size()) {
      taken[best_gt] = true;
      is_tp[pi] = 1;
    }
  }
  // Precision/recall curve in prediction order (already score-descending).
  std::vector<double> precision(preds.size()), recall(preds.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    tp += is_tp[i];
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(gts.size());
  }
  // 101 recall checkpoints; at each, the best precision achievable at or
  // beyond that recall.
  double ap = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double target = r / 100.0;
    double best_p = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      if (recall[i] >= target) best_p = std::max(best_p, precision[i]);
    }
    ap += best_p;
  }
  return ap / 101.0;
}

}  // namespace

double average_precision(
    const std::map<std::string, std::vector<Detection>>& preds,
    const std::map<std::string, std::vector<GroundTruth>>& gts,
    const std::string& label, double iou_thresh) {
  std::vector<std::string> scan_ids;
  for (const auto& [scan_id, boxes] : gts) scan_ids.push_back(scan_id);
  for (const auto& [scan_id, boxes] : preds) {
    if (!gts.count(scan_id))
      throw std::invalid_argument("predictions for unknown scan: " + scan_id);
  }

  std::vector<FlatPred> fp;
  std::vector<FlatGt> fg;
  for (std::size_t si = 0; si < scan_ids.size(); ++si) {
    if (auto it = preds.find(scan_ids[si]); it != preds.end()) {
      for (const Detection& d : it->second)
        if (d.label == label) fp.push_back({si, d.box, d.score});
    }
    for (const GroundTruth& g : gts.at(scan_ids[si]))
      if (g.label == label) fg.push_back({si, g.box});
  }
  std::stable_sort(fp.begin(), fp.end(), [](const FlatPred& a, const FlatPred& b) {
    return std::tie(b.score, a.scan, a.box.y0, a.box.x0) <
           std::tie(a.score, b.scan, b.box.y0, b.box.x0);
  });
  return ap_for_class(fp, fg, iou_thresh);
}

double mean_average_precision(
    const std::map<std::string, std::vector<Detection>>& preds,
    const std::map<std::string, std::vector<GroundTruth>>& gts) {
  std::set<std::string> labels;
  for (const auto& [scan_id, boxes] : gts)
    for (const GroundTruth& g : boxes) labels.insert(g.label);
  if (labels.empty()) throw std::invalid_argument("no ground-truth boxes");

  double sum = 0.0;
  std::size_t n = 0;
  for (const std::string& label : labels) {
    for (int t = 50; t <= 95; t += 5) {
      sum += average_precision(preds, gts, label, t / 100.0);
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace newsdig
