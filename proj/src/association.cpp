#include "newsdig/association.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace newsdig {

bool x_intervals_overlap(const BoundingBox& a, const BoundingBox& b,
                         double page_width, const AssociationConfig& cfg) {
  const double shared = std::min(a.x1, b.x1) - std::max(a.x0, b.x0);
  return shared > cfg.x_overlap_frac * page_width;
}

bool vertically_adjacent(const BoundingBox& upper, const BoundingBox& lower,
                         double page_height, const AssociationConfig& cfg) {
  const double gap = lower.y0 - upper.y1;  // positive: upper sits above
  return gap >= -cfg.max_below_frac * page_height &&
         gap <= cfg.max_above_frac * page_height;
}

namespace {

struct RegionRef {
  const ContentRegion* region = nullptr;
  bool operator<(const RegionRef& other) const {
    return std::tie(region->box.y0, region->box.x0, region->id) <
           std::tie(other.region->box.y0, other.region->box.x0, other.region->id);
  }
};

// Smallest (y0, x0) article satisfying both predicates, or nullptr.
const ContentRegion* pick_article(const BoundingBox& upper,
                                  const std::vector<RegionRef>& articles,
                                  double page_w, double page_h,
                                  const AssociationConfig& cfg) {
  for (const RegionRef& a : articles) {
    if (x_intervals_overlap(upper, a.region->box, page_w, cfg) &&
        vertically_adjacent(upper, a.region->box, page_h, cfg)) {
      return a.region;
    }
  }
  return nullptr;
}

}  // namespace

AssociationResult associate_regions(const PageScan& scan,
                                    const AssociationConfig& cfg) {
  const double page_w = static_cast<double>(scan.width_px);
  const double page_h = static_cast<double>(scan.height_px);

  std::vector<RegionRef> articles, headlines, bylines;
  for (const ContentRegion& r : scan.regions) {
    if (!r.text.has_value()) continue;
    if (r.cls == ContentClass::article) articles.push_back({&r});
    else if (r.cls == ContentClass::headline) headlines.push_back({&r});
    else if (r.cls == ContentClass::byline) bylines.push_back({&r});
  }
  std::sort(articles.begin(), articles.end());
  std::sort(headlines.begin(), headlines.end());
  std::sort(bylines.begin(), bylines.end());

  AssociationResult result;
  std::map<const ContentRegion*, std::vector<const ContentRegion*>> heads_of,
      lines_of;

  for (const RegionRef& h : headlines) {
    const ContentRegion* a =
        pick_article(h.region->box, articles, page_w, page_h, cfg);
    if (a) {
      heads_of[a].push_back(h.region);
      result.headline_links.push_back({h.region->id, a->id});
    } else {
      result.unmatched_headlines.push_back(h.region->id);
    }
  }
  for (const RegionRef& b : bylines) {
    const ContentRegion* a =
        pick_article(b.region->box, articles, page_w, page_h, cfg);
    if (a) {
      lines_of[a].push_back(b.region);
      result.byline_links.push_back({b.region->id, a->id});
    } else {
      result.unmatched_bylines.push_back(b.region->id);
    }
  }

  for (const RegionRef& a : articles) {
    ArticleRecord rec;
    rec.scan_id = scan.scan_id;
    rec.lccn = scan.lccn;
    rec.date = scan.date;
    rec.edition = scan.edition;
    rec.page_number = scan.page_number;
    rec.article_text = *a.region->text;

    if (auto it = heads_of.find(a.region); it != heads_of.end()) {
      std::string joined;
      for (const ContentRegion* h : it->second) {
        if (!joined.empty()) joined += ' ';
        joined += *h->text;
        rec.source_region_ids.push_back(h->id);
      }
      rec.headline = std::move(joined);
    }
    if (auto it = lines_of.find(a.region); it != lines_of.end()) {
      std::string joined;
      for (const ContentRegion* b : it->second) {
        if (!joined.empty()) joined += ' ';
        joined += *b->text;
        rec.source_region_ids.push_back(b->id);
      }
      rec.byline = std::move(joined);
    }
    rec.source_region_ids.push_back(a.region->id);
    result.articles.push_back(std::move(rec));
  }
  return result;
}

double association_f1(
    const std::set<std::pair<std::string, std::string>>& predicted,
    const std::set<std::pair<std::string, std::string>>& gold) {
  std::size_t inter = 0;
  for (const auto& p : predicted) inter += gold.count(p);

  const double precision =
      predicted.empty() ? 1.0
                        : static_cast<double>(inter) /
                              static_cast<double>(predicted.size());
  const double recall =
      gold.empty() ? 1.0
                   : static_cast<double>(inter) /
                         static_cast<double>(gold.size());
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace newsdig
