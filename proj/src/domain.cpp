#include "newsdig/domain.hpp"

#include <cmath>
#include <unordered_set>

namespace newsdig {

bool BoundingBox::valid() const {
  return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) &&
         std::isfinite(y1) && x0 >= 0.0 && y0 >= 0.0 && x1 > x0 && y1 > y0;
}

bool BoundingBox::contains(const BoundingBox& inner) const {
  return inner.x0 >= x0 && inner.y0 >= y0 && inner.x1 <= x1 && inner.y1 <= y1;
}

BoundingBox BoundingBox::translated(double dx, double dy) const {
  return {x0 + dx, y0 + dy, x1 + dx, y1 + dy};
}

BoundingBox BoundingBox::expanded(double dx, double dy) const {
  return {x0 - dx, y0 - dy, x1 + dx, y1 + dy};
}

const char* to_string(ContentClass cls) {
  switch (cls) {
    case ContentClass::article: return "article";
    case ContentClass::headline: return "headline";
    case ContentClass::caption: return "caption";
    case ContentClass::byline: return "byline";
    case ContentClass::image: return "image";
    case ContentClass::ad: return "ad";
    case ContentClass::table: return "table";
    case ContentClass::header: return "header";
    case ContentClass::page_number: return "page_number";
    case ContentClass::masthead: return "masthead";
  }
  return "article";
}

std::optional<ContentClass> content_class_from_string(std::string_view name) {
  for (ContentClass cls : kContentClasses) {
    if (name == to_string(cls)) return cls;
  }
  return std::nullopt;
}

bool is_text_class(ContentClass cls) {
  switch (cls) {
    case ContentClass::article:
    case ContentClass::headline:
    case ContentClass::caption:
    case ContentClass::byline:
      return true;
    default:
      return false;
  }
}

const char* to_string(LegibilityClass cls) {
  switch (cls) {
    case LegibilityClass::legible: return "legible";
    case LegibilityClass::borderline: return "borderline";
    case LegibilityClass::illegible: return "illegible";
  }
  return "legible";
}

std::optional<LegibilityClass> legibility_from_string(std::string_view name) {
  if (name == "legible") return LegibilityClass::legible;
  if (name == "borderline") return LegibilityClass::borderline;
  if (name == "illegible") return LegibilityClass::illegible;
  return std::nullopt;
}

std::vector<Violation> validate_scan(const PageScan& scan) {
  std::vector<Violation> out;
  if (scan.scan_id.empty())
    out.push_back({"scan_id", "", "scan_id is empty"});
  if (scan.width_px <= 0 || scan.height_px <= 0)
    out.push_back({"page_size", "", "page dimensions must be positive"});

  const BoundingBox page{0.0, 0.0, static_cast<double>(scan.width_px),
                         static_cast<double>(scan.height_px)};
  std::unordered_set<std::string> seen_ids;
  for (const ContentRegion& r : scan.regions) {
    if (r.id.empty()) {
      out.push_back({"region.id", r.id, "region id is empty"});
    } else if (!seen_ids.insert(r.id).second) {
      out.push_back({"region.id", r.id, "duplicate region id"});
    }
    if (!r.box.valid()) {
      out.push_back({"region.box", r.id, "degenerate or non-finite box"});
    } else if (page.valid() && !page.contains(r.box)) {
      out.push_back({"region.box", r.id, "box outside page bounds"});
    }
    if (r.confidence < 0.0 || r.confidence > 1.0) {
      out.push_back({"region.confidence", r.id, "confidence outside [0, 1]"});
    }
    if (r.legibility == LegibilityClass::illegible && r.text.has_value()) {
      out.push_back({"region.text", r.id, "illegible region carries text"});
    }
    if (r.text.has_value() && !is_text_class(r.cls)) {
      out.push_back({"region.text", r.id, "non-text class carries text"});
    }
    const BoundingBox padded = r.box.expanded(kLinePadFrac * r.box.width(),
                                              kLinePadFrac * r.box.height());
    for (const BoundingBox& line : r.lines) {
      if (!line.valid()) {
        out.push_back({"region.lines", r.id, "degenerate line box"});
      } else if (r.box.valid() && !padded.contains(line)) {
        out.push_back({"region.lines", r.id, "line box outside padded region"});
      }
    }
  }
  return out;
}

}  // namespace newsdig
