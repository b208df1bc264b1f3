#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newsdig {

// Pixel-space rectangle, origin top-left, y grows downward.
struct BoundingBox {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 0.0;
  double y1 = 0.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }

  // Strictly positive extent, all coordinates finite and >= 0.
  bool valid() const;
  bool contains(const BoundingBox& inner) const;
  BoundingBox translated(double dx, double dy) const;
  BoundingBox expanded(double dx, double dy) const;

  bool operator==(const BoundingBox&) const = default;
};

enum class ContentClass {
  article,
  headline,
  caption,
  byline,
  image,
  ad,
  table,
  header,
  page_number,
  masthead,
};

inline constexpr std::array<ContentClass, 10> kContentClasses = {
    ContentClass::article, ContentClass::headline, ContentClass::caption,
    ContentClass::byline,  ContentClass::image,    ContentClass::ad,
    ContentClass::table,   ContentClass::header,   ContentClass::page_number,
    ContentClass::masthead,
};

const char* to_string(ContentClass cls);
std::optional<ContentClass> content_class_from_string(std::string_view name);

// article, headline, caption and byline carry text when legible.
bool is_text_class(ContentClass cls);

enum class LegibilityClass { legible, borderline, illegible };

const char* to_string(LegibilityClass cls);
std::optional<LegibilityClass> legibility_from_string(std::string_view name);

struct ContentRegion {
  std::string id;
  BoundingBox box;
  ContentClass cls = ContentClass::article;
  double confidence = 0.0;
  std::optional<LegibilityClass> legibility;
  std::vector<BoundingBox> lines;
  std::optional<std::string> text;

  bool operator==(const ContentRegion&) const = default;
};

struct PageScan {
  std::string scan_id;
  std::string lccn;
  std::string date;  // ISO yyyy-mm-dd
  int edition = 1;
  int page_number = 1;
  int width_px = 0;
  int height_px = 0;
  std::vector<ContentRegion> regions;

  bool operator==(const PageScan&) const = default;
};

// Reference to a rectangular crop of a source image. The engine never decodes
// pixels; boundaries resolve these against their own storage. `id` names the
// entity being cropped (region, line or word) and is stable across runs.
struct CropRef {
  std::string id;
  std::string image_ref;
  BoundingBox box;
};

struct Violation {
  std::string field;
  std::string region_id;  // empty for scan-level violations
  std::string message;
};

// Line detectors run on padded crops, so line boxes may spill slightly past
// their region. Tolerated margin as a fraction of region width/height.
inline constexpr double kLinePadFrac = 0.05;

// Pure invariant check; violations are data, not failures.
std::vector<Violation> validate_scan(const PageScan& scan);

}  // namespace newsdig
