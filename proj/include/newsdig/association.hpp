#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "newsdig/domain.hpp"

namespace newsdig {

struct AssociationConfig {
  double x_overlap_frac = 0.01;   // of page width, strict >
  double max_above_frac = 0.10;   // headline bottom above article top, of page height
  double max_below_frac = 0.02;   // headline bottom below article top
};

bool x_intervals_overlap(const BoundingBox& a, const BoundingBox& b,
                         double page_width, const AssociationConfig& cfg);

// True when `upper` (headline or byline) can attach to `lower` (article).
bool vertically_adjacent(const BoundingBox& upper, const BoundingBox& lower,
                         double page_height, const AssociationConfig& cfg);

struct ArticleRecord {
  std::optional<std::string> headline;
  std::optional<std::string> byline;
  std::string article_text;
  std::vector<std::string> source_region_ids;  // headlines, bylines, article
  std::string scan_id;
  std::string lccn;
  std::string date;
  int edition = 1;
  int page_number = 1;

  bool operator==(const ArticleRecord&) const = default;
};

struct AssociationResult {
  std::vector<ArticleRecord> articles;  // ordered by article (y0, x0)
  std::vector<std::string> unmatched_headlines;
  std::vector<std::string> unmatched_bylines;
  // (headline_or_byline_id, article_id) pairs actually used.
  std::vector<std::pair<std::string, std::string>> headline_links;
  std::vector<std::pair<std::string, std::string>> byline_links;
};

// Attaches each headline and byline to the topmost adjacent article below it
// (smallest article y0, then x0). Only text-bearing regions participate.
AssociationResult associate_regions(const PageScan& scan,
                                    const AssociationConfig& cfg = {});

// Micro-averaged F1 over (headline_id, article_id) pairs. Empty prediction or
// gold sides score perfect precision or recall respectively.
double association_f1(
    const std::set<std::pair<std::string, std::string>>& predicted,
    const std::set<std::pair<std::string, std::string>>& gold);

}  // namespace newsdig
