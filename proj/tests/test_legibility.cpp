#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "newsdig/legibility.hpp"

using namespace newsdig;

namespace {

ContentRegion region(const char* id, ContentClass cls) {
  ContentRegion r;
  r.id = id;
  r.cls = cls;
  r.box = {0, 0, 100, 50};
  r.confidence = 0.9;
  return r;
}

}  // namespace

TEST_SUITE("legibility") {

TEST_CASE("probability triple validation") {
  CHECK(is_valid_prob_triple({0.5, 0.3, 0.2}));
  CHECK(is_valid_prob_triple({1.0, 0.0, 0.0}));
  CHECK_FALSE(is_valid_prob_triple({0.5, 0.3, 0.1}));    // sums to 0.9
  CHECK_FALSE(is_valid_prob_triple({-0.1, 0.6, 0.5}));   // negative
  CHECK_FALSE(is_valid_prob_triple({0.5, 0.5, 0.5}));    // sums to 1.5
  CHECK(is_valid_prob_triple({0.5, 0.3, 0.2000004}, 1e-6));
  CHECK_FALSE(is_valid_prob_triple({0.5, 0.3, 0.21}, 1e-6));
}

TEST_CASE("classification is argmax, ties lean legible") {
  CHECK(classify_legibility({0.8, 0.1, 0.1}) == LegibilityClass::legible);
  CHECK(classify_legibility({0.2, 0.5, 0.3}) == LegibilityClass::borderline);
  CHECK(classify_legibility({0.1, 0.2, 0.7}) == LegibilityClass::illegible);
  CHECK(classify_legibility({0.4, 0.4, 0.2}) == LegibilityClass::legible);
  CHECK(classify_legibility({0.3, 0.35, 0.35}) == LegibilityClass::borderline);
  const double third = 1.0 / 3.0;
  CHECK(classify_legibility({third, third, third}) == LegibilityClass::legible);
}

TEST_CASE("training loss doubles the weight on legible ground truth") {
  CHECK(kLegibilityWeights == ProbTriple{2.0, 1.0, 1.0});
  const ProbTriple p{0.5, 0.3, 0.2};
  CHECK(weighted_cross_entropy(p, LegibilityClass::legible) ==
        doctest::Approx(-2.0 * std::log(0.5)));
  CHECK(weighted_cross_entropy(p, LegibilityClass::borderline) ==
        doctest::Approx(-std::log(0.3)));
  CHECK(weighted_cross_entropy(p, LegibilityClass::illegible) ==
        doctest::Approx(-std::log(0.2)));
  CHECK(weighted_cross_entropy({1.0, 0.0, 0.0}, LegibilityClass::legible) ==
        0.0);
  CHECK_THROWS_AS(
      weighted_cross_entropy({1.0, 0.0, 0.0}, LegibilityClass::illegible),
      std::domain_error);
}

TEST_CASE("gate partitions regions and annotates legibility") {
  std::vector<ContentRegion> regions = {
      region("r0", ContentClass::article),   // legible
      region("r1", ContentClass::article),   // borderline
      region("r2", ContentClass::article),   // illegible
      region("r3", ContentClass::ad),        // non-text: skipped silently
      region("r4", ContentClass::headline),  // no score
      region("r5", ContentClass::caption),   // invalid triple
  };
  auto scorer = [](const CropRef& crop) -> std::optional<ProbTriple> {
    if (crop.id == "r0") return ProbTriple{0.8, 0.1, 0.1};
    if (crop.id == "r1") return ProbTriple{0.2, 0.6, 0.2};
    if (crop.id == "r2") return ProbTriple{0.1, 0.1, 0.8};
    if (crop.id == "r5") return ProbTriple{0.9, 0.8, 0.7};
    return std::nullopt;
  };

  const GateResult g = gate_regions(regions, scorer, "img");

  CHECK(g.to_ocr == std::vector<std::size_t>{0, 1});
  CHECK(g.skipped == std::vector<std::size_t>{2, 3, 4, 5});
  REQUIRE(g.diagnostics.size() == 2);
  CHECK(g.diagnostics[0].region_id == "r4");
  CHECK(g.diagnostics[0].message == "no legibility score");
  CHECK(g.diagnostics[1].region_id == "r5");
  CHECK(g.diagnostics[1].message == "invalid probability triple");

  CHECK(regions[0].legibility == LegibilityClass::legible);
  CHECK(regions[1].legibility == LegibilityClass::borderline);
  CHECK(regions[2].legibility == LegibilityClass::illegible);
  CHECK_FALSE(regions[3].legibility.has_value());
  CHECK_FALSE(regions[4].legibility.has_value());
  CHECK_FALSE(regions[5].legibility.has_value());

  CHECK(g.to_ocr.size() + g.skipped.size() == regions.size());
}

TEST_CASE("ocr policy can exclude borderline regions") {
  std::vector<ContentRegion> regions = {region("r0", ContentClass::article)};
  auto scorer = [](const CropRef&) -> std::optional<ProbTriple> {
    return ProbTriple{0.2, 0.6, 0.2};
  };
  LegibilityConfig cfg;
  cfg.ocr_policy = {true, false, false};
  const GateResult g = gate_regions(regions, scorer, "img", cfg);
  CHECK(g.to_ocr.empty());
  CHECK(g.skipped == std::vector<std::size_t>{0});
  CHECK(regions[0].legibility == LegibilityClass::borderline);
}

TEST_CASE("gating every class when text filtering is off") {
  std::vector<ContentRegion> regions = {region("r0", ContentClass::ad)};
  auto scorer = [](const CropRef&) -> std::optional<ProbTriple> {
    return ProbTriple{0.9, 0.05, 0.05};
  };
  LegibilityConfig cfg;
  cfg.gate_only_text_classes = false;
  const GateResult g = gate_regions(regions, scorer, "img", cfg);
  CHECK(g.to_ocr == std::vector<std::size_t>{0});
}

TEST_CASE("confusion matrix counts and derived rates") {
  ConfusionMatrix cm;
  for (int i = 0; i < 8; ++i)
    cm.add(LegibilityClass::legible, LegibilityClass::legible);
  cm.add(LegibilityClass::legible, LegibilityClass::illegible);
  cm.add(LegibilityClass::illegible, LegibilityClass::legible);
  for (int i = 0; i < 3; ++i)
    cm.add(LegibilityClass::illegible, LegibilityClass::illegible);
  cm.add(LegibilityClass::borderline, LegibilityClass::borderline);

  CHECK(cm.total() == 14);
  CHECK(cm.count(LegibilityClass::legible, LegibilityClass::legible) == 8);
  CHECK(cm.legible_as_illegible() == 1);
  CHECK(cm.illegible_as_legible() == 1);
  CHECK(cm.accuracy() == doctest::Approx(12.0 / 14.0));

  ConfusionMatrix empty;
  CHECK_THROWS_AS(empty.accuracy(), std::domain_error);
}

}  // TEST_SUITE
