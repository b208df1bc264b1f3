#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "newsdig/geometry.hpp"
#include "support/oracles.hpp"

using namespace newsdig;

TEST_SUITE("geometry") {

TEST_CASE("config defaults") {
  const GeometryConfig cfg;
  CHECK(cfg.tall_ratio == 2.0);
  CHECK(cfg.wide_ratio == 30.0);
  CHECK(cfg.split_overlap_frac == 0.10);
  CHECK(cfg.nms_iou == 0.2);
  CHECK(cfg.conf_threshold == 0.1);
  CHECK(cfg.max_detections == 500);
}

TEST_CASE("iou basics") {
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, {20, 20, 30, 30}) == 0.0);
  CHECK(iou(a, {10, 0, 20, 10}) == 0.0);  // touching edges
  CHECK(iou(a, {0, 0, 10, 5}) == 0.5);
  CHECK(intersection_area(a, {5, 5, 15, 15}) == 25.0);
  CHECK(iou(a, {5, 5, 15, 15}) == doctest::Approx(25.0 / 175.0));
}

TEST_CASE("nms suppresses near-duplicates per label") {
  std::vector<Detection> dets = {
      {{0, 0, 100, 100}, "article", 0.9},
      {{2, 2, 98, 98}, "article", 0.8},     // duplicate of the first
      {{0, 0, 100, 100}, "headline", 0.7},  // other label survives
      {{200, 0, 300, 100}, "article", 0.6},
  };
  auto out = nms(dets, 0.2);
  REQUIRE(out.size() == 3);
  CHECK(out[0] == dets[0]);
  CHECK(out[1] == dets[2]);
  CHECK(out[2] == dets[3]);

  auto idx = nms_survivors(dets, 0.2);
  CHECK(idx == std::vector<std::size_t>{0, 2, 3});
}

TEST_CASE("nms tie-break prefers smaller y0 then x0 then input order") {
  std::vector<Detection> dets = {
      {{0, 10, 100, 110}, "a", 0.5},
      {{0, 0, 100, 100}, "a", 0.5},  // same score, smaller y0 wins
  };
  auto out = nms(dets, 0.2);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == dets[1]);
}

TEST_CASE("nms idempotence on random detection sets") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> count(0, 20);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_int_distribution<int> label(0, 2);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<Detection> dets;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      dets.push_back({oracles::random_box(rng, 0, 100, 2.0),
                      std::string(1, static_cast<char>('a' + label(rng))),
                      score(rng)});
    }
    auto once = nms(dets, 0.2);
    auto twice = nms(once, 0.2);
    CHECK(once == twice);
    // Survivors never overlap beyond the threshold within a label.
    for (std::size_t i = 0; i < once.size(); ++i)
      for (std::size_t j = i + 1; j < once.size(); ++j)
        if (once[i].label == once[j].label)
          CHECK(iou(once[i].box, once[j].box) <= 0.2);
  }
}

TEST_CASE("tall regions split into width-proportional windows") {
  const GeometryConfig cfg;
  SUBCASE("100x400 gives window tops 0, 180, 200") {
    auto w = split_tall_region({0, 0, 100, 400}, cfg);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == BoundingBox{0, 0, 100, 200});
    CHECK(w[1] == BoundingBox{0, 180, 100, 380});
    CHECK(w[2] == BoundingBox{0, 200, 100, 400});
  }
  SUBCASE("just past the ratio still splits cleanly") {
    auto w = split_tall_region({0, 0, 100, 201}, cfg);
    REQUIRE(w.size() == 2);
    CHECK(w[0] == BoundingBox{0, 0, 100, 200});
    CHECK(w[1] == BoundingBox{0, 1, 100, 201});
  }
  SUBCASE("at the ratio exactly, no split") {
    auto w = split_tall_region({0, 0, 100, 200}, cfg);
    REQUIRE(w.size() == 1);
    CHECK(w[0] == BoundingBox{0, 0, 100, 200});
  }
  SUBCASE("offset origin is preserved") {
    auto w = split_tall_region({50, 70, 150, 470}, cfg);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == BoundingBox{50, 70, 150, 270});
    CHECK(w[2] == BoundingBox{50, 270, 150, 470});
  }
}

TEST_CASE("wide lines split horizontally") {
  const GeometryConfig cfg;
  SUBCASE("600x10 gives window lefts 0, 270, 300") {
    auto w = split_wide_line({0, 0, 600, 10}, cfg);
    REQUIRE(w.size() == 3);
    CHECK(w[0] == BoundingBox{0, 0, 300, 10});
    CHECK(w[1] == BoundingBox{270, 0, 570, 10});
    CHECK(w[2] == BoundingBox{300, 0, 600, 10});
  }
  SUBCASE("exactly 30:1 stays whole") {
    auto w = split_wide_line({0, 0, 300, 10}, cfg);
    REQUIRE(w.size() == 1);
  }
}

TEST_CASE("split windows cover the input exactly") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> origin(0, 500);
  std::uniform_real_distribution<double> w_dist(5, 80);
  std::uniform_real_distribution<double> ratio(0.2, 12.0);
  const GeometryConfig cfg;
  for (int iter = 0; iter < 400; ++iter) {
    const double x0 = origin(rng), y0 = origin(rng);
    const double w = w_dist(rng);
    const double h = w * ratio(rng);
    const BoundingBox box{x0, y0, x0 + w, y0 + h};
    auto windows = split_tall_region(box, cfg);
    REQUIRE(!windows.empty());
    CHECK(windows.front().y0 == box.y0);
    CHECK(windows.back().y1 == doctest::Approx(box.y1).epsilon(1e-12));
    for (std::size_t i = 0; i < windows.size(); ++i) {
      CHECK(windows[i].x0 == box.x0);
      CHECK(windows[i].x1 == box.x1);
      CHECK(windows[i].y0 >= box.y0 - 1e-9);
      CHECK(windows[i].y1 <= box.y1 + 1e-9);
      if (i > 0)  // no gaps
        CHECK(windows[i].y0 <= windows[i - 1].y1 + 1e-9);
    }
    if (h / w <= cfg.tall_ratio) CHECK(windows.size() == 1);
  }
}

TEST_CASE("merge_split_lines dedupes across window overlap") {
  const GeometryConfig cfg;
  // Parent windows 0..200 and 180..380; one line visible in both.
  std::vector<std::pair<BoundingBox, std::vector<Detection>>> per_window = {
      {{0, 0, 100, 200},
       {{{10, 50, 90, 60}, "line", 0.9}, {{10, 185, 90, 195}, "line", 0.9}}},
      {{0, 180, 100, 380},
       {{{10, 5, 90, 15}, "line", 0.9}, {{10, 70, 90, 80}, "line", 0.8}}},
  };
  auto merged = merge_split_lines(per_window, cfg);
  REQUIRE(merged.size() == 3);
  CHECK(merged[0].box == BoundingBox{10, 50, 90, 60});
  CHECK(merged[1].box == BoundingBox{10, 185, 90, 195});
  CHECK(merged[2].box == BoundingBox{10, 250, 90, 260});
}

TEST_CASE("merge is class-agnostic") {
  const GeometryConfig cfg;
  std::vector<std::pair<BoundingBox, std::vector<Detection>>> per_window = {
      {{0, 0, 100, 100}, {{{10, 10, 90, 20}, "line", 0.9}}},
      {{0, 0, 100, 100}, {{{10, 10, 90, 20}, "text", 0.8}}},
  };
  CHECK(merge_split_lines(per_window, cfg).size() == 1);
}

TEST_CASE("perfect predictions give mAP 1.0") {
  std::map<std::string, std::vector<GroundTruth>> gts;
  gts["s1"] = {{{0, 0, 10, 10}, "article"}, {{20, 0, 40, 30}, "headline"}};
  gts["s2"] = {{{5, 5, 50, 60}, "article"}};
  std::map<std::string, std::vector<Detection>> preds;
  for (const auto& [scan, boxes] : gts)
    for (const auto& g : boxes) preds[scan].push_back({g.box, g.label, 0.9});
  CHECK(mean_average_precision(preds, gts) == doctest::Approx(1.0));
}

TEST_CASE("hand-computed AP values") {
  std::map<std::string, std::vector<GroundTruth>> gts;
  gts["s"] = {{{0, 0, 10, 10}, "a"}};

  SUBCASE("high-scored miss then hit gives AP 0.5") {
    std::map<std::string, std::vector<Detection>> preds;
    preds["s"] = {{{50, 50, 60, 60}, "a", 0.9}, {{0, 0, 10, 10}, "a", 0.8}};
    CHECK(average_precision(preds, gts, "a", 0.5) == doctest::Approx(0.5));
  }
  SUBCASE("duplicate after the hit keeps AP 1.0") {
    std::map<std::string, std::vector<Detection>> preds;
    preds["s"] = {{{0, 0, 10, 10}, "a", 0.9}, {{0, 0, 10, 10}, "a", 0.8}};
    CHECK(average_precision(preds, gts, "a", 0.5) == doctest::Approx(1.0));
  }
  SUBCASE("IoU 0.9 pred matches thresholds 0.50 through 0.90") {
    std::map<std::string, std::vector<Detection>> preds;
    preds["s"] = {{{0, 0, 10, 9}, "a", 0.9}};
    CHECK(mean_average_precision(preds, gts) == doctest::Approx(0.9));
  }
  SUBCASE("no predictions gives AP 0") {
    CHECK(average_precision({}, gts, "a", 0.5) == 0.0);
  }
}

TEST_CASE("predictions for unknown scans are rejected") {
  std::map<std::string, std::vector<GroundTruth>> gts;
  gts["s1"] = {{{0, 0, 10, 10}, "a"}};
  std::map<std::string, std::vector<Detection>> preds;
  preds["ghost"] = {{{0, 0, 10, 10}, "a", 0.9}};
  CHECK_THROWS_AS(mean_average_precision(preds, gts), std::invalid_argument);
}

TEST_CASE("mAP agrees with the reference implementation on random instances") {
  std::mt19937_64 rng(23);
  std::uniform_int_distribution<int> nbox(0, 5);
  std::uniform_int_distribution<int> nscan(1, 3);
  std::uniform_real_distribution<double> score(0.05, 1.0);
  std::uniform_int_distribution<int> lab(0, 1);
  const char* labels[] = {"a", "b"};
  for (int iter = 0; iter < 200; ++iter) {
    std::map<std::string, std::vector<GroundTruth>> gts;
    std::map<std::string, std::vector<Detection>> preds;
    const int scans = nscan(rng);
    bool any_gt = false;
    for (int s = 0; s < scans; ++s) {
      const std::string id = "s" + std::to_string(s);
      gts[id] = {};
      const int ng = nbox(rng);
      for (int g = 0; g < ng; ++g) {
        gts[id].push_back({oracles::random_box(rng, 0, 50, 2.0), labels[lab(rng)]});
        any_gt = true;
      }
      const int np = nbox(rng);
      for (int p = 0; p < np; ++p) {
        // Mix of jittered copies of ground truth and unrelated boxes.
        BoundingBox box = oracles::random_box(rng, 0, 50, 2.0);
        if (!gts[id].empty() && p % 2 == 0) {
          box = gts[id][static_cast<std::size_t>(p) % gts[id].size()].box;
          box.x1 += (p % 3);
        }
        preds[id].push_back({box, labels[lab(rng)], score(rng)});
      }
    }
    if (!any_gt) continue;
    CHECK(mean_average_precision(preds, gts) ==
          doctest::Approx(oracles::mean_average_precision(preds, gts))
              .epsilon(1e-12));
  }
}

}  // TEST_SUITE
