#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "newsdig/metrics.hpp"
#include "support/oracles.hpp"

using namespace newsdig;

TEST_SUITE("metrics") {

TEST_CASE("classic edit distances") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("flaw", "lawn") == 2);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("", "") == 0);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("a", "b") == 1);
}

TEST_CASE("distance counts scalars, not bytes") {
  CHECK(levenshtein("caf\xC3\xA9", "cafe") == 1);
  CHECK(levenshtein("\xE2\x86\x92", "") == 1);
  CHECK(levenshtein("a\xF0\x9F\x98\x80z", "az") == 1);
}

TEST_CASE("agrees with the recursive oracle on random pairs") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> ch(0, 3);
  auto make = [&] {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + ch(rng)));
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = make(), b = make();
    CHECK(levenshtein(a, b) == oracles::levenshtein(a, b));
  }
}

TEST_CASE("metric axioms hold") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> len(0, 10);
  std::uniform_int_distribution<int> ch(0, 2);
  auto make = [&] {
    std::string s;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) s.push_back(static_cast<char>('a' + ch(rng)));
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    const std::string a = make(), b = make(), c = make();
    const std::size_t ab = levenshtein(a, b);
    CHECK((ab == 0) == (a == b));
    CHECK(ab == levenshtein(b, a));
    CHECK(ab <= levenshtein(a, c) + levenshtein(c, b));
  }
}

TEST_CASE("cer is corpus-level, weighted by reference length") {
  CHECK(cer({"abc"}, {"abc"}) == 0.0);
  CHECK(cer({"abc", "de"}, {"abc", "dx"}) == doctest::Approx(1.0 / 5.0));
  // One long noisy pair dominates a short clean one: 5 edits over 11 chars.
  CHECK(cer({"aaaaabbbbb", "b"}, {"aaaaaaaaaa", "b"}) ==
        doctest::Approx(5.0 / 11.0).epsilon(1e-12));
  CHECK(cer({"xyz"}, {"abc"}) == 1.0);
}

TEST_CASE("cer rejects malformed corpora") {
  CHECK_THROWS_AS(cer({"a"}, {"a", "b"}), std::invalid_argument);
  CHECK_THROWS_AS(cer({""}, {""}), std::invalid_argument);
}

TEST_CASE("decomposition splits layout from recognition error") {
  // Corpus shaped like the headline result: 1000 reference chars, 51 edits
  // end to end, 43 under reference segmentation.
  std::vector<std::string> refs, full, seg;
  for (int i = 0; i < 10; ++i)
    refs.push_back(std::string(100, static_cast<char>('a' + i)));
  full = refs;
  seg = refs;
  // Substitute known counts of characters; '#' appears in no reference.
  auto corrupt = [](std::string s, int k) {
    for (int i = 0; i < k; ++i) s[static_cast<std::size_t>(i)] = '#';
    return s;
  };
  full[0] = corrupt(full[0], 26);
  full[5] = corrupt(full[5], 25);  // 51 total
  seg[0] = corrupt(seg[0], 20);
  seg[5] = corrupt(seg[5], 23);  // 43 total

  const CerDecomposition d = cer_decomposition(full, seg, refs);
  CHECK(d.cer_total == doctest::Approx(0.051).epsilon(1e-12));
  CHECK(d.cer_ocr == doctest::Approx(0.043).epsilon(1e-12));
  CHECK(d.cer_layout == doctest::Approx(0.008).epsilon(1e-9));
  CHECK_FALSE(d.clamped);
  CHECK(d.cer_ocr + d.cer_layout == doctest::Approx(d.cer_total));
}

TEST_CASE("negative residual clamps to zero") {
  std::vector<std::string> refs = {"aaaaaaaaaa"};
  std::vector<std::string> full = {"aaaaaaaaab"};   // 1 edit
  std::vector<std::string> seg = {"aaaaaaaabb"};    // 2 edits
  const CerDecomposition d = cer_decomposition(full, seg, refs);
  CHECK(d.cer_layout == 0.0);
  CHECK(d.clamped);
  CHECK(d.cer_total == doctest::Approx(0.1));
  CHECK(d.cer_ocr == doctest::Approx(0.2));
}

TEST_CASE("decomposition validates inputs") {
  CHECK_THROWS_AS(cer_decomposition({"a"}, {"a", "b"}, {"a"}),
                  std::invalid_argument);
  CHECK_THROWS_AS(cer_decomposition({""}, {""}, {""}), std::invalid_argument);
}

TEST_CASE("eval report serializes its fields") {
  EvalReport r;
  r.cer_total = 0.051;
  r.cer_by_class = {{"article", 0.05}, {"headline", 0.02}};
  r.non_word_rate_by_class = {{"article", 0.1}};
  r.pair_count = 42;
  CerDecomposition d;
  d.cer_total = 0.051;
  d.cer_ocr = 0.043;
  d.cer_layout = 0.008;
  r.decomposition = d;

  const nlohmann::json j = nlohmann::json::parse(r.to_json());
  CHECK(j["cer_total"] == 0.051);
  CHECK(j["pair_count"] == 42);
  CHECK(j["cer_by_class"]["headline"] == 0.02);
  CHECK(j["non_word_rate_by_class"]["article"] == 0.1);
  CHECK(j["cer_ocr"] == 0.043);
  CHECK(j["cer_layout"] == 0.008);
  CHECK(!j.contains("cer_layout_clamped"));  // only emitted when clamped

  EvalReport clamped = r;
  clamped.decomposition->clamped = true;
  const nlohmann::json jc = nlohmann::json::parse(clamped.to_json());
  CHECK(jc["cer_layout_clamped"] == true);
}

}  // TEST_SUITE
