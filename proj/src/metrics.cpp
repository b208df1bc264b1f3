#include "newsdig/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "json.hpp"

#include "newsdig/unicode.hpp"

namespace newsdig {

std::size_t levenshtein(const std::string& a, const std::string& b) {
  const std::u32string ua = utf8_decode(a);
  const std::u32string ub = utf8_decode(b);
  const std::size_t n = ua.size();
  const std::size_t m = ub.size();
  if (n == 0) return m;
  if (m == 0) return n;

  std::vector<std::size_t> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
  for (std::size_t i = 1; i <= n; ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t sub = prev[j - 1] + (ua[i - 1] == ub[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

namespace {

struct CerTotals {
  std::size_t edits = 0;
  std::size_t ref_len = 0;
};

CerTotals cer_totals(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& references) {
  if (predictions.size() != references.size())
    throw std::invalid_argument("prediction/reference count mismatch");
  CerTotals t;
  for (std::size_t i = 0; i < references.size(); ++i) {
    t.edits += levenshtein(predictions[i], references[i]);
    t.ref_len += utf8_decode(references[i]).size();
  }
  return t;
}

}  // namespace

double cer(const std::vector<std::string>& predictions,
           const std::vector<std::string>& references) {
  const CerTotals t = cer_totals(predictions, references);
  if (t.ref_len == 0)
    throw std::invalid_argument("total reference length is zero");
  return static_cast<double>(t.edits) / static_cast<double>(t.ref_len);
}

CerDecomposition cer_decomposition(
    const std::vector<std::string>& full_predictions,
    const std::vector<std::string>& reference_seg_predictions,
    const std::vector<std::string>& references) {
  const CerTotals full = cer_totals(full_predictions, references);
  const CerTotals seg = cer_totals(reference_seg_predictions, references);
  if (full.ref_len == 0)
    throw std::invalid_argument("total reference length is zero");
  if (full.ref_len != seg.ref_len)
    throw std::invalid_argument("corpora disagree on reference totals");

  CerDecomposition d;
  d.cer_total = static_cast<double>(full.edits) / static_cast<double>(full.ref_len);
  d.cer_ocr = static_cast<double>(seg.edits) / static_cast<double>(seg.ref_len);
  const double residual = d.cer_total - d.cer_ocr;
  if (residual < 0.0) {
    d.cer_layout = 0.0;
    d.clamped = true;
  } else {
    d.cer_layout = residual;
  }
  return d;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["cer_total"] = cer_total;
  j["pair_count"] = pair_count;
  j["cer_by_class"] = nlohmann::ordered_json::object();
  for (const auto& [cls, value] : cer_by_class) j["cer_by_class"][cls] = value;
  if (!non_word_rate_by_class.empty()) {
    j["non_word_rate_by_class"] = nlohmann::ordered_json::object();
    for (const auto& [cls, value] : non_word_rate_by_class)
      j["non_word_rate_by_class"][cls] = value;
  }
  if (decomposition) {
    j["cer_ocr"] = decomposition->cer_ocr;
    j["cer_layout"] = decomposition->cer_layout;
    if (decomposition->clamped) j["cer_layout_clamped"] = true;
  }
  return j.dump(2);
}

}  // namespace newsdig
