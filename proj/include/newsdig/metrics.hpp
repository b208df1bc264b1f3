#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace newsdig {

// Edit distance over Unicode scalar values, not bytes.
std::size_t levenshtein(const std::string& a, const std::string& b);

// Corpus-level character error rate: total edits / total reference length.
// Throws if the reference lengths sum to zero.
double cer(const std::vector<std::string>& predictions,
           const std::vector<std::string>& references);

struct CerDecomposition {
  double cer_total = 0.0;
  double cer_ocr = 0.0;     // error under reference segmentation
  double cer_layout = 0.0;  // residual attributed to layout, >= 0
  bool clamped = false;     // true when the residual was negative
};

// `full` pairs system output against references; `reference_seg` pairs OCR on
// reference-segmented crops against the same references.
CerDecomposition cer_decomposition(
    const std::vector<std::string>& full_predictions,
    const std::vector<std::string>& reference_seg_predictions,
    const std::vector<std::string>& references);

struct EvalReport {
  double cer_total = 0.0;
  std::map<std::string, double> cer_by_class;
  std::map<std::string, double> non_word_rate_by_class;  // empty unless a lexicon was given
  std::optional<CerDecomposition> decomposition;
  std::size_t pair_count = 0;

  std::string to_json() const;
};

}  // namespace newsdig
