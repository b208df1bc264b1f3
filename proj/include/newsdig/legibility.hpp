#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "newsdig/domain.hpp"

namespace newsdig {

// P(legible), P(borderline), P(illegible) in that order.
using ProbTriple = std::array<double, 3>;

bool is_valid_prob_triple(const ProbTriple& p, double tol = 1e-6);

// Argmax with ties resolved toward the more legible class.
LegibilityClass classify_legibility(const ProbTriple& p);

// Class weights for the training objective: legible, borderline, illegible.
inline constexpr ProbTriple kLegibilityWeights = {2.0, 1.0, 1.0};

// -w[y] * log p[y]; throws when p[y] is zero.
double weighted_cross_entropy(const ProbTriple& p, LegibilityClass truth,
                              const ProbTriple& weights = kLegibilityWeights);

struct LegibilityConfig {
  ProbTriple class_weights = kLegibilityWeights;
  // Which predicted classes proceed to OCR: legible, borderline, illegible.
  std::array<bool, 3> ocr_policy = {true, true, false};
  // Non-text classes skip the gate untouched.
  bool gate_only_text_classes = true;
};

using LegibilityScorer =
    std::function<std::optional<ProbTriple>(const CropRef&)>;

struct GateDiagnostic {
  std::string region_id;
  std::string message;
};

struct GateResult {
  std::vector<std::size_t> to_ocr;    // indices into the input span
  std::vector<std::size_t> skipped;   // everything else
  std::vector<GateDiagnostic> diagnostics;
};

// Annotates each text region's `legibility` in place and partitions regions
// into OCR-worthy (legible, borderline) and skipped (illegible, unscored).
GateResult gate_regions(std::vector<ContentRegion>& regions,
                        const LegibilityScorer& scorer,
                        const std::string& image_ref,
                        const LegibilityConfig& cfg = {});

// Rows are ground truth, columns are predictions.
class ConfusionMatrix {
 public:
  void add(LegibilityClass truth, LegibilityClass predicted);
  std::size_t count(LegibilityClass truth, LegibilityClass predicted) const;
  std::size_t total() const;
  std::size_t legible_as_illegible() const;
  std::size_t illegible_as_legible() const;
  double accuracy() const;

 private:
  std::array<std::array<std::size_t, 3>, 3> counts_{};
};

}  // namespace newsdig
