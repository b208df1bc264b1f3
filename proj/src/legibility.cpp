#include "newsdig/legibility.hpp"

#include <cmath>
#include <stdexcept>

namespace newsdig {

bool is_valid_prob_triple(const ProbTriple& p, double tol) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

LegibilityClass classify_legibility(const ProbTriple& p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return static_cast<LegibilityClass>(best);
}

double weighted_cross_entropy(const ProbTriple& p, LegibilityClass truth,
                              const ProbTriple& weights) {
  const auto idx = static_cast<std::size_t>(truth);
  if (p[idx] <= 0.0)
    throw std::domain_error("zero probability assigned to the true class");
  return -weights[idx] * std::log(p[idx]);
}

GateResult gate_regions(std::vector<ContentRegion>& regions,
                        const LegibilityScorer& scorer,
                        const std::string& image_ref,
                        const LegibilityConfig& cfg) {
  GateResult result;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    ContentRegion& r = regions[i];
    if (cfg.gate_only_text_classes && !is_text_class(r.cls)) {
      result.skipped.push_back(i);
      continue;
    }
    std::optional<ProbTriple> p;
    if (scorer) p = scorer(CropRef{r.id, image_ref, r.box});
    if (!p) {
      result.skipped.push_back(i);
      result.diagnostics.push_back({r.id, "no legibility score"});
      continue;
    }
    if (!is_valid_prob_triple(*p)) {
      result.skipped.push_back(i);
      result.diagnostics.push_back({r.id, "invalid probability triple"});
      continue;
    }
    r.legibility = classify_legibility(*p);
    if (cfg.ocr_policy[static_cast<std::size_t>(*r.legibility)]) {
      result.to_ocr.push_back(i);
    } else {
      result.skipped.push_back(i);
    }
  }
  return result;
}

void ConfusionMatrix::add(LegibilityClass truth, LegibilityClass predicted) {
  ++counts_[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
}

std::size_t ConfusionMatrix::count(LegibilityClass truth,
                                   LegibilityClass predicted) const {
  return counts_[static_cast<std::size_t>(truth)][static_cast<std::size_t>(predicted)];
}

std::size_t ConfusionMatrix::total() const {
  std::size_t n = 0;
  for (const auto& row : counts_)
    for (std::size_t v : row) n += v;
  return n;
}

std::size_t ConfusionMatrix::legible_as_illegible() const {
  return count(LegibilityClass::legible, LegibilityClass::illegible);
}

std::size_t ConfusionMatrix::illegible_as_legible() const {
  return count(LegibilityClass::illegible, LegibilityClass::legible);
}

double ConfusionMatrix::accuracy() const {
  const std::size_t n = total();
  if (n == 0) throw std::domain_error("empty confusion matrix");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < 3; ++i) hit += counts_[i][i];
  return static_cast<double>(hit) / static_cast<double>(n);
}

}  // namespace newsdig
