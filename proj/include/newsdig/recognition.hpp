#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "newsdig/domain.hpp"
#include "newsdig/geometry.hpp"

namespace newsdig {

using Embedding = std::vector<double>;

double dot(const Embedding& a, const Embedding& b);
double norm(const Embedding& a);

// Returns v scaled to unit norm; vectors already within 1e-7 of unit length
// pass through unchanged. Throws on zero vectors.
Embedding normalized(const Embedding& v);

enum class IndexKind : std::uint32_t { word = 0, character = 1 };

// Flat exact-search index over unit-normalized exemplar embeddings.
class ExemplarIndex {
 public:
  struct Hit {
    std::size_t row = 0;
    double similarity = 0.0;
    std::string label;
  };

  static ExemplarIndex build(IndexKind kind,
                             std::vector<std::string> labels,
                             const std::vector<Embedding>& embeddings);

  Hit nearest(const Embedding& query) const;
  std::vector<Hit> k_nearest(const Embedding& query, std::size_t k) const;

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return dim_; }
  IndexKind kind() const { return kind_; }
  const std::string& label(std::size_t row) const { return labels_[row]; }
  Embedding row(std::size_t r) const;

  // EXIDX1 binary container, little-endian float32 rows.
  void save(const std::string& path) const;
  static ExemplarIndex load(const std::string& path);

 private:
  ExemplarIndex() = default;

  IndexKind kind_ = IndexKind::word;
  std::size_t dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<double> data_;  // row-major, unit rows
};

// Embeds crops into the exemplar space. Word and character crops may use
// different towers, hence two entry points.
struct EncoderBoundary {
  std::function<Embedding(const CropRef&)> embed_word;
  std::function<Embedding(const CropRef&)> embed_char;
};

// Visual detectors. `crop.id` is the id of the entity being subdivided; boxes
// come back in the crop's local coordinates.
struct DetectorBoundary {
  std::function<std::vector<Detection>(const std::string& image_ref)> detect_layout;
  std::function<std::vector<Detection>(const CropRef&)> detect_lines;
  std::function<std::vector<Detection>(const CropRef&)> detect_words;
  std::function<std::vector<Detection>(const CropRef&)> detect_chars;
};

struct RecognitionConfig {
  double word_sim_threshold = 0.82;  // at or above: trust the word match
  std::size_t embedding_dim = 0;     // 0 accepts whatever the indexes carry
};

struct DecodeStats {
  std::size_t word_hits = 0;        // resolved by word retrieval
  std::size_t char_fallbacks = 0;   // resolved character by character
  std::size_t empty_char_detections = 0;
};

// One word crop. Word retrieval at or above the threshold wins; otherwise the
// char detector segments the crop and each glyph is retrieved independently.
std::string decode_word(const CropRef& crop, const ExemplarIndex& word_index,
                        const ExemplarIndex& char_index,
                        const EncoderBoundary& encoder,
                        const DetectorBoundary& detector,
                        const RecognitionConfig& cfg,
                        DecodeStats* stats = nullptr);

// Words ordered by x0, joined with single spaces. `words` are in the line's
// local coordinates; ids derive from line_id.
std::string decode_line(const CropRef& line, const std::vector<Detection>& words,
                        const ExemplarIndex& word_index,
                        const ExemplarIndex& char_index,
                        const EncoderBoundary& encoder,
                        const DetectorBoundary& detector,
                        const RecognitionConfig& cfg,
                        DecodeStats* stats = nullptr);

// Provides word detections for one line box (page coordinates in, detections
// in line-local coordinates out). The caller owns wide-line splitting.
using WordProvider = std::function<std::vector<Detection>(
    const CropRef& line_crop)>;

// Full region: lines ordered by (y0, x0), decoded and joined with newlines.
std::string decode_region(const ContentRegion& region,
                          const std::string& image_ref,
                          const std::vector<BoundingBox>& lines,
                          const WordProvider& word_provider,
                          const ExemplarIndex& word_index,
                          const ExemplarIndex& char_index,
                          const EncoderBoundary& encoder,
                          const DetectorBoundary& detector,
                          const RecognitionConfig& cfg,
                          DecodeStats* stats = nullptr);

}  // namespace newsdig
