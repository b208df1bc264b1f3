#include "newsdig/recognition.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <tuple>

#include "binio.hpp"

namespace newsdig {

double dot(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("embedding dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Embedding& a) { return std::sqrt(dot(a, a)); }

Embedding normalized(const Embedding& v) {
  const double n = norm(v);
  if (n == 0.0) throw std::domain_error("cannot normalize zero vector");
  if (std::abs(n - 1.0) <= 1e-7) return v;
  Embedding out = v;
  for (double& x : out) x /= n;
  return out;
}

ExemplarIndex ExemplarIndex::build(IndexKind kind,
                                   std::vector<std::string> labels,
                                   const std::vector<Embedding>& embeddings) {
  if (labels.size() != embeddings.size())
    throw std::invalid_argument("label/embedding count mismatch");
  if (labels.empty()) throw std::invalid_argument("empty exemplar set");

  ExemplarIndex idx;
  idx.kind_ = kind;
  idx.dim_ = embeddings[0].size();
  idx.labels_ = std::move(labels);
  idx.data_.reserve(idx.dim_ * embeddings.size());
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    if (embeddings[i].size() != idx.dim_)
      throw std::invalid_argument("dimension mismatch for label: " +
                                  idx.labels_[i]);
    Embedding row;
    try {
      row = normalized(embeddings[i]);
    } catch (const std::domain_error&) {
      throw std::invalid_argument("cannot normalize embedding for label: " +
                                  idx.labels_[i]);
    }
    idx.data_.insert(idx.data_.end(), row.begin(), row.end());
  }
  return idx;
}

ExemplarIndex::Hit ExemplarIndex::nearest(const Embedding& query) const {
  if (labels_.empty()) throw std::runtime_error("nearest on empty index");
  if (query.size() != dim_)
    throw std::invalid_argument("query dimension mismatch");
  std::size_t best = 0;
  double best_sim = -2.0;
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    double s = 0.0;
    const double* row = data_.data() + r * dim_;
    for (std::size_t i = 0; i < dim_; ++i) s += row[i] * query[i];
    if (s > best_sim) {
      best_sim = s;
      best = r;
    }
  }
  return {best, best_sim, labels_[best]};
}

std::vector<ExemplarIndex::Hit> ExemplarIndex::k_nearest(const Embedding& query,
                                                         std::size_t k) const {
  if (labels_.empty()) throw std::runtime_error("k_nearest on empty index");
  if (query.size() != dim_)
    throw std::invalid_argument("query dimension mismatch");
  std::vector<std::pair<double, std::size_t>> sims;
  sims.reserve(labels_.size());
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    double s = 0.0;
    const double* row = data_.data() + r * dim_;
    for (std::size_t i = 0; i < dim_; ++i) s += row[i] * query[i];
    sims.push_back({s, r});
  }
  std::sort(sims.begin(), sims.end(), [](const auto& a, const auto& b) {
    return std::tie(b.first, a.second) < std::tie(a.first, b.second);
  });
  const std::size_t take = std::min(k, sims.size());
  std::vector<Hit> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i)
    out.push_back({sims[i].second, sims[i].first, labels_[sims[i].second]});
  return out;
}

Embedding ExemplarIndex::row(std::size_t r) const {
  if (r >= labels_.size()) throw std::out_of_range("row out of range");
  return Embedding(data_.begin() + static_cast<std::ptrdiff_t>(r * dim_),
                   data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * dim_));
}

namespace {

constexpr char kMagic[6] = {'E', 'X', 'I', 'D', 'X', '1'};

using detail::read_f32;
using detail::read_u32;
using detail::write_f32;
using detail::write_u32;

}  // namespace

void ExemplarIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write index file: " + path);
  out.write(kMagic, sizeof(kMagic));
  write_u32(out, static_cast<std::uint32_t>(kind_));
  write_u32(out, static_cast<std::uint32_t>(dim_));
  write_u32(out, static_cast<std::uint32_t>(labels_.size()));
  for (std::size_t r = 0; r < labels_.size(); ++r) {
    write_u32(out, static_cast<std::uint32_t>(labels_[r].size()));
    out.write(labels_[r].data(),
              static_cast<std::streamsize>(labels_[r].size()));
    for (std::size_t i = 0; i < dim_; ++i)
      write_f32(out, static_cast<float>(data_[r * dim_ + i]));
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

ExemplarIndex ExemplarIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open index file: " + path);
  char magic[6];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("not an EXIDX1 file: " + path);
  const std::uint32_t kind = read_u32(in);
  if (kind > 1) throw std::runtime_error("unknown index kind in: " + path);
  const std::uint32_t dim = read_u32(in);
  const std::uint32_t count = read_u32(in);
  if (dim == 0 || count == 0)
    throw std::runtime_error("empty index file: " + path);

  std::vector<std::string> labels;
  std::vector<Embedding> rows;
  labels.reserve(count);
  rows.reserve(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint32_t len = read_u32(in);
    std::string label(len, '\0');
    in.read(label.data(), len);
    Embedding row(dim);
    for (std::uint32_t i = 0; i < dim; ++i)
      row[i] = static_cast<double>(read_f32(in));
    if (!in) throw std::runtime_error("truncated index file: " + path);
    const double n = norm(row);
    if (std::abs(n - 1.0) > 1e-5)
      throw std::runtime_error("non-unit row for label '" + label +
                               "' in: " + path);
    for (double& x : row) x /= n;
    labels.push_back(std::move(label));
    rows.push_back(std::move(row));
  }
  return build(static_cast<IndexKind>(kind), std::move(labels), rows);
}

namespace {

std::string format_child_id(const std::string& parent, const char* tag,
                            std::size_t ordinal) {
  return parent + "-" + tag + std::to_string(ordinal);
}

}  // namespace

std::string decode_word(const CropRef& crop, const ExemplarIndex& word_index,
                        const ExemplarIndex& char_index,
                        const EncoderBoundary& encoder,
                        const DetectorBoundary& detector,
                        const RecognitionConfig& cfg, DecodeStats* stats) {
  const Embedding z = normalized(encoder.embed_word(crop));
  const ExemplarIndex::Hit hit = word_index.nearest(z);
  if (hit.similarity >= cfg.word_sim_threshold) {
    if (stats) ++stats->word_hits;
    return hit.label;
  }

  if (stats) ++stats->char_fallbacks;
  std::vector<Detection> chars = detector.detect_chars(crop);
  if (chars.empty()) {
    if (stats) ++stats->empty_char_detections;
    return "";
  }
  std::sort(chars.begin(), chars.end(), [](const Detection& a, const Detection& b) {
    return std::tie(a.box.x0, a.box.y0) < std::tie(b.box.x0, b.box.y0);
  });
  std::string text;
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const CropRef char_crop{format_child_id(crop.id, "C", i), crop.image_ref,
                            chars[i].box.translated(crop.box.x0, crop.box.y0)};
    const Embedding cz = normalized(encoder.embed_char(char_crop));
    text += char_index.nearest(cz).label;
  }
  return text;
}

std::string decode_line(const CropRef& line, const std::vector<Detection>& words,
                        const ExemplarIndex& word_index,
                        const ExemplarIndex& char_index,
                        const EncoderBoundary& encoder,
                        const DetectorBoundary& detector,
                        const RecognitionConfig& cfg, DecodeStats* stats) {
  std::vector<Detection> ordered = words;
  std::sort(ordered.begin(), ordered.end(),
            [](const Detection& a, const Detection& b) {
              return std::tie(a.box.x0, a.box.y0) < std::tie(b.box.x0, b.box.y0);
            });
  std::string text;
  for (std::size_t j = 0; j < ordered.size(); ++j) {
    const CropRef word_crop{format_child_id(line.id, "W", j), line.image_ref,
                            ordered[j].box.translated(line.box.x0, line.box.y0)};
    const std::string word = decode_word(word_crop, word_index, char_index,
                                         encoder, detector, cfg, stats);
    if (j > 0) text += ' ';
    text += word;
  }
  return text;
}

std::string decode_region(const ContentRegion& region,
                          const std::string& image_ref,
                          const std::vector<BoundingBox>& lines,
                          const WordProvider& word_provider,
                          const ExemplarIndex& word_index,
                          const ExemplarIndex& char_index,
                          const EncoderBoundary& encoder,
                          const DetectorBoundary& detector,
                          const RecognitionConfig& cfg, DecodeStats* stats) {
  std::vector<BoundingBox> ordered = lines;
  std::sort(ordered.begin(), ordered.end(),
            [](const BoundingBox& a, const BoundingBox& b) {
              return std::tie(a.y0, a.x0) < std::tie(b.y0, b.x0);
            });
  std::string text;
  for (std::size_t k = 0; k < ordered.size(); ++k) {
    const CropRef line_crop{format_child_id(region.id, "L", k), image_ref,
                            ordered[k]};
    const std::vector<Detection> words = word_provider(line_crop);
    const std::string line_text =
        decode_line(line_crop, words, word_index, char_index, encoder,
                    detector, cfg, stats);
    if (k > 0) text += '\n';
    text += line_text;
  }
  return text;
}

}  // namespace newsdig
