#include "newsdig/stub_backend.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "binio.hpp"

namespace newsdig {

struct StubBackend::Fixture {
  std::vector<Detection> layout;
  std::map<std::string, std::vector<Detection>> lines;
  std::map<std::string, std::vector<Detection>> words;
  std::map<std::string, std::vector<Detection>> chars;
  std::map<std::string, ProbTriple> legibility;
  std::map<std::string, Embedding> embeddings;
};

namespace {

BoundingBox parse_box(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4)
    throw std::runtime_error("box must be [x0, y0, x1, y1]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
          j[3].get<double>()};
}

std::vector<Detection> parse_detections(const nlohmann::json& j,
                                        const std::string& default_label) {
  std::vector<Detection> out;
  for (const nlohmann::json& item : j) {
    Detection d;
    d.box = parse_box(item.at("box"));
    d.label = item.value("class", default_label);
    d.score = item.value("score", 1.0);
    out.push_back(std::move(d));
  }
  return out;
}

void parse_detection_map(const nlohmann::json& j, const std::string& label,
                         std::map<std::string, std::vector<Detection>>& out) {
  for (const auto& [key, value] : j.items())
    out[key] = parse_detections(value, label);
}

void load_embedding_map(const std::string& path,
                        std::map<std::string, Embedding>& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding map: " + path);
  char magic[6];
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, 6) != "EMBMP1")
    throw std::runtime_error("not an EMBMP1 file: " + path);
  const std::uint32_t dim = detail::read_u32(in);
  const std::uint32_t count = detail::read_u32(in);
  for (std::uint32_t r = 0; r < count; ++r) {
    const std::uint32_t len = detail::read_u32(in);
    std::string id(len, '\0');
    in.read(id.data(), len);
    Embedding z(dim);
    for (std::uint32_t i = 0; i < dim; ++i)
      z[i] = static_cast<double>(detail::read_f32(in));
    if (!in) throw std::runtime_error("truncated embedding map: " + path);
    out[id] = std::move(z);
  }
}

// Detections inside the crop window, returned in crop-local coordinates.
std::vector<Detection> clip_to_crop(const std::vector<Detection>& dets,
                                    const BoundingBox& window) {
  const BoundingBox padded = window.expanded(1e-6, 1e-6);
  std::vector<Detection> out;
  for (const Detection& d : dets) {
    if (!padded.contains(d.box)) continue;
    Detection local = d;
    local.box = d.box.translated(-window.x0, -window.y0);
    out.push_back(std::move(local));
  }
  return out;
}

}  // namespace

std::shared_ptr<const StubBackend::Fixture> StubBackend::fixture_for(
    const std::string& image_ref) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(image_ref); it != cache_.end())
      return it->second;
  }

  std::ifstream in(image_ref, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture: " + image_ref);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("bad fixture JSON " + image_ref + ": " + e.what());
  }

  auto fx = std::make_shared<Fixture>();
  if (j.contains("layout")) fx->layout = parse_detections(j["layout"], "article");
  if (j.contains("lines")) parse_detection_map(j["lines"], "line", fx->lines);
  if (j.contains("words")) parse_detection_map(j["words"], "word", fx->words);
  if (j.contains("chars")) parse_detection_map(j["chars"], "char", fx->chars);
  if (j.contains("legibility")) {
    for (const auto& [key, value] : j["legibility"].items()) {
      if (!value.is_array() || value.size() != 3)
        throw std::runtime_error("legibility for " + key +
                                 " must be a 3-element array");
      fx->legibility[key] = {value[0].get<double>(), value[1].get<double>(),
                             value[2].get<double>()};
    }
  }
  if (j.contains("embeddings")) {
    for (const auto& [key, value] : j["embeddings"].items())
      fx->embeddings[key] = value.get<Embedding>();
  }
  if (j.contains("embeddings_file")) {
    const std::filesystem::path rel = j["embeddings_file"].get<std::string>();
    const std::filesystem::path base =
        std::filesystem::path(image_ref).parent_path();
    load_embedding_map((base / rel).string(), fx->embeddings);
  }

  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(image_ref, std::move(fx));
  return it->second;
}

BackendBoundaries StubBackend::boundaries() {
  BackendBoundaries b;
  b.detector.detect_layout = [this](const std::string& image_ref) {
    return fixture_for(image_ref)->layout;
  };
  b.detector.detect_lines = [this](const CropRef& crop) {
    const auto fx = fixture_for(crop.image_ref);
    auto it = fx->lines.find(crop.id);
    if (it == fx->lines.end()) return std::vector<Detection>{};
    return clip_to_crop(it->second, crop.box);
  };
  b.detector.detect_words = [this](const CropRef& crop) {
    const auto fx = fixture_for(crop.image_ref);
    auto it = fx->words.find(crop.id);
    if (it == fx->words.end()) return std::vector<Detection>{};
    return clip_to_crop(it->second, crop.box);
  };
  b.detector.detect_chars = [this](const CropRef& crop) {
    const auto fx = fixture_for(crop.image_ref);
    auto it = fx->chars.find(crop.id);
    if (it == fx->chars.end()) return std::vector<Detection>{};
    return clip_to_crop(it->second, crop.box);
  };
  b.encoder.embed_word = [this](const CropRef& crop) {
    const auto fx = fixture_for(crop.image_ref);
    auto it = fx->embeddings.find(crop.id);
    if (it == fx->embeddings.end())
      throw std::runtime_error("no embedding for crop: " + crop.id);
    return it->second;
  };
  b.encoder.embed_char = b.encoder.embed_word;
  b.legibility = [this](const CropRef& crop) -> std::optional<ProbTriple> {
    const auto fx = fixture_for(crop.image_ref);
    auto it = fx->legibility.find(crop.id);
    if (it == fx->legibility.end()) return std::nullopt;
    return it->second;
  };
  return b;
}

}  // namespace newsdig
