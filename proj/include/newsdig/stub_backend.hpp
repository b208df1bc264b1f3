#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "newsdig/legibility.hpp"
#include "newsdig/recognition.hpp"

namespace newsdig {

struct BackendBoundaries {
  DetectorBoundary detector;
  EncoderBoundary encoder;
  LegibilityScorer legibility;
};

// File-backed boundaries: each scan's image_ref names a JSON fixture holding
// precomputed detections and embeddings. This doubles as the contract for an
// external inference process, which writes the same shape per scan:
//
//   {
//     "layout":     [{"box": [x0,y0,x1,y1], "class": "article", "score": 0.9}, ...],
//     "lines":      {"<region_id>": [{"box": [...], "score": 0.8}, ...]},
//     "words":      {"<line_id>":   [{"box": [...], "score": 0.8}, ...]},
//     "chars":      {"<word_id>":   [{"box": [...], "score": 0.8}, ...]},
//     "legibility": {"<region_id>": [p_legible, p_borderline, p_illegible]},
//     "embeddings": {"<crop_id>": [f, ...]},
//     "embeddings_file": "optional/sibling.embmap"
//   }
//
// All boxes are in page coordinates; detector callbacks filter to the
// requested crop and return crop-local boxes. Embedding lookups are by crop
// id. The optional embeddings_file (path relative to the fixture) is a binary
// map: magic "EMBMP1", dim u32, count u32, then per record a u32-length
// UTF-8 id and dim little-endian float32 values; it merges under "embeddings".
class StubBackend {
 public:
  StubBackend() = default;

  // Callbacks keep a reference to this backend; it must outlive them.
  BackendBoundaries boundaries();

 private:
  struct Fixture;

  std::shared_ptr<const Fixture> fixture_for(const std::string& image_ref);

  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const Fixture>> cache_;
};

}  // namespace newsdig
