#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "newsdig/association.hpp"
#include "newsdig/domain.hpp"
#include "newsdig/geometry.hpp"
#include "newsdig/legibility.hpp"
#include "newsdig/lexicon.hpp"
#include "newsdig/metrics.hpp"
#include "newsdig/recognition.hpp"
#include "newsdig/stub_backend.hpp"

namespace newsdig {

enum class OutputLevel { article, scan, both };

struct SpellConfig {
  bool enabled = true;
  int max_edit = 2;
  // Separate correction lexicon; empty means reuse the main lexicon.
  std::string lexicon_path;
};

struct PipelineConfig {
  GeometryConfig geometry;
  RecognitionConfig recognition;
  AssociationConfig association;
  LegibilityConfig legibility;
  SpellConfig spell;
  std::string word_index_path;
  std::string char_index_path;
  std::string lexicon_path;  // for non-word rates and default spell lexicon
  std::string backend = "stub";
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  OutputLevel level = OutputLevel::both;

  // JSON file; relative paths resolve against the config file's directory.
  static PipelineConfig load(const std::string& path);
};

// One manifest row. image_ref is opaque to the engine and handed to the
// backend (for the stub backend, a fixture path relative to the manifest).
struct ScanInput {
  std::string scan_id;
  std::string lccn;
  std::string date;
  int edition = 1;
  int page_number = 1;
  int width_px = 0;
  int height_px = 0;
  std::string image_ref;
};

std::vector<ScanInput> load_manifest(const std::string& path);

struct LedgerEntry {
  std::string scan_id;
  std::string stage;
  std::string message;
};

struct ScanResult {
  PageScan scan;
  std::vector<ArticleRecord> articles;
  std::vector<LedgerEntry> errors;
  DecodeStats decode_stats;
  std::size_t line_count = 0;
};

// Full single-scan sequence: detect, filter, split, gate, decode, correct,
// associate, validate. Never throws for per-scan faults; they land in
// result.errors and the affected stage degrades to empty output.
ScanResult run_scan(const ScanInput& input, const BackendBoundaries& boundaries,
                    const ExemplarIndex& word_index,
                    const ExemplarIndex& char_index, const SpellIndex* spell,
                    const PipelineConfig& cfg);

struct BatchSummary {
  std::size_t scans_processed = 0;
  std::size_t scans_failed = 0;  // scans with at least one ledger entry
  std::size_t article_count = 0;
  std::size_t line_count = 0;
  std::map<std::string, std::size_t> regions_by_class;
  std::map<std::string, std::size_t> legibility_histogram;
  std::vector<LedgerEntry> ledger;
  double elapsed_sec = 0.0;
  double scans_per_sec = 0.0;
  double lines_per_sec = 0.0;

  std::string to_json() const;
};

// Processes every manifest row with a bounded worker pool and writes
// articles.jsonl, scans.jsonl, errors.jsonl and summary.json under out_dir.
// Outputs are byte-identical for any worker count.
BatchSummary run_batch(const std::string& manifest_path,
                       const PipelineConfig& cfg, const std::string& out_dir);

// Serialization. Keys emit in a fixed documented order; box coordinates and
// confidences round to one decimal; records round-trip through the loaders.
std::string scan_to_json(const PageScan& scan);
PageScan scan_from_json(const std::string& line);
std::string article_to_json(const ArticleRecord& rec);
ArticleRecord article_from_json(const std::string& line);

void write_scan_records(const std::vector<PageScan>& scans,
                        const std::string& path);
void write_article_records(const std::vector<ArticleRecord>& records,
                           const std::string& path);
std::vector<PageScan> load_scan_records(const std::string& path);
std::vector<ArticleRecord> load_article_records(const std::string& path);

double round1(double v);

// Text evaluation over JSONL files of {"id", "text"} rows with an optional
// "class" field; pred and gold match by id. ref_seg_path, when nonempty,
// holds OCR output on reference segmentation and enables the decomposition.
EvalReport evaluate_files(const std::string& pred_path,
                          const std::string& gold_path,
                          const std::string& ref_seg_path = "",
                          const Lexicon* lexicon = nullptr);

// Exemplar JSONL ({"label", "embedding"} rows) to an EXIDX1 file.
void build_index_file(const std::string& exemplars_path,
                      const std::string& out_path, IndexKind kind);

// Dictionary construction from term files (modern order = frequency rank).
Lexicon build_dictionary_files(const std::string& modern_path,
                               const std::string& historical_path,
                               const std::string& extras_path,
                               const DictionaryConfig& cfg,
                               DictionaryBuildStats* stats = nullptr);

}  // namespace newsdig
