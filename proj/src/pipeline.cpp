#include "newsdig/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "json.hpp"

namespace newsdig {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

double round1(double v) {
  const double r = std::round(v * 10.0) / 10.0;
  return r == 0.0 ? 0.0 : r;
}

namespace {

std::string resolve_path(const fs::path& base_dir, const std::string& p) {
  if (p.empty()) return p;
  fs::path path(p);
  if (path.is_absolute()) return p;
  return (base_dir / path).lexically_normal().string();
}

OutputLevel parse_level(const std::string& s) {
  if (s == "article") return OutputLevel::article;
  if (s == "scan") return OutputLevel::scan;
  if (s == "both") return OutputLevel::both;
  throw std::runtime_error("unknown output level: " + s);
}

}  // namespace

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("bad config JSON " + path + ": " + e.what());
  }
  const fs::path base = fs::path(path).parent_path();

  PipelineConfig cfg;
  if (j.contains("geometry")) {
    const json& g = j["geometry"];
    cfg.geometry.tall_ratio = g.value("tall_ratio", cfg.geometry.tall_ratio);
    cfg.geometry.wide_ratio = g.value("wide_ratio", cfg.geometry.wide_ratio);
    cfg.geometry.split_overlap_frac =
        g.value("split_overlap_frac", cfg.geometry.split_overlap_frac);
    cfg.geometry.nms_iou = g.value("nms_iou", cfg.geometry.nms_iou);
    cfg.geometry.conf_threshold =
        g.value("conf_threshold", cfg.geometry.conf_threshold);
    cfg.geometry.max_detections =
        g.value("max_detections", cfg.geometry.max_detections);
  }
  if (j.contains("recognition")) {
    const json& r = j["recognition"];
    cfg.recognition.word_sim_threshold =
        r.value("word_sim_threshold", cfg.recognition.word_sim_threshold);
    cfg.recognition.embedding_dim =
        r.value("embedding_dim", cfg.recognition.embedding_dim);
  }
  if (j.contains("association")) {
    const json& a = j["association"];
    cfg.association.x_overlap_frac =
        a.value("x_overlap_frac", cfg.association.x_overlap_frac);
    cfg.association.max_above_frac =
        a.value("max_above_frac", cfg.association.max_above_frac);
    cfg.association.max_below_frac =
        a.value("max_below_frac", cfg.association.max_below_frac);
  }
  if (j.contains("legibility")) {
    const json& l = j["legibility"];
    if (l.contains("ocr_policy")) {
      cfg.legibility.ocr_policy = {false, false, false};
      for (const json& name : l["ocr_policy"]) {
        const auto cls = legibility_from_string(name.get<std::string>());
        if (!cls)
          throw std::runtime_error("unknown legibility class in ocr_policy");
        cfg.legibility.ocr_policy[static_cast<std::size_t>(*cls)] = true;
      }
    }
  }
  if (j.contains("spell")) {
    const json& s = j["spell"];
    cfg.spell.enabled = s.value("enabled", cfg.spell.enabled);
    cfg.spell.max_edit = s.value("max_edit", cfg.spell.max_edit);
    cfg.spell.lexicon_path = resolve_path(base, s.value("lexicon", ""));
  }
  cfg.word_index_path = resolve_path(base, j.value("word_index", ""));
  cfg.char_index_path = resolve_path(base, j.value("char_index", ""));
  cfg.lexicon_path = resolve_path(base, j.value("lexicon", ""));
  cfg.backend = j.value("backend", cfg.backend);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("level")) cfg.level = parse_level(j["level"].get<std::string>());
  return cfg;
}

std::vector<ScanInput> load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open manifest: " + path);
  const fs::path base = fs::path(path).parent_path();

  std::vector<ScanInput> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("manifest line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    ScanInput s;
    try {
      s.scan_id = j.at("scan_id").get<std::string>();
      s.lccn = j.value("lccn", "");
      s.date = j.value("date", "");
      s.edition = j.value("edition", 1);
      s.page_number = j.value("page_number", 1);
      s.width_px = j.at("width_px").get<int>();
      s.height_px = j.at("height_px").get<int>();
      s.image_ref = resolve_path(base, j.at("image_ref").get<std::string>());
    } catch (const json::exception& e) {
      throw std::runtime_error("manifest line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

BoundingBox clamp_to_page(const BoundingBox& b, double w, double h) {
  return {std::clamp(b.x0, 0.0, w), std::clamp(b.y0, 0.0, h),
          std::clamp(b.x1, 0.0, w), std::clamp(b.y1, 0.0, h)};
}

BoundingBox round_box(const BoundingBox& b) {
  return {round1(b.x0), round1(b.y0), round1(b.x1), round1(b.y1)};
}

// Spell-corrects one token, leaving its punctuation shell intact.
std::string correct_token(const std::string& token, const SpellIndex& spell) {
  std::size_t a = 0, b = token.size();
  while (a < b && std::ispunct(static_cast<unsigned char>(token[a]))) ++a;
  while (b > a && std::ispunct(static_cast<unsigned char>(token[b - 1]))) --b;
  if (a == b) return token;
  return token.substr(0, a) + spell.correct(token.substr(a, b - a)) +
         token.substr(b);
}

std::string correct_text(const std::string& text, const SpellIndex& spell) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i <= text.size()) {
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\n') ++j;
    out += correct_token(text.substr(i, j - i), spell);
    if (j == text.size()) break;
    out += text[j];
    i = j + 1;
  }
  return out;
}

std::vector<std::size_t> cap_survivors(const std::vector<Detection>& dets,
                                       std::vector<std::size_t> survivors,
                                       std::size_t max_detections) {
  if (survivors.size() <= max_detections) return survivors;
  std::vector<std::size_t> by_score = survivors;
  std::stable_sort(by_score.begin(), by_score.end(),
                   [&](std::size_t a, std::size_t b) {
                     return std::tie(dets[b].score, dets[a].box.y0,
                                     dets[a].box.x0, a) <
                            std::tie(dets[a].score, dets[b].box.y0,
                                     dets[b].box.x0, b);
                   });
  by_score.resize(max_detections);
  std::sort(by_score.begin(), by_score.end());
  return by_score;
}

}  // namespace

ScanResult run_scan(const ScanInput& input, const BackendBoundaries& boundaries,
                    const ExemplarIndex& word_index,
                    const ExemplarIndex& char_index, const SpellIndex* spell,
                    const PipelineConfig& cfg) {
  ScanResult result;
  PageScan& scan = result.scan;
  scan.scan_id = input.scan_id;
  scan.lccn = input.lccn;
  scan.date = input.date;
  scan.edition = input.edition;
  scan.page_number = input.page_number;
  scan.width_px = input.width_px;
  scan.height_px = input.height_px;

  const double page_w = static_cast<double>(input.width_px);
  const double page_h = static_cast<double>(input.height_px);

  std::vector<Detection> detections;
  try {
    detections = boundaries.detector.detect_layout(input.image_ref);
  } catch (const std::exception& e) {
    result.errors.push_back({input.scan_id, "detect_layout", e.what()});
    return result;
  }

  std::vector<Detection> confident;
  for (const Detection& d : detections)
    if (d.score >= cfg.geometry.conf_threshold) confident.push_back(d);
  const std::vector<std::size_t> kept = cap_survivors(
      confident, nms_survivors(confident, cfg.geometry.nms_iou),
      cfg.geometry.max_detections);

  std::map<std::string, std::size_t> class_ordinal;
  for (std::size_t idx : kept) {
    const Detection& d = confident[idx];
    const auto cls = content_class_from_string(d.label);
    if (!cls) {
      result.errors.push_back(
          {input.scan_id, "detect_layout", "unknown class label: " + d.label});
      continue;
    }
    const BoundingBox box = round_box(clamp_to_page(d.box, page_w, page_h));
    if (!box.valid()) {
      result.errors.push_back({input.scan_id, "detect_layout",
                               "degenerate box for a " + d.label +
                                   " detection"});
      continue;
    }
    ContentRegion r;
    r.id = input.scan_id + "-" + d.label + "-" +
           std::to_string(class_ordinal[d.label]++);
    r.box = box;
    r.cls = *cls;
    r.confidence = round1(d.score);
    scan.regions.push_back(std::move(r));
  }

  GateResult gate;
  try {
    gate = gate_regions(scan.regions, boundaries.legibility, input.image_ref,
                        cfg.legibility);
    for (const GateDiagnostic& d : gate.diagnostics)
      result.errors.push_back(
          {input.scan_id, "legibility", d.region_id + ": " + d.message});
  } catch (const std::exception& e) {
    result.errors.push_back({input.scan_id, "legibility", e.what()});
    gate.to_ocr.clear();
  }

  const WordProvider word_provider = [&](const CropRef& line_crop) {
    std::vector<std::pair<BoundingBox, std::vector<Detection>>> per_segment;
    for (const BoundingBox& segment :
         split_wide_line(line_crop.box, cfg.geometry)) {
      per_segment.push_back(
          {segment, boundaries.detector.detect_words(
                        CropRef{line_crop.id, line_crop.image_ref, segment})});
    }
    std::vector<Detection> merged = merge_split_lines(per_segment, cfg.geometry);
    for (Detection& d : merged)
      d.box = d.box.translated(-line_crop.box.x0, -line_crop.box.y0);
    return merged;
  };

  for (std::size_t idx : gate.to_ocr) {
    ContentRegion& region = scan.regions[idx];
    try {
      std::vector<std::pair<BoundingBox, std::vector<Detection>>> per_window;
      for (const BoundingBox& window :
           split_tall_region(region.box, cfg.geometry)) {
        per_window.push_back(
            {window, boundaries.detector.detect_lines(
                         CropRef{region.id, input.image_ref, window})});
      }
      // Window boxes carry page coordinates, so merged lines are page-level.
      for (const Detection& d : merge_split_lines(per_window, cfg.geometry))
        region.lines.push_back(round_box(clamp_to_page(d.box, page_w, page_h)));
      result.line_count += region.lines.size();

      std::string text = decode_region(
          region, input.image_ref, region.lines, word_provider, word_index,
          char_index, boundaries.encoder, boundaries.detector, cfg.recognition,
          &result.decode_stats);
      if (spell && cfg.spell.enabled &&
          (region.cls == ContentClass::article ||
           region.cls == ContentClass::caption)) {
        text = correct_text(text, *spell);
      }
      region.text = std::move(text);
    } catch (const std::exception& e) {
      result.errors.push_back(
          {input.scan_id, "ocr", region.id + ": " + e.what()});
    }
  }

  try {
    result.articles = associate_regions(scan, cfg.association).articles;
  } catch (const std::exception& e) {
    result.errors.push_back({input.scan_id, "associate", e.what()});
  }

  for (const Violation& v : validate_scan(scan)) {
    result.errors.push_back(
        {input.scan_id, "validate",
         v.field + (v.region_id.empty() ? "" : " [" + v.region_id + "]") +
             ": " + v.message});
  }
  return result;
}

namespace {

ordered_json box_to_json(const BoundingBox& b) {
  return ordered_json::array({b.x0, b.y0, b.x1, b.y1});
}

BoundingBox box_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
          j.at(3).get<double>()};
}

}  // namespace

std::string scan_to_json(const PageScan& scan) {
  ordered_json j;
  j["scan_id"] = scan.scan_id;
  j["lccn"] = scan.lccn;
  j["date"] = scan.date;
  j["edition"] = scan.edition;
  j["page_number"] = scan.page_number;
  j["width_px"] = scan.width_px;
  j["height_px"] = scan.height_px;
  j["regions"] = ordered_json::array();
  for (const ContentRegion& r : scan.regions) {
    ordered_json rj;
    rj["id"] = r.id;
    rj["class"] = to_string(r.cls);
    rj["box"] = box_to_json(r.box);
    rj["confidence"] = r.confidence;
    if (r.legibility)
      rj["legibility"] = to_string(*r.legibility);
    else
      rj["legibility"] = nullptr;
    if (!r.lines.empty()) {
      rj["lines"] = ordered_json::array();
      for (const BoundingBox& b : r.lines) rj["lines"].push_back(box_to_json(b));
    }
    if (r.text) rj["text"] = *r.text;
    j["regions"].push_back(std::move(rj));
  }
  return j.dump();
}

PageScan scan_from_json(const std::string& line) {
  const json j = json::parse(line);
  PageScan scan;
  scan.scan_id = j.at("scan_id").get<std::string>();
  scan.lccn = j.at("lccn").get<std::string>();
  scan.date = j.at("date").get<std::string>();
  scan.edition = j.at("edition").get<int>();
  scan.page_number = j.at("page_number").get<int>();
  scan.width_px = j.at("width_px").get<int>();
  scan.height_px = j.at("height_px").get<int>();
  for (const json& rj : j.at("regions")) {
    ContentRegion r;
    r.id = rj.at("id").get<std::string>();
    const auto cls = content_class_from_string(rj.at("class").get<std::string>());
    if (!cls) throw std::runtime_error("unknown region class in record");
    r.cls = *cls;
    r.box = box_from_json(rj.at("box"));
    r.confidence = rj.at("confidence").get<double>();
    if (!rj.at("legibility").is_null()) {
      const auto leg =
          legibility_from_string(rj.at("legibility").get<std::string>());
      if (!leg) throw std::runtime_error("unknown legibility in record");
      r.legibility = *leg;
    }
    if (rj.contains("lines"))
      for (const json& b : rj["lines"]) r.lines.push_back(box_from_json(b));
    if (rj.contains("text")) r.text = rj["text"].get<std::string>();
    scan.regions.push_back(std::move(r));
  }
  return scan;
}

std::string article_to_json(const ArticleRecord& rec) {
  ordered_json j;
  j["scan_id"] = rec.scan_id;
  j["lccn"] = rec.lccn;
  j["date"] = rec.date;
  j["edition"] = rec.edition;
  j["page_number"] = rec.page_number;
  if (rec.headline)
    j["headline"] = *rec.headline;
  else
    j["headline"] = nullptr;
  if (rec.byline)
    j["byline"] = *rec.byline;
  else
    j["byline"] = nullptr;
  j["article_text"] = rec.article_text;
  j["source_region_ids"] = rec.source_region_ids;
  return j.dump();
}

ArticleRecord article_from_json(const std::string& line) {
  const json j = json::parse(line);
  ArticleRecord rec;
  rec.scan_id = j.at("scan_id").get<std::string>();
  rec.lccn = j.at("lccn").get<std::string>();
  rec.date = j.at("date").get<std::string>();
  rec.edition = j.at("edition").get<int>();
  rec.page_number = j.at("page_number").get<int>();
  if (!j.at("headline").is_null())
    rec.headline = j["headline"].get<std::string>();
  if (!j.at("byline").is_null()) rec.byline = j["byline"].get<std::string>();
  rec.article_text = j.at("article_text").get<std::string>();
  rec.source_region_ids =
      j.at("source_region_ids").get<std::vector<std::string>>();
  return rec;
}

namespace {

template <typename T, typename F>
void write_jsonl(const std::vector<T>& items, const std::string& path, F to_line) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write: " + path);
  for (const T& item : items) out << to_line(item) << '\n';
}

template <typename F>
auto load_jsonl(const std::string& path, F from_line)
    -> std::vector<decltype(from_line(std::string()))> {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::vector<decltype(from_line(std::string()))> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(from_line(line));
  }
  return out;
}

}  // namespace

void write_scan_records(const std::vector<PageScan>& scans,
                        const std::string& path) {
  write_jsonl(scans, path, scan_to_json);
}

void write_article_records(const std::vector<ArticleRecord>& records,
                           const std::string& path) {
  write_jsonl(records, path, article_to_json);
}

std::vector<PageScan> load_scan_records(const std::string& path) {
  return load_jsonl(path, scan_from_json);
}

std::vector<ArticleRecord> load_article_records(const std::string& path) {
  return load_jsonl(path, article_from_json);
}

std::string BatchSummary::to_json() const {
  ordered_json j;
  j["scans_processed"] = scans_processed;
  j["scans_failed"] = scans_failed;
  j["article_count"] = article_count;
  j["line_count"] = line_count;
  j["regions_by_class"] = ordered_json::object();
  for (const auto& [cls, n] : regions_by_class) j["regions_by_class"][cls] = n;
  j["legibility_histogram"] = ordered_json::object();
  for (const auto& [cls, n] : legibility_histogram)
    j["legibility_histogram"][cls] = n;
  j["error_count"] = ledger.size();
  return j.dump(2);
}

BatchSummary run_batch(const std::string& manifest_path,
                       const PipelineConfig& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();

  if (cfg.backend != "stub" && cfg.backend != "files")
    throw std::runtime_error("unknown backend: " + cfg.backend);
  if (cfg.word_index_path.empty() || cfg.char_index_path.empty())
    throw std::runtime_error("config must set word_index and char_index");

  const ExemplarIndex word_index = ExemplarIndex::load(cfg.word_index_path);
  const ExemplarIndex char_index = ExemplarIndex::load(cfg.char_index_path);
  if (cfg.recognition.embedding_dim != 0 &&
      (word_index.dim() != cfg.recognition.embedding_dim ||
       char_index.dim() != cfg.recognition.embedding_dim))
    throw std::runtime_error("index dimension disagrees with embedding_dim");

  // Startup probe: a stored exemplar must retrieve itself.
  for (const ExemplarIndex* idx : {&word_index, &char_index}) {
    const ExemplarIndex::Hit hit = idx->nearest(idx->row(0));
    if (hit.row != 0 || hit.similarity < 0.999)
      throw std::runtime_error("index self-test failed");
  }

  std::optional<SpellIndex> spell;
  std::optional<Lexicon> lexicon;
  if (!cfg.lexicon_path.empty()) lexicon = Lexicon::load(cfg.lexicon_path);
  if (cfg.spell.enabled) {
    if (!cfg.spell.lexicon_path.empty()) {
      spell.emplace(Lexicon::load(cfg.spell.lexicon_path), cfg.spell.max_edit);
    } else if (lexicon) {
      spell.emplace(*lexicon, cfg.spell.max_edit);
    } else {
      throw std::runtime_error("spellcheck enabled but no lexicon configured");
    }
  }

  const std::vector<ScanInput> manifest = load_manifest(manifest_path);

  StubBackend backend;
  const BackendBoundaries boundaries = backend.boundaries();

  std::vector<ScanResult> results(manifest.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= manifest.size()) return;
      try {
        results[i] = run_scan(manifest[i], boundaries, word_index, char_index,
                              spell ? &*spell : nullptr, cfg);
      } catch (const std::exception& e) {
        results[i].scan.scan_id = manifest[i].scan_id;
        results[i].errors.push_back({manifest[i].scan_id, "scan", e.what()});
      }
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min(cfg.workers, manifest.size() + 1));
  std::vector<std::thread> threads;
  for (std::size_t w = 1; w < workers; ++w) threads.emplace_back(work);
  work();
  for (std::thread& t : threads) t.join();

  BatchSummary summary;
  summary.scans_processed = manifest.size();
  std::vector<PageScan> scans;
  std::vector<ArticleRecord> articles;
  for (const ScanResult& r : results) {
    scans.push_back(r.scan);
    articles.insert(articles.end(), r.articles.begin(), r.articles.end());
    summary.ledger.insert(summary.ledger.end(), r.errors.begin(),
                          r.errors.end());
    if (!r.errors.empty()) ++summary.scans_failed;
    summary.line_count += r.line_count;
    for (const ContentRegion& region : r.scan.regions) {
      ++summary.regions_by_class[to_string(region.cls)];
      if (region.legibility)
        ++summary.legibility_histogram[to_string(*region.legibility)];
    }
  }
  summary.article_count = articles.size();

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  if (cfg.level != OutputLevel::scan)
    write_article_records(articles, (out / "articles.jsonl").string());
  if (cfg.level != OutputLevel::article)
    write_scan_records(scans, (out / "scans.jsonl").string());
  write_jsonl(summary.ledger, (out / "errors.jsonl").string(),
              [](const LedgerEntry& e) {
                ordered_json j;
                j["scan_id"] = e.scan_id;
                j["stage"] = e.stage;
                j["message"] = e.message;
                return j.dump();
              });
  {
    std::ofstream sf((out / "summary.json").string(), std::ios::binary);
    if (!sf) throw std::runtime_error("cannot write summary.json");
    sf << summary.to_json() << '\n';
  }

  const auto t1 = std::chrono::steady_clock::now();
  summary.elapsed_sec = std::chrono::duration<double>(t1 - t0).count();
  if (summary.elapsed_sec > 0.0) {
    summary.scans_per_sec =
        static_cast<double>(summary.scans_processed) / summary.elapsed_sec;
    summary.lines_per_sec =
        static_cast<double>(summary.line_count) / summary.elapsed_sec;
  }
  return summary;
}

namespace {

struct EvalRow {
  std::string id;
  std::string cls;
  std::string text;
};

std::vector<EvalRow> load_eval_rows(const std::string& path) {
  return load_jsonl(path, [](const std::string& line) {
    const json j = json::parse(line);
    EvalRow row;
    row.id = j.at("id").get<std::string>();
    row.cls = j.value("class", "");
    row.text = j.at("text").get<std::string>();
    return row;
  });
}

// Predictions reordered to match the gold ids exactly.
std::vector<std::string> align_to(const std::vector<EvalRow>& gold,
                                  const std::vector<EvalRow>& rows,
                                  const std::string& what) {
  std::map<std::string, const EvalRow*> by_id;
  for (const EvalRow& r : rows) {
    if (!by_id.emplace(r.id, &r).second)
      throw std::runtime_error(what + ": duplicate id " + r.id);
  }
  if (rows.size() != gold.size())
    throw std::runtime_error(what + ": row count differs from gold");
  std::vector<std::string> out;
  out.reserve(gold.size());
  for (const EvalRow& g : gold) {
    auto it = by_id.find(g.id);
    if (it == by_id.end())
      throw std::runtime_error(what + ": missing id " + g.id);
    out.push_back(it->second->text);
  }
  return out;
}

}  // namespace

EvalReport evaluate_files(const std::string& pred_path,
                          const std::string& gold_path,
                          const std::string& ref_seg_path,
                          const Lexicon* lexicon) {
  const std::vector<EvalRow> gold = load_eval_rows(gold_path);
  if (gold.empty()) throw std::runtime_error("gold file has no rows");
  const std::vector<std::string> preds =
      align_to(gold, load_eval_rows(pred_path), "pred");

  std::vector<std::string> refs;
  refs.reserve(gold.size());
  for (const EvalRow& g : gold) refs.push_back(g.text);

  EvalReport report;
  report.pair_count = gold.size();
  report.cer_total = cer(preds, refs);

  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < gold.size(); ++i)
    if (!gold[i].cls.empty()) by_class[gold[i].cls].push_back(i);
  for (const auto& [cls, idxs] : by_class) {
    std::vector<std::string> p, r;
    for (std::size_t i : idxs) {
      p.push_back(preds[i]);
      r.push_back(refs[i]);
    }
    report.cer_by_class[cls] = cer(p, r);
    if (lexicon) {
      std::string joined;
      for (const std::string& text : p) {
        if (!joined.empty()) joined += '\n';
        joined += text;
      }
      report.non_word_rate_by_class[cls] = non_word_rate(joined, *lexicon);
    }
  }

  if (!ref_seg_path.empty()) {
    const std::vector<std::string> seg =
        align_to(gold, load_eval_rows(ref_seg_path), "ref-seg");
    report.decomposition = cer_decomposition(preds, seg, refs);
  }
  return report;
}

void build_index_file(const std::string& exemplars_path,
                      const std::string& out_path, IndexKind kind) {
  std::ifstream in(exemplars_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open exemplars: " + exemplars_path);
  std::vector<std::string> labels;
  std::vector<Embedding> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("exemplar line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    labels.push_back(j.at("label").get<std::string>());
    rows.push_back(j.at("embedding").get<Embedding>());
  }
  ExemplarIndex::build(kind, std::move(labels), rows).save(out_path);
}

namespace {

// term[\tnumber] lines; '#' comments; returns rows in file order.
std::vector<std::pair<std::string, std::uint64_t>> load_term_rows(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open term file: " + path);
  std::vector<std::pair<std::string, std::uint64_t>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t tab = line.find('\t');
    std::uint64_t freq = 0;
    std::string term = line;
    if (tab != std::string::npos) {
      term = line.substr(0, tab);
      try {
        freq = std::stoull(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("bad count in term line: " + line);
      }
    }
    if (!term.empty()) out.push_back({std::move(term), freq});
  }
  return out;
}

}  // namespace

Lexicon build_dictionary_files(const std::string& modern_path,
                               const std::string& historical_path,
                               const std::string& extras_path,
                               const DictionaryConfig& cfg,
                               DictionaryBuildStats* stats) {
  std::vector<std::pair<std::string, std::uint64_t>> modern;
  std::set<std::string> seen;
  for (auto& [term, freq] : load_term_rows(modern_path))
    if (seen.insert(term).second) modern.push_back({term, freq});

  std::map<std::string, std::uint64_t> historical;
  for (const auto& [term, count] : load_term_rows(historical_path))
    historical[term] += count;

  std::vector<std::string> extras;
  for (const auto& row : load_term_rows(extras_path))
    extras.push_back(row.first);

  return build_ocr_dictionary(modern, historical, extras, cfg, stats);
}

}  // namespace newsdig
