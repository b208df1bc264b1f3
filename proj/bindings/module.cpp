// Python bindings for the digitization core.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "newsdig/association.hpp"
#include "newsdig/domain.hpp"
#include "newsdig/geometry.hpp"
#include "newsdig/legibility.hpp"
#include "newsdig/lexicon.hpp"
#include "newsdig/metrics.hpp"
#include "newsdig/pipeline.hpp"
#include "newsdig/recognition.hpp"
#include "newsdig/stub_backend.hpp"
#include "newsdig/trainmath.hpp"
#include "newsdig/unicode.hpp"

namespace py = pybind11;
using namespace newsdig;

namespace {

void bind_domain(py::module_& m) {
  py::class_<BoundingBox>(m, "BoundingBox")
      .def(py::init<>())
      .def(py::init([](double x0, double y0, double x1, double y1) {
             return BoundingBox{x0, y0, x1, y1};
           }),
           py::arg("x0"), py::arg("y0"), py::arg("x1"), py::arg("y1"))
      .def_readwrite("x0", &BoundingBox::x0)
      .def_readwrite("y0", &BoundingBox::y0)
      .def_readwrite("x1", &BoundingBox::x1)
      .def_readwrite("y1", &BoundingBox::y1)
      .def("width", &BoundingBox::width)
      .def("height", &BoundingBox::height)
      .def("area", &BoundingBox::area)
      .def("valid", &BoundingBox::valid)
      .def("contains", &BoundingBox::contains, py::arg("other"))
      .def("translated", &BoundingBox::translated, py::arg("dx"), py::arg("dy"))
      .def("expanded", &BoundingBox::expanded, py::arg("dx"), py::arg("dy"))
      .def("__eq__",
           [](const BoundingBox& a, const BoundingBox& b) { return a == b; })
      .def("__repr__", [](const BoundingBox& b) {
        return "BoundingBox(" + std::to_string(b.x0) + ", " +
               std::to_string(b.y0) + ", " + std::to_string(b.x1) + ", " +
               std::to_string(b.y1) + ")";
      });

  py::enum_<ContentClass>(m, "ContentClass")
      .value("article", ContentClass::article)
      .value("headline", ContentClass::headline)
      .value("caption", ContentClass::caption)
      .value("byline", ContentClass::byline)
      .value("image", ContentClass::image)
      .value("ad", ContentClass::ad)
      .value("table", ContentClass::table)
      .value("header", ContentClass::header)
      .value("page_number", ContentClass::page_number)
      .value("masthead", ContentClass::masthead);

  py::enum_<LegibilityClass>(m, "LegibilityClass")
      .value("legible", LegibilityClass::legible)
      .value("borderline", LegibilityClass::borderline)
      .value("illegible", LegibilityClass::illegible);

  m.def("content_class_to_string",
        [](ContentClass c) { return std::string(to_string(c)); });
  m.def("content_class_from_string", &content_class_from_string);
  m.def("is_text_class", &is_text_class);

  py::class_<ContentRegion>(m, "ContentRegion")
      .def(py::init<>())
      .def_readwrite("id", &ContentRegion::id)
      .def_readwrite("box", &ContentRegion::box)
      .def_readwrite("cls", &ContentRegion::cls)
      .def_readwrite("confidence", &ContentRegion::confidence)
      .def_readwrite("legibility", &ContentRegion::legibility)
      .def_readwrite("lines", &ContentRegion::lines)
      .def_readwrite("text", &ContentRegion::text)
      .def("__eq__",
           [](const ContentRegion& a, const ContentRegion& b) { return a == b; });

  py::class_<PageScan>(m, "PageScan")
      .def(py::init<>())
      .def_readwrite("scan_id", &PageScan::scan_id)
      .def_readwrite("lccn", &PageScan::lccn)
      .def_readwrite("date", &PageScan::date)
      .def_readwrite("edition", &PageScan::edition)
      .def_readwrite("page_number", &PageScan::page_number)
      .def_readwrite("width_px", &PageScan::width_px)
      .def_readwrite("height_px", &PageScan::height_px)
      .def_readwrite("regions", &PageScan::regions)
      .def("__eq__", [](const PageScan& a, const PageScan& b) { return a == b; });

  py::class_<CropRef>(m, "CropRef")
      .def(py::init<>())
      .def(py::init([](std::string id, std::string image_ref, BoundingBox box) {
             return CropRef{std::move(id), std::move(image_ref), box};
           }),
           py::arg("id"), py::arg("image_ref"), py::arg("box"))
      .def_readwrite("id", &CropRef::id)
      .def_readwrite("image_ref", &CropRef::image_ref)
      .def_readwrite("box", &CropRef::box);

  py::class_<Violation>(m, "Violation")
      .def_readwrite("field", &Violation::field)
      .def_readwrite("region_id", &Violation::region_id)
      .def_readwrite("message", &Violation::message);

  m.def("validate_scan", &validate_scan, py::arg("scan"));
  m.def("utf8_decode", [](const std::string& s) {
    std::u32string d = utf8_decode(s);
    return std::vector<std::uint32_t>(d.begin(), d.end());
  });
}

void bind_geometry(py::module_& m) {
  py::class_<GeometryConfig>(m, "GeometryConfig")
      .def(py::init<>())
      .def_readwrite("tall_ratio", &GeometryConfig::tall_ratio)
      .def_readwrite("wide_ratio", &GeometryConfig::wide_ratio)
      .def_readwrite("split_overlap_frac", &GeometryConfig::split_overlap_frac)
      .def_readwrite("nms_iou", &GeometryConfig::nms_iou)
      .def_readwrite("conf_threshold", &GeometryConfig::conf_threshold)
      .def_readwrite("max_detections", &GeometryConfig::max_detections);

  py::class_<Detection>(m, "Detection")
      .def(py::init<>())
      .def(py::init([](BoundingBox box, std::string label, double score) {
             return Detection{box, std::move(label), score};
           }),
           py::arg("box"), py::arg("label"), py::arg("score") = 0.0)
      .def_readwrite("box", &Detection::box)
      .def_readwrite("label", &Detection::label)
      .def_readwrite("score", &Detection::score)
      .def("__eq__",
           [](const Detection& a, const Detection& b) { return a == b; });

  py::class_<GroundTruth>(m, "GroundTruth")
      .def(py::init<>())
      .def(py::init([](BoundingBox box, std::string label) {
             return GroundTruth{box, std::move(label)};
           }),
           py::arg("box"), py::arg("label"))
      .def_readwrite("box", &GroundTruth::box)
      .def_readwrite("label", &GroundTruth::label);

  m.def("intersection_area", &intersection_area);
  m.def("iou", &iou);
  m.def("nms", &nms, py::arg("detections"), py::arg("iou_thresh"));
  m.def("nms_survivors", &nms_survivors, py::arg("detections"),
        py::arg("iou_thresh"));
  m.def("split_tall_region", &split_tall_region, py::arg("region"),
        py::arg("cfg") = GeometryConfig{});
  m.def("split_wide_line", &split_wide_line, py::arg("line"),
        py::arg("cfg") = GeometryConfig{});
  m.def("merge_split_lines", &merge_split_lines, py::arg("per_window"),
        py::arg("cfg") = GeometryConfig{});
  m.def("mean_average_precision", &mean_average_precision, py::arg("preds"),
        py::arg("gts"));
  m.def("average_precision", &average_precision, py::arg("preds"),
        py::arg("gts"), py::arg("label"), py::arg("iou_thresh"));
}

void bind_metrics(py::module_& m) {
  m.def("levenshtein", &levenshtein, py::arg("a"), py::arg("b"));
  m.def("cer", &cer, py::arg("predictions"), py::arg("references"));

  py::class_<CerDecomposition>(m, "CerDecomposition")
      .def_readonly("cer_total", &CerDecomposition::cer_total)
      .def_readonly("cer_ocr", &CerDecomposition::cer_ocr)
      .def_readonly("cer_layout", &CerDecomposition::cer_layout)
      .def_readonly("clamped", &CerDecomposition::clamped);

  m.def("cer_decomposition", &cer_decomposition, py::arg("full_predictions"),
        py::arg("reference_seg_predictions"), py::arg("references"));

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("cer_total", &EvalReport::cer_total)
      .def_readonly("cer_by_class", &EvalReport::cer_by_class)
      .def_readonly("non_word_rate_by_class", &EvalReport::non_word_rate_by_class)
      .def_readonly("decomposition", &EvalReport::decomposition)
      .def_readonly("pair_count", &EvalReport::pair_count)
      .def("to_json", &EvalReport::to_json);
}

void bind_lexicon(py::module_& m) {
  py::enum_<TermProvenance>(m, "TermProvenance")
      .value("modern", TermProvenance::modern)
      .value("historical_added", TermProvenance::historical_added)
      .value("extra", TermProvenance::extra);

  py::class_<Term>(m, "Term")
      .def(py::init([](std::string text, TermProvenance provenance,
                       std::uint64_t frequency) {
             return Term{std::move(text), provenance, frequency};
           }),
           py::arg("text"), py::arg("provenance") = TermProvenance::modern,
           py::arg("frequency") = 0)
      .def_readwrite("text", &Term::text)
      .def_readwrite("provenance", &Term::provenance)
      .def_readwrite("frequency", &Term::frequency)
      .def("__eq__", [](const Term& a, const Term& b) { return a == b; });

  py::class_<Lexicon>(m, "Lexicon")
      .def(py::init<>())
      .def("add", &Lexicon::add, py::arg("term"))
      .def("contains", &Lexicon::contains, py::arg("text"))
      .def("contains_ci", &Lexicon::contains_ci, py::arg("text"))
      .def("__contains__",
           [](const Lexicon& lx, const std::string& t) { return lx.contains(t); })
      .def("__len__", &Lexicon::size)
      .def("terms", &Lexicon::terms)
      .def_static("load", &Lexicon::load, py::arg("path"))
      .def("save", &Lexicon::save, py::arg("path"));

  py::class_<DictionaryConfig>(m, "DictionaryConfig")
      .def(py::init<>())
      .def_readwrite("modern_top_k", &DictionaryConfig::modern_top_k)
      .def_readwrite("historical_top_k", &DictionaryConfig::historical_top_k)
      .def_readwrite("emit_case_forms", &DictionaryConfig::emit_case_forms);

  py::class_<DictionaryBuildStats>(m, "DictionaryBuildStats")
      .def_readonly("modern_kept", &DictionaryBuildStats::modern_kept)
      .def_readonly("modern_dropped", &DictionaryBuildStats::modern_dropped)
      .def_readonly("historical_added", &DictionaryBuildStats::historical_added)
      .def_readonly("extras_added", &DictionaryBuildStats::extras_added)
      .def_readonly("base_terms", &DictionaryBuildStats::base_terms)
      .def_readonly("rows", &DictionaryBuildStats::rows);

  m.def(
      "build_ocr_dictionary",
      [](const std::vector<std::pair<std::string, std::uint64_t>>& modern,
         const std::map<std::string, std::uint64_t>& historical,
         const std::vector<std::string>& extras, const DictionaryConfig& cfg) {
        DictionaryBuildStats stats;
        Lexicon lx = build_ocr_dictionary(modern, historical, extras, cfg, &stats);
        return py::make_tuple(std::move(lx), stats);
      },
      py::arg("modern_ranked"), py::arg("historical_counts"), py::arg("extras"),
      py::arg("cfg") = DictionaryConfig{});

  m.def("non_word_rate", &non_word_rate, py::arg("text"), py::arg("lexicon"));

  py::class_<SpellIndex>(m, "SpellIndex")
      .def(py::init<const Lexicon&, int>(), py::arg("lexicon"),
           py::arg("max_edit") = 2)
      .def("correct", &SpellIndex::correct, py::arg("token"))
      .def("max_edit", &SpellIndex::max_edit);
}

void bind_legibility(py::module_& m) {
  m.def("is_valid_prob_triple", &is_valid_prob_triple, py::arg("p"),
        py::arg("tol") = 1e-6);
  m.def("classify_legibility", &classify_legibility, py::arg("p"));
  m.def("weighted_cross_entropy", &weighted_cross_entropy, py::arg("p"),
        py::arg("truth"), py::arg("weights") = kLegibilityWeights);
  m.attr("LEGIBILITY_WEIGHTS") =
      py::make_tuple(kLegibilityWeights[0], kLegibilityWeights[1],
                     kLegibilityWeights[2]);

  py::class_<LegibilityConfig>(m, "LegibilityConfig")
      .def(py::init<>())
      .def_readwrite("class_weights", &LegibilityConfig::class_weights)
      .def_readwrite("ocr_policy", &LegibilityConfig::ocr_policy)
      .def_readwrite("gate_only_text_classes",
                     &LegibilityConfig::gate_only_text_classes);

  py::class_<GateDiagnostic>(m, "GateDiagnostic")
      .def_readonly("region_id", &GateDiagnostic::region_id)
      .def_readonly("message", &GateDiagnostic::message);

  py::class_<GateResult>(m, "GateResult")
      .def_readonly("to_ocr", &GateResult::to_ocr)
      .def_readonly("skipped", &GateResult::skipped)
      .def_readonly("diagnostics", &GateResult::diagnostics);

  m.def(
      "gate_regions",
      [](std::vector<ContentRegion> regions, const LegibilityScorer& scorer,
         const std::string& image_ref, const LegibilityConfig& cfg) {
        GateResult result = gate_regions(regions, scorer, image_ref, cfg);
        return py::make_tuple(std::move(regions), std::move(result));
      },
      py::arg("regions"), py::arg("scorer"), py::arg("image_ref"),
      py::arg("cfg") = LegibilityConfig{},
      "Returns (annotated_regions, gate_result).");

  py::class_<ConfusionMatrix>(m, "ConfusionMatrix")
      .def(py::init<>())
      .def("add", &ConfusionMatrix::add, py::arg("truth"), py::arg("predicted"))
      .def("count", &ConfusionMatrix::count, py::arg("truth"),
           py::arg("predicted"))
      .def("total", &ConfusionMatrix::total)
      .def("legible_as_illegible", &ConfusionMatrix::legible_as_illegible)
      .def("illegible_as_legible", &ConfusionMatrix::illegible_as_legible)
      .def("accuracy", &ConfusionMatrix::accuracy);
}

void bind_recognition(py::module_& m) {
  m.def("dot", &dot);
  m.def("norm", &norm);
  m.def("normalized", &normalized);

  py::enum_<IndexKind>(m, "IndexKind")
      .value("word", IndexKind::word)
      .value("character", IndexKind::character);

  py::class_<ExemplarIndex> idx(m, "ExemplarIndex");
  py::class_<ExemplarIndex::Hit>(idx, "Hit")
      .def_readonly("row", &ExemplarIndex::Hit::row)
      .def_readonly("similarity", &ExemplarIndex::Hit::similarity)
      .def_readonly("label", &ExemplarIndex::Hit::label);
  idx.def_static("build", &ExemplarIndex::build, py::arg("kind"),
                 py::arg("labels"), py::arg("embeddings"))
      .def_static("load", &ExemplarIndex::load, py::arg("path"))
      .def("save", &ExemplarIndex::save, py::arg("path"))
      .def("nearest", &ExemplarIndex::nearest, py::arg("query"))
      .def("k_nearest", &ExemplarIndex::k_nearest, py::arg("query"),
           py::arg("k"))
      .def("__len__", &ExemplarIndex::size)
      .def("dim", &ExemplarIndex::dim)
      .def("kind", &ExemplarIndex::kind)
      .def("label", &ExemplarIndex::label, py::arg("row"))
      .def("row", &ExemplarIndex::row, py::arg("row"));

  py::class_<EncoderBoundary>(m, "EncoderBoundary")
      .def(py::init<>())
      .def_readwrite("embed_word", &EncoderBoundary::embed_word)
      .def_readwrite("embed_char", &EncoderBoundary::embed_char);

  py::class_<DetectorBoundary>(m, "DetectorBoundary")
      .def(py::init<>())
      .def_readwrite("detect_layout", &DetectorBoundary::detect_layout)
      .def_readwrite("detect_lines", &DetectorBoundary::detect_lines)
      .def_readwrite("detect_words", &DetectorBoundary::detect_words)
      .def_readwrite("detect_chars", &DetectorBoundary::detect_chars);

  py::class_<RecognitionConfig>(m, "RecognitionConfig")
      .def(py::init<>())
      .def_readwrite("word_sim_threshold", &RecognitionConfig::word_sim_threshold)
      .def_readwrite("embedding_dim", &RecognitionConfig::embedding_dim);

  py::class_<DecodeStats>(m, "DecodeStats")
      .def(py::init<>())
      .def_readwrite("word_hits", &DecodeStats::word_hits)
      .def_readwrite("char_fallbacks", &DecodeStats::char_fallbacks)
      .def_readwrite("empty_char_detections",
                     &DecodeStats::empty_char_detections);

  m.def(
      "decode_word",
      [](const CropRef& crop, const ExemplarIndex& word_index,
         const ExemplarIndex& char_index, const EncoderBoundary& encoder,
         const DetectorBoundary& detector, const RecognitionConfig& cfg) {
        DecodeStats stats;
        std::string text = decode_word(crop, word_index, char_index, encoder,
                                       detector, cfg, &stats);
        return py::make_tuple(std::move(text), stats);
      },
      py::arg("crop"), py::arg("word_index"), py::arg("char_index"),
      py::arg("encoder"), py::arg("detector"),
      py::arg("cfg") = RecognitionConfig{},
      "Returns (text, decode_stats).");

  py::class_<BackendBoundaries>(m, "BackendBoundaries")
      .def(py::init<>())
      .def_readwrite("detector", &BackendBoundaries::detector)
      .def_readwrite("encoder", &BackendBoundaries::encoder)
      .def_readwrite("legibility", &BackendBoundaries::legibility);

  py::class_<StubBackend>(m, "StubBackend")
      .def(py::init<>())
      .def("boundaries", &StubBackend::boundaries,
           py::keep_alive<0, 1>());
}

void bind_association(py::module_& m) {
  py::class_<AssociationConfig>(m, "AssociationConfig")
      .def(py::init<>())
      .def_readwrite("x_overlap_frac", &AssociationConfig::x_overlap_frac)
      .def_readwrite("max_above_frac", &AssociationConfig::max_above_frac)
      .def_readwrite("max_below_frac", &AssociationConfig::max_below_frac);

  m.def("x_intervals_overlap", &x_intervals_overlap, py::arg("a"), py::arg("b"),
        py::arg("page_width"), py::arg("cfg") = AssociationConfig{});
  m.def("vertically_adjacent", &vertically_adjacent, py::arg("upper"),
        py::arg("lower"), py::arg("page_height"),
        py::arg("cfg") = AssociationConfig{});

  py::class_<ArticleRecord>(m, "ArticleRecord")
      .def(py::init<>())
      .def_readwrite("headline", &ArticleRecord::headline)
      .def_readwrite("byline", &ArticleRecord::byline)
      .def_readwrite("article_text", &ArticleRecord::article_text)
      .def_readwrite("source_region_ids", &ArticleRecord::source_region_ids)
      .def_readwrite("scan_id", &ArticleRecord::scan_id)
      .def_readwrite("lccn", &ArticleRecord::lccn)
      .def_readwrite("date", &ArticleRecord::date)
      .def_readwrite("edition", &ArticleRecord::edition)
      .def_readwrite("page_number", &ArticleRecord::page_number)
      .def("__eq__", [](const ArticleRecord& a, const ArticleRecord& b) {
        return a == b;
      });

  py::class_<AssociationResult>(m, "AssociationResult")
      .def_readonly("articles", &AssociationResult::articles)
      .def_readonly("unmatched_headlines", &AssociationResult::unmatched_headlines)
      .def_readonly("unmatched_bylines", &AssociationResult::unmatched_bylines)
      .def_readonly("headline_links", &AssociationResult::headline_links)
      .def_readonly("byline_links", &AssociationResult::byline_links);

  m.def("associate_regions", &associate_regions, py::arg("scan"),
        py::arg("cfg") = AssociationConfig{});
  m.def("association_f1", &association_f1, py::arg("predicted"),
        py::arg("gold"));
}

void bind_trainmath(py::module_& m) {
  py::class_<EmbeddingBatch>(m, "EmbeddingBatch")
      .def(py::init<>())
      .def(py::init([](std::vector<Embedding> embeddings,
                       std::vector<int> labels) {
             return EmbeddingBatch{std::move(embeddings), std::move(labels)};
           }),
           py::arg("embeddings"), py::arg("labels"))
      .def_readwrite("embeddings", &EmbeddingBatch::embeddings)
      .def_readwrite("labels", &EmbeddingBatch::labels);

  m.def("supcon_loss", &supcon_loss, py::arg("batch"), py::arg("tau"));
  m.def("supcon_gradient", &supcon_gradient, py::arg("batch"), py::arg("tau"));

  py::class_<SamplerConfig>(m, "SamplerConfig")
      .def(py::init<>())
      .def_readwrite("m_per_class", &SamplerConfig::m_per_class)
      .def_readwrite("batch_size", &SamplerConfig::batch_size)
      .def_readwrite("seed", &SamplerConfig::seed);

  py::class_<SampleItem>(m, "SampleItem")
      .def_readonly("class_id", &SampleItem::class_id)
      .def_readonly("variant_id", &SampleItem::variant_id);

  m.def("sample_epoch", &sample_epoch, py::arg("variants_by_class"),
        py::arg("cfg") = SamplerConfig{});

  py::class_<HardNegativeConfig>(m, "HardNegativeConfig")
      .def(py::init<>())
      .def_readwrite("k", &HardNegativeConfig::k)
      .def_readwrite("sets_per_batch", &HardNegativeConfig::sets_per_batch)
      .def_readwrite("m_per_class", &HardNegativeConfig::m_per_class);

  py::class_<HardNegativeSet>(m, "HardNegativeSet")
      .def(py::init<>())
      .def(py::init([](std::string anchor, std::vector<std::string> words) {
             return HardNegativeSet{std::move(anchor), std::move(words)};
           }),
           py::arg("anchor"), py::arg("words"))
      .def_readwrite("anchor", &HardNegativeSet::anchor)
      .def_readwrite("words", &HardNegativeSet::words);

  m.def("build_hard_negative_sets", &build_hard_negative_sets,
        py::arg("reference_words"), py::arg("extra_crops"),
        py::arg("cfg") = HardNegativeConfig{});

  py::enum_<ViewSource>(m, "ViewSource")
      .value("synthetic", ViewSource::synthetic)
      .value("target", ViewSource::target);

  py::class_<HardNegativeItem>(m, "HardNegativeItem")
      .def_readonly("class_id", &HardNegativeItem::class_id)
      .def_readonly("view_id", &HardNegativeItem::view_id)
      .def_readonly("source", &HardNegativeItem::source);

  m.def("batch_hard_negatives", &batch_hard_negatives, py::arg("sets"),
        py::arg("synthetic_views"), py::arg("target_views"),
        py::arg("cfg") = HardNegativeConfig{}, py::arg("seed") = 0);

  m.def("write_epoch_manifest",
        py::overload_cast<const std::vector<SampledBatch>&, const std::string&>(
            &write_batch_manifest),
        py::arg("batches"), py::arg("path"));
  m.def("write_hard_negative_manifest",
        py::overload_cast<const std::vector<HardNegativeBatch>&,
                          const std::string&>(&write_batch_manifest),
        py::arg("batches"), py::arg("path"));
}

void bind_pipeline(py::module_& m) {
  py::enum_<OutputLevel>(m, "OutputLevel")
      .value("article", OutputLevel::article)
      .value("scan", OutputLevel::scan)
      .value("both", OutputLevel::both);

  py::class_<SpellConfig>(m, "SpellConfig")
      .def(py::init<>())
      .def_readwrite("enabled", &SpellConfig::enabled)
      .def_readwrite("max_edit", &SpellConfig::max_edit)
      .def_readwrite("lexicon_path", &SpellConfig::lexicon_path);

  py::class_<PipelineConfig>(m, "PipelineConfig")
      .def(py::init<>())
      .def_static("load", &PipelineConfig::load, py::arg("path"))
      .def_readwrite("geometry", &PipelineConfig::geometry)
      .def_readwrite("recognition", &PipelineConfig::recognition)
      .def_readwrite("association", &PipelineConfig::association)
      .def_readwrite("legibility", &PipelineConfig::legibility)
      .def_readwrite("spell", &PipelineConfig::spell)
      .def_readwrite("word_index_path", &PipelineConfig::word_index_path)
      .def_readwrite("char_index_path", &PipelineConfig::char_index_path)
      .def_readwrite("lexicon_path", &PipelineConfig::lexicon_path)
      .def_readwrite("backend", &PipelineConfig::backend)
      .def_readwrite("workers", &PipelineConfig::workers)
      .def_readwrite("seed", &PipelineConfig::seed)
      .def_readwrite("level", &PipelineConfig::level);

  py::class_<ScanInput>(m, "ScanInput")
      .def(py::init<>())
      .def_readwrite("scan_id", &ScanInput::scan_id)
      .def_readwrite("lccn", &ScanInput::lccn)
      .def_readwrite("date", &ScanInput::date)
      .def_readwrite("edition", &ScanInput::edition)
      .def_readwrite("page_number", &ScanInput::page_number)
      .def_readwrite("width_px", &ScanInput::width_px)
      .def_readwrite("height_px", &ScanInput::height_px)
      .def_readwrite("image_ref", &ScanInput::image_ref);

  m.def("load_manifest", &load_manifest, py::arg("path"));

  py::class_<LedgerEntry>(m, "LedgerEntry")
      .def_readonly("scan_id", &LedgerEntry::scan_id)
      .def_readonly("stage", &LedgerEntry::stage)
      .def_readonly("message", &LedgerEntry::message);

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("scan", &ScanResult::scan)
      .def_readonly("articles", &ScanResult::articles)
      .def_readonly("errors", &ScanResult::errors)
      .def_readonly("decode_stats", &ScanResult::decode_stats)
      .def_readonly("line_count", &ScanResult::line_count);

  m.def("run_scan", &run_scan, py::arg("input"), py::arg("boundaries"),
        py::arg("word_index"), py::arg("char_index"),
        py::arg("spell") = static_cast<const SpellIndex*>(nullptr),
        py::arg("cfg") = PipelineConfig{});

  py::class_<BatchSummary>(m, "BatchSummary")
      .def_readonly("scans_processed", &BatchSummary::scans_processed)
      .def_readonly("scans_failed", &BatchSummary::scans_failed)
      .def_readonly("article_count", &BatchSummary::article_count)
      .def_readonly("line_count", &BatchSummary::line_count)
      .def_readonly("regions_by_class", &BatchSummary::regions_by_class)
      .def_readonly("legibility_histogram", &BatchSummary::legibility_histogram)
      .def_readonly("ledger", &BatchSummary::ledger)
      .def_readonly("elapsed_sec", &BatchSummary::elapsed_sec)
      .def_readonly("scans_per_sec", &BatchSummary::scans_per_sec)
      .def_readonly("lines_per_sec", &BatchSummary::lines_per_sec)
      .def("to_json", &BatchSummary::to_json);

  m.def("run_batch", &run_batch, py::arg("manifest_path"), py::arg("cfg"),
        py::arg("out_dir"), py::call_guard<py::gil_scoped_release>());

  m.def("scan_to_json", &scan_to_json);
  m.def("scan_from_json", &scan_from_json);
  m.def("article_to_json", &article_to_json);
  m.def("article_from_json", &article_from_json);
  m.def("round1", &round1);

  m.def("evaluate_files", &evaluate_files, py::arg("pred_path"),
        py::arg("gold_path"), py::arg("ref_seg_path") = "",
        py::arg("lexicon") = static_cast<const Lexicon*>(nullptr));

  m.def("build_index_file", &build_index_file, py::arg("exemplars_path"),
        py::arg("out_path"), py::arg("kind"));

  m.def(
      "build_dictionary_files",
      [](const std::string& modern, const std::string& historical,
         const std::string& extras, const DictionaryConfig& cfg) {
        DictionaryBuildStats stats;
        Lexicon lx = build_dictionary_files(modern, historical, extras, cfg, &stats);
        return py::make_tuple(std::move(lx), stats);
      },
      py::arg("modern_path"), py::arg("historical_path"),
      py::arg("extras_path"), py::arg("cfg") = DictionaryConfig{},
      "Returns (lexicon, build_stats).");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Newspaper scan digitization core";
  m.attr("__version__") = "0.1.0";
  bind_domain(m);
  bind_geometry(m);
  bind_metrics(m);
  bind_lexicon(m);
  bind_legibility(m);
  bind_recognition(m);
  bind_association(m);
  bind_trainmath(m);
  bind_pipeline(m);
}
