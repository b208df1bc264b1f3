#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "newsdig/pipeline.hpp"

namespace {

int cmd_run(const std::string& manifest, const std::string& config,
            const std::string& out_dir, std::optional<int> workers,
            const std::string& level, const std::string& spellcheck,
            std::optional<long long> seed) {
  newsdig::PipelineConfig cfg = newsdig::PipelineConfig::load(config);
  if (workers) cfg.workers = static_cast<std::size_t>(*workers);
  if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);
  if (!level.empty()) {
    if (level == "article") cfg.level = newsdig::OutputLevel::article;
    else if (level == "scan") cfg.level = newsdig::OutputLevel::scan;
    else if (level == "both") cfg.level = newsdig::OutputLevel::both;
    else throw std::runtime_error("unknown level: " + level);
  }
  if (!spellcheck.empty()) {
    if (spellcheck == "on") cfg.spell.enabled = true;
    else if (spellcheck == "off") cfg.spell.enabled = false;
    else throw std::runtime_error("spellcheck must be on or off");
  }

  const newsdig::BatchSummary summary =
      newsdig::run_batch(manifest, cfg, out_dir);
  std::cout << summary.to_json() << "\n";
  std::fprintf(stderr, "%zu scans in %.3fs (%.1f scans/s, %.1f lines/s)\n",
               summary.scans_processed, summary.elapsed_sec,
               summary.scans_per_sec, summary.lines_per_sec);
  return summary.ledger.empty() ? 0 : 2;
}

int cmd_eval(const std::string& pred, const std::string& gold,
             const std::string& ref_seg, const std::string& lexicon_path) {
  std::optional<newsdig::Lexicon> lexicon;
  if (!lexicon_path.empty())
    lexicon = newsdig::Lexicon::load(lexicon_path);
  const newsdig::EvalReport report = newsdig::evaluate_files(
      pred, gold, ref_seg, lexicon ? &*lexicon : nullptr);
  std::cout << report.to_json() << "\n";
  return 0;
}

int cmd_dict_build(const std::string& modern, const std::string& historical,
                   const std::string& extras, const std::string& out,
                   std::size_t modern_top_k, std::size_t historical_top_k,
                   bool no_case_forms) {
  newsdig::DictionaryConfig cfg;
  cfg.modern_top_k = modern_top_k;
  cfg.historical_top_k = historical_top_k;
  cfg.emit_case_forms = !no_case_forms;

  newsdig::DictionaryBuildStats stats;
  const newsdig::Lexicon lex =
      newsdig::build_dictionary_files(modern, historical, extras, cfg, &stats);
  if (out.empty()) {
    for (const newsdig::Term& t : lex.terms()) {
      std::cout << t.text;
      if (t.frequency > 0) std::cout << '\t' << t.frequency;
      std::cout << '\n';
    }
  } else {
    lex.save(out);
  }
  std::fprintf(stderr,
               "modern kept %zu (dropped %zu), historical added %zu, extras "
               "%zu; %zu base terms, %zu rows\n",
               stats.modern_kept, stats.modern_dropped, stats.historical_added,
               stats.extras_added, stats.base_terms, stats.rows);
  return 0;
}

int cmd_index_build(const std::string& exemplars, const std::string& out,
                    const std::string& kind) {
  newsdig::IndexKind k;
  if (kind == "word") k = newsdig::IndexKind::word;
  else if (kind == "character") k = newsdig::IndexKind::character;
  else throw std::runtime_error("kind must be word or character");
  newsdig::build_index_file(exemplars, out, k);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"newspaper scan digitization pipeline"};
  app.require_subcommand(1);

  // run
  std::string manifest, config, out_dir, level, spellcheck;
  std::optional<int> workers;
  std::optional<long long> seed;
  CLI::App* run = app.add_subcommand("run", "process a manifest of scans");
  run->add_option("--manifest", manifest, "scan manifest (JSONL)")->required();
  run->add_option("--config", config, "pipeline config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory")->required();
  run->add_option("--workers", workers, "worker thread count");
  run->add_option("--level", level, "article|scan|both");
  run->add_option("--spellcheck", spellcheck, "on|off");
  run->add_option("--seed", seed, "seed for seeded backends");

  // eval
  std::string pred, gold, ref_seg, lexicon_path;
  CLI::App* eval = app.add_subcommand("eval", "score predictions against gold");
  eval->add_option("--pred", pred, "predictions (JSONL of id/text)")->required();
  eval->add_option("--gold", gold, "references (JSONL of id/text)")->required();
  eval->add_option("--ref-seg", ref_seg,
                   "OCR output on reference segmentation, for decomposition");
  eval->add_option("--lexicon", lexicon_path, "lexicon for non-word rates");

  // dict build
  std::string modern, historical, extras, dict_out;
  std::size_t modern_top_k = 25000, historical_top_k = 500;
  bool no_case_forms = false;
  CLI::App* dict = app.add_subcommand("dict", "dictionary tools");
  CLI::App* dict_build = dict->add_subcommand("build", "build the OCR dictionary");
  dict_build->add_option("--modern", modern, "frequency-ranked modern word list")
      ->required();
  dict_build->add_option("--historical", historical,
                         "historical corpus term counts")
      ->required();
  dict_build->add_option("--extras", extras, "extra terms admitted verbatim")
      ->required();
  dict_build->add_option("--out", dict_out, "output file (default: stdout)");
  dict_build->add_option("--modern-top-k", modern_top_k, "modern cutoff");
  dict_build->add_option("--historical-top-k", historical_top_k,
                         "historical additions");
  dict_build->add_flag("--no-case-forms", no_case_forms,
                       "emit base terms without case expansion");
  dict->require_subcommand(1);

  // index build
  std::string exemplars, index_out, kind = "word";
  CLI::App* index = app.add_subcommand("index", "exemplar index tools");
  CLI::App* index_build =
      index->add_subcommand("build", "build an exemplar index file");
  index_build->add_option("--exemplars", exemplars,
                          "exemplar embeddings (JSONL of label/embedding)")
      ->required();
  index_build->add_option("--out", index_out, "output index file")->required();
  index_build->add_option("--kind", kind, "word|character");
  index->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(manifest, config, out_dir, workers, level, spellcheck,
                     seed);
    if (eval->parsed()) return cmd_eval(pred, gold, ref_seg, lexicon_path);
    if (dict_build->parsed())
      return cmd_dict_build(modern, historical, extras, dict_out, modern_top_k,
                            historical_top_k, no_case_forms);
    if (index_build->parsed())
      return cmd_index_build(exemplars, index_out, kind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
