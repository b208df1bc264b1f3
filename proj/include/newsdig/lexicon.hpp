#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace newsdig {

enum class TermProvenance { modern, historical_added, extra };

struct Term {
  std::string text;
  TermProvenance provenance = TermProvenance::modern;
  std::uint64_t frequency = 0;

  bool operator==(const Term&) const = default;
};

// Insertion-ordered term list with exact and case-folded lookup.
class Lexicon {
 public:
  void add(Term term);
  bool contains(const std::string& text) const;
  bool contains_ci(const std::string& text) const;
  const Term* find(const std::string& text) const;
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  // One term per line, optional "\t<frequency>", '#' starts a comment line.
  static Lexicon load(const std::string& path);
  void save(const std::string& path) const;

 private:
  std::vector<Term> terms_;
  std::unordered_map<std::string, std::size_t> by_text_;
  std::unordered_set<std::string> folded_;
};

struct DictionaryConfig {
  std::size_t modern_top_k = 25000;
  std::size_t historical_top_k = 500;
  bool emit_case_forms = true;  // lower, UPPER, Capitalized rows
};

struct DictionaryBuildStats {
  std::size_t modern_kept = 0;     // modern terms surviving the corpus filter
  std::size_t modern_dropped = 0;  // top-k modern terms absent from the corpus
  std::size_t historical_added = 0;
  std::size_t extras_added = 0;
  std::size_t base_terms = 0;  // unique terms before case expansion
  std::size_t rows = 0;        // emitted rows after case expansion
};

// Frequency-ranked modern list filtered by historical corpus presence, topped
// up with the most frequent corpus-only terms plus verbatim extras.
Lexicon build_ocr_dictionary(
    const std::vector<std::pair<std::string, std::uint64_t>>& modern_ranked,
    const std::map<std::string, std::uint64_t>& historical_counts,
    const std::vector<std::string>& extras, const DictionaryConfig& cfg,
    DictionaryBuildStats* stats = nullptr);

// Share of alphabetic tokens absent from the lexicon (case-insensitive).
// Tokens are whitespace-split with ASCII punctuation stripped at the edges;
// tokens without an alphabetic character are ignored. Empty text yields 0.
double non_word_rate(const std::string& text, const Lexicon& lexicon);

// Symmetric-delete index for bounded-distance correction.
class SpellIndex {
 public:
  SpellIndex(const Lexicon& lexicon, int max_edit);

  // In-lexicon tokens pass through. Otherwise the nearest term within
  // max_edit wins (distance, then frequency desc, then lexicographic), with
  // the input's case pattern re-applied. No candidate: returns the input.
  std::string correct(const std::string& token) const;

  int max_edit() const { return max_edit_; }

 private:
  struct Entry {
    std::string term;  // lowercase form
    std::uint64_t frequency = 0;
  };

  int max_edit_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> term_to_entry_;
  std::unordered_map<std::string, std::vector<std::uint32_t>> deletes_;
};

}  // namespace newsdig
