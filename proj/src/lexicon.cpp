#include "newsdig/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>
#include <tuple>

#include "newsdig/metrics.hpp"
#include "newsdig/unicode.hpp"

namespace newsdig {

namespace {

std::string ascii_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string ascii_upper(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string ascii_capitalized(const std::string& s) {
  std::string out = ascii_lower(s);
  if (!out.empty())
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
  return out;
}

bool has_alpha(const std::string& s) {
  for (char c : s)
    if (std::isalpha(static_cast<unsigned char>(c))) return true;
  return false;
}

}  // namespace

void Lexicon::add(Term term) {
  auto it = by_text_.find(term.text);
  if (it != by_text_.end()) {
    Term& existing = terms_[it->second];
    existing.frequency = std::max(existing.frequency, term.frequency);
    return;
  }
  by_text_[term.text] = terms_.size();
  folded_.insert(ascii_lower(term.text));
  terms_.push_back(std::move(term));
}

bool Lexicon::contains(const std::string& text) const {
  return by_text_.count(text) > 0;
}

bool Lexicon::contains_ci(const std::string& text) const {
  return folded_.count(ascii_lower(text)) > 0;
}

const Term* Lexicon::find(const std::string& text) const {
  auto it = by_text_.find(text);
  return it == by_text_.end() ? nullptr : &terms_[it->second];
}

Lexicon Lexicon::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open lexicon file: " + path);
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    Term t;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      t.text = line;
    } else {
      t.text = line.substr(0, tab);
      try {
        t.frequency = std::stoull(line.substr(tab + 1));
      } catch (const std::exception&) {
        throw std::runtime_error("bad frequency in lexicon line: " + line);
      }
    }
    if (t.text.empty()) continue;
    lex.add(std::move(t));
  }
  return lex;
}

void Lexicon::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write lexicon file: " + path);
  for (const Term& t : terms_) {
    out << t.text;
    if (t.frequency > 0) out << '\t' << t.frequency;
    out << '\n';
  }
}

Lexicon build_ocr_dictionary(
    const std::vector<std::pair<std::string, std::uint64_t>>& modern_ranked,
    const std::map<std::string, std::uint64_t>& historical_counts,
    const std::vector<std::string>& extras, const DictionaryConfig& cfg,
    DictionaryBuildStats* stats) {
  if (modern_ranked.size() < cfg.modern_top_k)
    throw std::invalid_argument("modern list shorter than modern_top_k");

  DictionaryBuildStats s;
  std::vector<Term> base;
  std::set<std::string> top_k_modern;
  for (std::size_t i = 0; i < cfg.modern_top_k; ++i) {
    const auto& [word, freq] = modern_ranked[i];
    top_k_modern.insert(word);
    auto it = historical_counts.find(word);
    if (it != historical_counts.end() && it->second > 0) {
      base.push_back({word, TermProvenance::modern, freq});
      ++s.modern_kept;
    } else {
      ++s.modern_dropped;
    }
  }

  std::vector<std::pair<std::string, std::uint64_t>> hist_candidates;
  for (const auto& [word, count] : historical_counts) {
    if (count > 0 && !top_k_modern.count(word))
      hist_candidates.push_back({word, count});
  }
  std::sort(hist_candidates.begin(), hist_candidates.end(),
            [](const auto& a, const auto& b) {
              return std::tie(b.second, a.first) < std::tie(a.second, b.first);
            });
  const std::size_t take = std::min(cfg.historical_top_k, hist_candidates.size());
  for (std::size_t i = 0; i < take; ++i) {
    base.push_back({hist_candidates[i].first, TermProvenance::historical_added,
                    hist_candidates[i].second});
    ++s.historical_added;
  }

  std::set<std::string> base_texts;
  for (const Term& t : base) base_texts.insert(t.text);
  for (const std::string& word : extras) {
    if (word.empty() || base_texts.count(word)) continue;
    base_texts.insert(word);
    base.push_back({word, TermProvenance::extra, 0});
    ++s.extras_added;
  }
  s.base_terms = base.size();

  Lexicon lex;
  for (const Term& t : base) {
    if (cfg.emit_case_forms) {
      lex.add({ascii_lower(t.text), t.provenance, t.frequency});
      lex.add({ascii_upper(t.text), t.provenance, t.frequency});
      lex.add({ascii_capitalized(t.text), t.provenance, t.frequency});
    } else {
      lex.add(t);
    }
  }
  s.rows = lex.size();
  if (stats) *stats = s;
  return lex;
}

double non_word_rate(const std::string& text, const Lexicon& lexicon) {
  std::size_t counted = 0;
  std::size_t misses = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < n && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::size_t a = i, b = j;
      while (a < b && std::ispunct(static_cast<unsigned char>(text[a]))) ++a;
      while (b > a && std::ispunct(static_cast<unsigned char>(text[b - 1]))) --b;
      const std::string token = text.substr(a, b - a);
      if (has_alpha(token)) {
        ++counted;
        if (!lexicon.contains_ci(token)) ++misses;
      }
    }
    i = j;
  }
  if (counted == 0) return 0.0;
  return static_cast<double>(misses) / static_cast<double>(counted);
}

namespace {

// All strings reachable from `base` by deleting up to max_edit scalars,
// including base itself.
std::vector<std::string> delete_variants(const std::string& base, int max_edit) {
  std::set<std::u32string> seen;
  std::vector<std::u32string> frontier{utf8_decode(base)};
  seen.insert(frontier[0]);
  for (int depth = 0; depth < max_edit; ++depth) {
    std::vector<std::u32string> next;
    for (const std::u32string& s : frontier) {
      if (s.empty()) continue;
      for (std::size_t k = 0; k < s.size(); ++k) {
        std::u32string d = s;
        d.erase(d.begin() + static_cast<std::ptrdiff_t>(k));
        if (seen.insert(d).second) next.push_back(std::move(d));
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::string> out;
  out.reserve(seen.size());
  for (const std::u32string& s : seen) out.push_back(utf8_encode(s));
  return out;
}

enum class CasePattern { lower, upper, capitalized, other };

CasePattern detect_case(const std::string& token) {
  bool any_alpha = false, all_upper = true, all_lower = true;
  bool first_alpha_upper = false, rest_lower = true, seen_first = false;
  for (char c : token) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalpha(u)) continue;
    any_alpha = true;
    if (std::isupper(u)) all_lower = false; else all_upper = false;
    if (!seen_first) {
      seen_first = true;
      first_alpha_upper = std::isupper(u);
    } else if (std::isupper(u)) {
      rest_lower = false;
    }
  }
  if (!any_alpha) return CasePattern::other;
  if (all_lower) return CasePattern::lower;
  if (all_upper) return CasePattern::upper;
  if (first_alpha_upper && rest_lower) return CasePattern::capitalized;
  return CasePattern::other;
}

std::string apply_case(const std::string& lower_term, CasePattern pattern) {
  switch (pattern) {
    case CasePattern::upper: return ascii_upper(lower_term);
    case CasePattern::capitalized: return ascii_capitalized(lower_term);
    default: return lower_term;
  }
}

}  // namespace

SpellIndex::SpellIndex(const Lexicon& lexicon, int max_edit)
    : max_edit_(max_edit) {
  if (max_edit < 1 || max_edit > 2)
    throw std::invalid_argument("max_edit must be 1 or 2");

  std::map<std::string, std::uint64_t> folded;
  for (const Term& t : lexicon.terms()) {
    const std::string low = ascii_lower(t.text);
    auto [it, inserted] = folded.try_emplace(low, t.frequency);
    if (!inserted) it->second = std::max(it->second, t.frequency);
  }
  entries_.reserve(folded.size());
  for (const auto& [term, freq] : folded) {
    const auto idx = static_cast<std::uint32_t>(entries_.size());
    entries_.push_back({term, freq});
    term_to_entry_[term] = idx;
    for (const std::string& variant : delete_variants(term, max_edit_))
      deletes_[variant].push_back(idx);
  }
}

std::string SpellIndex::correct(const std::string& token) const {
  if (token.empty() || !has_alpha(token)) return token;
  const std::string low = ascii_lower(token);
  if (term_to_entry_.count(low)) return token;

  std::set<std::uint32_t> candidates;
  for (const std::string& variant : delete_variants(low, max_edit_)) {
    auto it = deletes_.find(variant);
    if (it == deletes_.end()) continue;
    candidates.insert(it->second.begin(), it->second.end());
  }

  const Entry* best = nullptr;
  std::size_t best_dist = 0;
  for (std::uint32_t idx : candidates) {
    const Entry& e = entries_[idx];
    const std::size_t dist = levenshtein(low, e.term);
    if (dist > static_cast<std::size_t>(max_edit_)) continue;
    if (!best || std::tie(dist, best->frequency, e.term) <
                     std::tie(best_dist, e.frequency, best->term)) {
      best = &e;
      best_dist = dist;
    }
  }
  if (!best) return token;
  return apply_case(best->term, detect_case(token));
}

}  // namespace newsdig
