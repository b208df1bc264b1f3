#pragma once

// Slow, independently written reference implementations the library code is
// checked against. Everything here favors obviousness over speed.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "newsdig/geometry.hpp"
#include "newsdig/unicode.hpp"

namespace oracles {

// ---------------------------------------------------------------- distance

// Memoized textbook recursion.
inline std::size_t lev_rec(const std::u32string& a, const std::u32string& b,
                           std::size_t i, std::size_t j,
                           std::vector<std::vector<long long>>& memo) {
  if (i == 0) return j;
  if (j == 0) return i;
  long long& slot = memo[i][j];
  if (slot >= 0) return static_cast<std::size_t>(slot);
  std::size_t best;
  if (a[i - 1] == b[j - 1]) {
    best = lev_rec(a, b, i - 1, j - 1, memo);
  } else {
    const std::size_t del = lev_rec(a, b, i - 1, j, memo);
    const std::size_t ins = lev_rec(a, b, i, j - 1, memo);
    const std::size_t sub = lev_rec(a, b, i - 1, j - 1, memo);
    best = 1 + std::min({del, ins, sub});
  }
  slot = static_cast<long long>(best);
  return best;
}

inline std::size_t levenshtein(const std::string& sa, const std::string& sb) {
  const std::u32string a = newsdig::utf8_decode(sa);
  const std::u32string b = newsdig::utf8_decode(sb);
  std::vector<std::vector<long long>> memo(
      a.size() + 1, std::vector<long long>(b.size() + 1, -1));
  return lev_rec(a, b, a.size(), b.size(), memo);
}

// ---------------------------------------------------------------- supcon

// Literal formula: sum over anchors of -1/|P(i)| sum_p log(exp(z_i.z_p/t) /
// sum_{a != i} exp(z_i.z_a/t)). No numerical stabilization.
inline double supcon(const std::vector<std::vector<double>>& z,
                     const std::vector<int>& y, double tau) {
  const std::size_t n = z.size();
  auto dotp = [](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
  };
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double denom = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      if (a != i) denom += std::exp(dotp(z[i], z[a]) / tau);
    double inner = 0.0;
    std::size_t npos = 0;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == i || y[p] != y[i]) continue;
      ++npos;
      inner += std::log(std::exp(dotp(z[i], z[p]) / tau) / denom);
    }
    total += -inner / static_cast<double>(npos);
  }
  return total;
}

// ---------------------------------------------------------------- retrieval

struct NearestRef {
  std::size_t row = 0;
  double sim = -std::numeric_limits<double>::infinity();
};

// Plain linear scan; strict > keeps the lowest row on ties.
inline NearestRef nearest(const std::vector<std::vector<double>>& rows,
                          const std::vector<double>& q) {
  NearestRef best;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    double s = 0.0;
    for (std::size_t k = 0; k < q.size(); ++k) s += rows[r][k] * q[k];
    if (s > best.sim) {
      best.sim = s;
      best.row = r;
    }
  }
  return best;
}

// ---------------------------------------------------------------- detection

// COCO-style AP, written as plainly as possible: flatten this label's
// predictions over scans, sort by score (scan id, y0, x0 break ties), match
// each prediction greedily to the unused ground truth with the highest IoU at
// or above the threshold, then average the precision envelope over the 101
// recall checkpoints.
inline double average_precision(
    const std::map<std::string, std::vector<newsdig::Detection>>& preds,
    const std::map<std::string, std::vector<newsdig::GroundTruth>>& gts,
    const std::string& label, double thresh) {
  struct Flat {
    std::string scan;
    newsdig::Detection det;
  };
  std::vector<Flat> flat;
  for (const auto& [scan, dets] : preds)
    for (const auto& d : dets)
      if (d.label == label) flat.push_back({scan, d});
  std::stable_sort(flat.begin(), flat.end(), [](const Flat& a, const Flat& b) {
    return std::tie(b.det.score, a.scan, a.det.box.y0, a.det.box.x0) <
           std::tie(a.det.score, b.scan, b.det.box.y0, b.det.box.x0);
  });

  std::size_t npos = 0;
  for (const auto& [scan, g] : gts)
    for (const auto& gt : g)
      if (gt.label == label) ++npos;
  if (npos == 0) return 0.0;

  std::map<std::string, std::vector<bool>> used;
  std::vector<bool> is_tp;
  for (const Flat& f : flat) {
    const auto it = gts.find(f.scan);
    bool matched = false;
    if (it != gts.end()) {
      auto& flags = used[f.scan];
      flags.resize(it->second.size(), false);
      double best = -1.0;
      std::size_t best_g = 0;
      for (std::size_t g = 0; g < it->second.size(); ++g) {
        if (flags[g] || it->second[g].label != label) continue;
        const double v = newsdig::iou(f.det.box, it->second[g].box);
        if (v >= thresh && v > best) {
          best = v;
          best_g = g;
        }
      }
      if (best >= 0.0) {
        flags[best_g] = true;
        matched = true;
      }
    }
    is_tp.push_back(matched);
  }

  std::vector<double> precision, recall;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < is_tp.size(); ++k) {
    if (is_tp[k]) ++tp;
    precision.push_back(static_cast<double>(tp) / static_cast<double>(k + 1));
    recall.push_back(static_cast<double>(tp) / static_cast<double>(npos));
  }

  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double target = r / 100.0;
    double best = 0.0;
    for (std::size_t k = 0; k < precision.size(); ++k)
      if (recall[k] >= target && precision[k] > best) best = precision[k];
    sum += best;
  }
  return sum / 101.0;
}

inline double mean_average_precision(
    const std::map<std::string, std::vector<newsdig::Detection>>& preds,
    const std::map<std::string, std::vector<newsdig::GroundTruth>>& gts) {
  std::map<std::string, bool> labels;
  for (const auto& [scan, g] : gts)
    for (const auto& gt : g) labels[gt.label] = true;
  if (labels.empty()) return 0.0;
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& [label, unused] : labels) {
    for (int t = 50; t <= 95; t += 5) {
      sum += oracles::average_precision(preds, gts, label, t / 100.0);
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

// ---------------------------------------------------------------- spelling

inline std::string to_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string to_upper(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

// Full scan over the lexicon with the published tie-break: lowest distance,
// then highest frequency, then lexicographically first term. The winning
// term is re-cased to match the input token.
inline std::string spell_correct(
    const std::string& token,
    const std::vector<std::pair<std::string, std::uint64_t>>& lexicon_lower,
    int max_edit) {
  bool any_alpha = false;
  for (char c : token)
    if (std::isalpha(static_cast<unsigned char>(c))) any_alpha = true;
  if (token.empty() || !any_alpha) return token;

  const std::string low = to_lower(token);
  for (const auto& [term, freq] : lexicon_lower)
    if (term == low) return token;

  const std::string* best = nullptr;
  std::uint64_t best_freq = 0;
  std::size_t best_dist = 0;
  for (const auto& [term, freq] : lexicon_lower) {
    const std::size_t dist = levenshtein(low, term);
    if (dist > static_cast<std::size_t>(max_edit)) continue;
    if (!best || std::tie(dist, best_freq, term) <
                     std::tie(best_dist, freq, *best)) {
      best = &term;
      best_freq = freq;
      best_dist = dist;
    }
  }
  if (!best) return token;

  // Re-apply the token's case pattern.
  bool all_upper = true, all_lower = true, rest_lower = true;
  bool first_alpha_upper = false, seen_first = false;
  for (char c : token) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (!std::isalpha(u)) continue;
    if (std::isupper(u)) all_lower = false; else all_upper = false;
    if (!seen_first) {
      seen_first = true;
      first_alpha_upper = std::isupper(u) != 0;
    } else if (std::isupper(u)) {
      rest_lower = false;
    }
  }
  if (all_lower) return *best;
  if (all_upper) return to_upper(*best);
  if (first_alpha_upper && rest_lower) {
    std::string out = *best;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
  }
  return *best;
}

// ---------------------------------------------------------------- generators

inline std::vector<double> random_unit_vector(std::mt19937_64& rng,
                                              std::size_t dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> v(dim);
  double n2 = 0.0;
  do {
    n2 = 0.0;
    for (double& x : v) {
      x = gauss(rng);
      n2 += x * x;
    }
  } while (n2 < 1e-12);
  const double inv = 1.0 / std::sqrt(n2);
  for (double& x : v) x *= inv;
  return v;
}

inline newsdig::BoundingBox random_box(std::mt19937_64& rng, double lo,
                                       double hi, double min_side = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  double x0 = u(rng), y0 = u(rng);
  std::uniform_real_distribution<double> side(min_side, (hi - lo) / 2);
  return {x0, y0, x0 + side(rng), y0 + side(rng)};
}

// Shuffles two parallel vectors with the same permutation.
template <typename A, typename B>
inline void shuffle_together(std::vector<A>& a, std::vector<B>& b,
                             std::mt19937_64& rng) {
  for (std::size_t i = a.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(a[i - 1], a[j]);
    std::swap(b[i - 1], b[j]);
  }
}

}  // namespace oracles
