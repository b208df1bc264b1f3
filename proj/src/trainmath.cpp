#include "newsdig/trainmath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"

namespace newsdig {

namespace {

void validate_batch(const EmbeddingBatch& batch) {
  const std::size_t n = batch.embeddings.size();
  if (n < 2) throw std::invalid_argument("batch needs at least 2 samples");
  if (batch.labels.size() != n)
    throw std::invalid_argument("labels/embeddings size mismatch");
  const std::size_t d = batch.embeddings[0].size();
  for (const Embedding& z : batch.embeddings)
    if (z.size() != d)
      throw std::invalid_argument("inconsistent embedding dimension");
}

// Positives of each anchor (same label, not self); throws on singletons.
std::vector<std::vector<std::size_t>> positives_of(
    const EmbeddingBatch& batch) {
  const std::size_t n = batch.labels.size();
  std::vector<std::vector<std::size_t>> pos(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && batch.labels[j] == batch.labels[i]) pos[i].push_back(j);
    }
    if (pos[i].empty())
      throw std::invalid_argument("class " + std::to_string(batch.labels[i]) +
                                  " has a single sample; no positives");
  }
  return pos;
}

}  // namespace

double supcon_loss(const EmbeddingBatch& batch, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("temperature must be positive");
  validate_batch(batch);
  const auto pos = positives_of(batch);
  const std::size_t n = batch.embeddings.size();

  double loss = 0.0;
  std::vector<double> logits(n);
  for (std::size_t i = 0; i < n; ++i) {
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      logits[a] = dot(batch.embeddings[i], batch.embeddings[a]) / tau;
      max_logit = std::max(max_logit, logits[a]);
    }
    double denom = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      if (a != i) denom += std::exp(logits[a] - max_logit);
    const double lse = max_logit + std::log(denom);

    double pos_mean = 0.0;
    for (std::size_t p : pos[i]) pos_mean += logits[p];
    pos_mean /= static_cast<double>(pos[i].size());
    loss += lse - pos_mean;
  }
  return loss;
}

std::vector<Embedding> supcon_gradient(const EmbeddingBatch& batch, double tau) {
  if (tau <= 0.0) throw std::invalid_argument("temperature must be positive");
  validate_batch(batch);
  const auto pos = positives_of(batch);
  const std::size_t n = batch.embeddings.size();
  const std::size_t d = batch.embeddings[0].size();

  std::vector<Embedding> grad(n, Embedding(d, 0.0));
  std::vector<double> logits(n), softmax(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Embedding& zi = batch.embeddings[i];
    double max_logit = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      logits[a] = dot(zi, batch.embeddings[a]) / tau;
      max_logit = std::max(max_logit, logits[a]);
    }
    double denom = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      softmax[a] = std::exp(logits[a] - max_logit);
      denom += softmax[a];
    }
    for (std::size_t a = 0; a < n; ++a)
      if (a != i) softmax[a] /= denom;

    const double inv_p = 1.0 / static_cast<double>(pos[i].size());
    // d/dz_i: (1/tau) * (sum_a softmax(a) z_a - mean over positives of z_p)
    for (std::size_t a = 0; a < n; ++a) {
      if (a == i) continue;
      const double w = softmax[a] / tau;
      for (std::size_t c = 0; c < d; ++c)
        grad[i][c] += w * batch.embeddings[a][c];
    }
    for (std::size_t p : pos[i]) {
      const double w = inv_p / tau;
      for (std::size_t c = 0; c < d; ++c)
        grad[i][c] -= w * batch.embeddings[p][c];
    }
    // d/dz_k for k != i: (z_i/tau) * (softmax(k) - [k positive]/|P(i)|)
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      double coeff = softmax[k];
      if (batch.labels[k] == batch.labels[i]) coeff -= inv_p;
      coeff /= tau;
      for (std::size_t c = 0; c < d; ++c) grad[k][c] += coeff * zi[c];
    }
  }
  return grad;
}

namespace {

// Fisher-Yates with a fixed modulo draw so results are identical across
// standard library implementations.
template <typename T>
void shuffle_vec(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

// Without-replacement draws, reshuffling when the pool runs dry.
class CyclingPool {
 public:
  CyclingPool(std::vector<std::string> items, std::mt19937_64& rng)
      : items_(std::move(items)) {
    shuffle_vec(items_, rng);
  }

  const std::string& draw(std::mt19937_64& rng) {
    if (pos_ == items_.size()) {
      shuffle_vec(items_, rng);
      pos_ = 0;
    }
    return items_[pos_++];
  }

 private:
  std::vector<std::string> items_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<SampledBatch> sample_epoch(
    const std::map<std::string, std::vector<std::string>>& variants_by_class,
    const SamplerConfig& cfg) {
  if (cfg.m_per_class == 0 || cfg.batch_size == 0 ||
      cfg.batch_size % cfg.m_per_class != 0)
    throw std::invalid_argument("batch_size must be a positive multiple of m");
  for (const auto& [cls, variants] : variants_by_class)
    if (variants.empty())
      throw std::invalid_argument("class has no variants: " + cls);

  std::mt19937_64 rng(cfg.seed);
  std::vector<std::string> classes;
  classes.reserve(variants_by_class.size());
  for (const auto& [cls, variants] : variants_by_class) classes.push_back(cls);
  shuffle_vec(classes, rng);

  const std::size_t classes_per_batch = cfg.batch_size / cfg.m_per_class;
  std::vector<SampledBatch> batches;
  std::map<std::string, CyclingPool> pools;
  for (std::size_t start = 0; start < classes.size();
       start += classes_per_batch) {
    const std::size_t end =
        std::min(classes.size(), start + classes_per_batch);
    SampledBatch batch;
    batch.reserve((end - start) * cfg.m_per_class);
    for (std::size_t ci = start; ci < end; ++ci) {
      const std::string& cls = classes[ci];
      auto it = pools.find(cls);
      if (it == pools.end()) {
        it = pools.emplace(cls, CyclingPool(variants_by_class.at(cls), rng))
                 .first;
      }
      for (std::size_t k = 0; k < cfg.m_per_class; ++k)
        batch.push_back({cls, it->second.draw(rng)});
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

std::vector<HardNegativeSet> build_hard_negative_sets(
    const std::vector<std::pair<std::string, Embedding>>& reference_words,
    const std::vector<std::pair<std::string, Embedding>>& extra_crops,
    const HardNegativeConfig& cfg) {
  if (reference_words.size() < cfg.k)
    throw std::invalid_argument("fewer reference words than k");

  std::vector<std::string> labels;
  std::vector<Embedding> rows;
  labels.reserve(reference_words.size());
  for (const auto& [label, z] : reference_words) {
    labels.push_back(label);
    rows.push_back(z);
  }
  const ExemplarIndex index =
      ExemplarIndex::build(IndexKind::word, labels, rows);

  std::vector<HardNegativeSet> sets;
  sets.reserve(reference_words.size() + extra_crops.size());
  auto make_set = [&](const std::string& anchor, const Embedding& query) {
    HardNegativeSet s;
    s.anchor = anchor;
    for (const ExemplarIndex::Hit& hit :
         index.k_nearest(normalized(query), cfg.k))
      s.words.push_back(hit.label);
    sets.push_back(std::move(s));
  };
  for (const auto& [label, z] : reference_words) make_set(label, z);
  for (const auto& [label, z] : extra_crops) {
    const ExemplarIndex::Hit hit = index.nearest(normalized(z));
    make_set(hit.label, z);
  }
  return sets;
}

std::vector<HardNegativeBatch> batch_hard_negatives(
    const std::vector<HardNegativeSet>& sets,
    const std::map<std::string, std::vector<std::string>>& synthetic_views,
    const std::map<std::string, std::vector<std::string>>& target_views,
    const HardNegativeConfig& cfg, std::uint64_t seed) {
  if (cfg.sets_per_batch == 0 || cfg.m_per_class == 0)
    throw std::invalid_argument("sets_per_batch and m must be positive");

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> order(sets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  shuffle_vec(order, rng);

  std::map<std::string, CyclingPool> synth_pools, target_pools;
  auto pool_for = [&rng](std::map<std::string, CyclingPool>& pools,
                         const std::string& cls,
                         const std::vector<std::string>& views) -> CyclingPool& {
    auto it = pools.find(cls);
    if (it == pools.end())
      it = pools.emplace(cls, CyclingPool(views, rng)).first;
    return it->second;
  };

  std::vector<HardNegativeBatch> batches;
  for (std::size_t start = 0; start < order.size();
       start += cfg.sets_per_batch) {
    const std::size_t end =
        std::min(order.size(), start + cfg.sets_per_batch);
    HardNegativeBatch batch;
    for (std::size_t si = start; si < end; ++si) {
      const HardNegativeSet& set = sets[order[si]];
      for (const std::string& word : set.words) {
        auto sit = synthetic_views.find(word);
        if (sit == synthetic_views.end() || sit->second.empty())
          throw std::invalid_argument("word has no synthetic views: " + word);

        std::size_t n_target = 0;
        auto tit = target_views.find(word);
        if (tit != target_views.end())
          n_target = std::min(tit->second.size(), cfg.m_per_class / 2);
        const std::size_t n_synth = cfg.m_per_class - n_target;

        CyclingPool& sp = pool_for(synth_pools, word, sit->second);
        for (std::size_t v = 0; v < n_synth; ++v)
          batch.push_back({word, sp.draw(rng), ViewSource::synthetic});
        if (n_target > 0) {
          CyclingPool& tp = pool_for(target_pools, word, tit->second);
          for (std::size_t v = 0; v < n_target; ++v)
            batch.push_back({word, tp.draw(rng), ViewSource::target});
        }
      }
    }
    batches.push_back(std::move(batch));
  }
  return batches;
}

namespace {

void write_manifest_rows(
    std::ofstream& out, std::size_t batch_index,
    const std::vector<std::array<std::string, 3>>& rows) {
  for (const auto& [cls, variant, source] : rows) {
    nlohmann::ordered_json j;
    j["batch"] = batch_index;
    j["class"] = cls;
    j["variant"] = variant;
    j["source"] = source;
    out << j.dump() << '\n';
  }
}

}  // namespace

void write_batch_manifest(const std::vector<SampledBatch>& batches,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  for (std::size_t b = 0; b < batches.size(); ++b) {
    std::vector<std::array<std::string, 3>> rows;
    for (const SampleItem& item : batches[b])
      rows.push_back({item.class_id, item.variant_id, "synthetic"});
    write_manifest_rows(out, b, rows);
  }
}

void write_batch_manifest(const std::vector<HardNegativeBatch>& batches,
                          const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  for (std::size_t b = 0; b < batches.size(); ++b) {
    std::vector<std::array<std::string, 3>> rows;
    for (const HardNegativeItem& item : batches[b])
      rows.push_back({item.class_id, item.view_id,
                      item.source == ViewSource::target ? "target"
                                                        : "synthetic"});
    write_manifest_rows(out, b, rows);
  }
}

}  // namespace newsdig
