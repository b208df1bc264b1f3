#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "newsdig/recognition.hpp"

namespace newsdig {

struct EmbeddingBatch {
  std::vector<Embedding> embeddings;
  std::vector<int> labels;
};

// Supervised contrastive loss, summation outside the log, temperature tau.
// Every anchor needs at least one positive; singleton classes throw.
double supcon_loss(const EmbeddingBatch& batch, double tau);

// Analytic d loss / d embeddings, same shape as batch.embeddings.
std::vector<Embedding> supcon_gradient(const EmbeddingBatch& batch, double tau);

struct SamplerConfig {
  std::size_t m_per_class = 4;
  std::size_t batch_size = 1024;
  std::uint64_t seed = 0;
};

struct SampleItem {
  std::string class_id;
  std::string variant_id;
};

using SampledBatch = std::vector<SampleItem>;

// Class-balanced epoch: classes shuffle once per epoch, each batch holds
// batch_size / m_per_class distinct classes with m_per_class variants drawn
// from per-class cycling pools. The final batch may hold fewer classes.
std::vector<SampledBatch> sample_epoch(
    const std::map<std::string, std::vector<std::string>>& variants_by_class,
    const SamplerConfig& cfg);

struct HardNegativeConfig {
  std::size_t k = 8;              // words per set, anchor included
  std::size_t sets_per_batch = 32;
  std::size_t m_per_class = 4;
};

// Word labels most confusable with the anchor under the current index.
struct HardNegativeSet {
  std::string anchor;             // anchor word label
  std::vector<std::string> words;  // k labels, anchor first
};

// One set per reference word, then one per extra crop (label = nearest
// reference word). Throws when the index holds fewer than k labels.
std::vector<HardNegativeSet> build_hard_negative_sets(
    const std::vector<std::pair<std::string, Embedding>>& reference_words,
    const std::vector<std::pair<std::string, Embedding>>& extra_crops,
    const HardNegativeConfig& cfg);

enum class ViewSource { synthetic, target };

struct HardNegativeItem {
  std::string class_id;
  std::string view_id;
  ViewSource source = ViewSource::synthetic;
};

using HardNegativeBatch = std::vector<HardNegativeItem>;

// Batches whole sets (sets_per_batch per batch, final batch may be ragged).
// Each word contributes m_per_class views: up to m/2 real target crops when
// available, the remainder synthetic renders, drawn from cycling pools.
std::vector<HardNegativeBatch> batch_hard_negatives(
    const std::vector<HardNegativeSet>& sets,
    const std::map<std::string, std::vector<std::string>>& synthetic_views,
    const std::map<std::string, std::vector<std::string>>& target_views,
    const HardNegativeConfig& cfg, std::uint64_t seed);

// JSONL, one row per item: {"batch": n, "class": ..., "variant": ..., "source": ...}.
void write_batch_manifest(const std::vector<SampledBatch>& batches,
                          const std::string& path);
void write_batch_manifest(const std::vector<HardNegativeBatch>& batches,
                          const std::string& path);

}  // namespace newsdig
