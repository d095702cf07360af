#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coexpand/corpus_io.hpp"

namespace coexpand {

enum class EmbeddingVariant { content, context, both };

std::string_view to_string(EmbeddingVariant v);
std::optional<EmbeddingVariant> parse_variant(std::string_view s);

struct OccurrenceEmbedding {
  EntityId entity_id = 0;
  std::string sentence_id;
  std::vector<float> content;
  std::vector<float> context;
};

struct CorpusEmbedding {
  EntityId entity_id = 0;
  std::vector<float> content;
  std::vector<float> context;
  std::size_t occurrence_count = 0;
};

// Mean of the per-occurrence vectors. Sums run in double, in ascending
// sentence_id order (ties keep input order), and are stored as float.
// Throws DataError on an empty span or mismatched dimensions.
CorpusEmbedding aggregate(std::span<const OccurrenceEmbedding> occurrences);

// Groups by entity and aggregates each group; output sorted by entity id.
// Both versions produce identical bits.
std::vector<CorpusEmbedding> aggregate_all_serial(std::span<const OccurrenceEmbedding> occurrences);
std::vector<CorpusEmbedding> aggregate_all(std::span<const OccurrenceEmbedding> occurrences,
                                           int threads = 0);

// dot(u,v)/(|u||v|) accumulated in double. Returns 0 (and bumps
// zero_norm_warnings()) when either norm is below 1e-12. Throws
// std::invalid_argument on a dimension mismatch.
double cosine(std::span<const float> u, std::span<const float> v);
std::uint64_t zero_norm_warnings();

inline constexpr double kMinNorm = 1e-12;

// Immutable after construction; concurrent reads are safe.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::vector<CorpusEmbedding> entries);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }
  bool contains(EntityId id) const { return index_.contains(id); }
  const CorpusEmbedding& at(EntityId id) const;
  const std::vector<CorpusEmbedding>& entries() const { return entries_; }

  // content, context, or [content; context]. normalize_parts L2-normalizes
  // each part first (only affects `both`).
  std::vector<float> vector_of(EntityId id, EmbeddingVariant variant,
                               bool normalize_parts = false) const;
  std::size_t variant_dim(EmbeddingVariant variant) const;

 private:
  std::size_t dim_ = 0;
  std::vector<CorpusEmbedding> entries_;  // ascending entity id
  std::unordered_map<EntityId, std::size_t> index_;
};

// Dense row-major copy of one variant for every stored entity, with the
// reciprocal L2 norm of each row (0 for rows below kMinNorm).
class VariantMatrix {
 public:
  VariantMatrix(const EmbeddingStore& store, EmbeddingVariant variant,
                bool normalize_parts = false);

  std::size_t dim() const { return dim_; }
  bool contains(EntityId id) const { return row_of_.contains(id); }
  std::span<const float> row(EntityId id) const;
  double inv_norm(EntityId id) const;

 private:
  std::size_t index(EntityId id) const;

  std::size_t dim_ = 0;
  std::vector<float> data_;
  std::vector<double> inv_norm_;
  std::unordered_map<EntityId, std::size_t> row_of_;
};

}  // namespace coexpand
