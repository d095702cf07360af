#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coexpand/corpus_io.hpp"
#include "coexpand/embedding_store.hpp"

namespace coexpand {

struct ExpansionConfig {
  EmbeddingVariant variant = EmbeddingVariant::context;
  std::size_t k = 10;  // entities added per iteration
  std::size_t t = 30;  // expanded members per set at which a set is full
  bool normalize_parts = false;
  int threads = 0;  // 0: OpenMP default
};

struct ExpandedMember {
  EntityId entity_id = 0;
  std::size_t iteration = 0;  // 1-based
  double score = 0.0;         // similarity to this set when selected
  std::size_t rank = 0;       // 1-based among expanded members

  bool operator==(const ExpandedMember&) const = default;
};

struct EntitySet {
  std::string type_name;
  std::vector<EntityId> seeds;
  std::vector<ExpandedMember> expanded;
  bool unfilled = false;  // stopped before reaching t

  std::size_t size() const { return seeds.size() + expanded.size(); }
  std::vector<EntityId> members() const;
};

struct ExpansionState {
  std::vector<EntitySet> sets;
  std::size_t iterations = 0;
};

struct ScoredCandidate {
  EntityId entity_id = 0;
  std::size_t matched_set = 0;
  double score = 0.0;
};

// Mean cosine between `entity` and every member of `members`.
double set_similarity(EntityId entity, std::span<const EntityId> members,
                      const VariantMatrix& vectors);
double set_similarity(EntityId entity, const EntitySet& set, const VariantMatrix& vectors);

// Set with the highest set_similarity; ties go to the lowest index.
std::pair<std::size_t, double> matched_set(EntityId entity, std::span<const EntitySet> sets,
                                           const VariantMatrix& vectors);

// Running sum of unit vectors for one set, so that
// set_similarity(e, E) = <v_e/|v_e|, sum> / |E|.
class SetCentroid {
 public:
  explicit SetCentroid(std::size_t dim) : sum_(dim, 0.0) {}
  void add(EntityId id, const VariantMatrix& vectors);
  std::span<const double> sum() const { return sum_; }
  std::size_t count() const { return count_; }

 private:
  std::vector<double> sum_;
  std::size_t count_ = 0;
};

// Scores every candidate against every set and keeps its matched set.
// The reference evaluates the per-member cosine mean directly; the kernel
// uses the centroid form in parallel. Output order follows `candidates`.
std::vector<ScoredCandidate> score_candidates_reference(std::span<const EntityId> candidates,
                                                        std::span<const EntitySet> sets,
                                                        const VariantMatrix& vectors);
std::vector<ScoredCandidate> score_candidates(std::span<const EntityId> candidates,
                                              std::span<const SetCentroid> centroids,
                                              const VariantMatrix& vectors, int threads = 0);

// Highest scores first, ties by canonical key ascending. A candidate is
// skipped when its matched set has no capacity left, counting picks already
// made in this call. Returns at most k entries.
std::vector<ScoredCandidate> pick_topk(std::span<const ScoredCandidate> scored,
                                       std::span<const std::size_t> capacity, std::size_t k,
                                       const EntityCatalog& catalog);

// Scores `candidates` against the current sets (reference route) and picks
// the top k, treating sets holding t expanded members as full.
std::vector<ScoredCandidate> select_topk(std::span<const EntityId> candidates,
                                         std::span<const EntitySet> sets, std::size_t k,
                                         std::size_t t, const VariantMatrix& vectors,
                                         const EntityCatalog& catalog);

using IterationObserver = std::function<void(const ExpansionState&)>;

// Iterative co-expansion. Each iteration scores the remaining pool once
// against the sets as they stood at its start, adds the top k to their
// matched sets and removes them from the pool. Stops when every set holds t
// expanded members or nothing eligible remains. Throws DataError when a seed
// has no embedding; pool entities without one are skipped.
ExpansionState run_coexpansion(const SeedSpec& seeds, const EntityCatalog& catalog,
                               const EmbeddingStore& store, const ExpansionConfig& config,
                               const IterationObserver& observer = {});

}  // namespace coexpand
