#include "coexpand/coexpansion.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "coexpand/error.hpp"
#include "coexpand/log.hpp"

namespace coexpand {

std::vector<EntityId> EntitySet::members() const {
  std::vector<EntityId> out(seeds);
  for (const auto& m : expanded) out.push_back(m.entity_id);
  return out;
}

double set_similarity(EntityId entity, std::span<const EntityId> members,
                      const VariantMatrix& vectors) {
  if (members.empty()) throw std::invalid_argument("set_similarity: empty set");
  auto e = vectors.row(entity);
  double total = 0.0;
  for (EntityId m : members) total += cosine(e, vectors.row(m));
  return total / static_cast<double>(members.size());
}

double set_similarity(EntityId entity, const EntitySet& set, const VariantMatrix& vectors) {
  auto members = set.members();
  return set_similarity(entity, members, vectors);
}

std::pair<std::size_t, double> matched_set(EntityId entity, std::span<const EntitySet> sets,
                                           const VariantMatrix& vectors) {
  if (sets.empty()) throw std::invalid_argument("matched_set: no sets");
  std::size_t best = 0;
  double best_score = set_similarity(entity, sets[0], vectors);
  for (std::size_t i = 1; i < sets.size(); ++i) {
    double s = set_similarity(entity, sets[i], vectors);
    if (s > best_score) {
      best = i;
      best_score = s;
    }
  }
  return {best, best_score};
}

void SetCentroid::add(EntityId id, const VariantMatrix& vectors) {
  auto v = vectors.row(id);
  double inv = vectors.inv_norm(id);
  for (std::size_t d = 0; d < sum_.size(); ++d) sum_[d] += v[d] * inv;
  ++count_;
}

std::vector<ScoredCandidate> score_candidates_reference(std::span<const EntityId> candidates,
                                                        std::span<const EntitySet> sets,
                                                        const VariantMatrix& vectors) {
  std::vector<ScoredCandidate> out;
  out.reserve(candidates.size());
  for (EntityId c : candidates) {
    auto [index, score] = matched_set(c, sets, vectors);
    out.push_back({c, index, score});
  }
  return out;
}

std::vector<ScoredCandidate> score_candidates(std::span<const EntityId> candidates,
                                              std::span<const SetCentroid> centroids,
                                              const VariantMatrix& vectors, int threads) {
  if (centroids.empty()) throw std::invalid_argument("score_candidates: no sets");
  const std::size_t dim = vectors.dim();
  const auto n = static_cast<std::int64_t>(candidates.size());
  std::vector<ScoredCandidate> out(candidates.size());
  int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    EntityId c = candidates[i];
    auto v = vectors.row(c);
    double inv = vectors.inv_norm(c);
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t s = 0; s < centroids.size(); ++s) {
      auto sum = centroids[s].sum();
      double dot = 0.0;
      for (std::size_t d = 0; d < dim; ++d) dot += v[d] * sum[d];
      double score = dot * inv / static_cast<double>(centroids[s].count());
      if (s == 0 || score > best_score) {
        best = s;
        best_score = score;
      }
    }
    out[i] = {c, best, best_score};
  }
  return out;
}

std::vector<ScoredCandidate> pick_topk(std::span<const ScoredCandidate> scored,
                                       std::span<const std::size_t> capacity, std::size_t k,
                                       const EntityCatalog& catalog) {
  if (k == 0) throw std::invalid_argument("pick_topk: k must be >= 1");
  std::vector<const ScoredCandidate*> order;
  order.reserve(scored.size());
  for (const auto& s : scored) {
    if (s.matched_set >= capacity.size()) throw std::out_of_range("pick_topk: bad set index");
    if (capacity[s.matched_set] > 0) order.push_back(&s);
  }
  std::sort(order.begin(), order.end(), [&](const auto* a, const auto* b) {
    if (a->score != b->score) return a->score > b->score;
    return catalog.at(a->entity_id).canonical < catalog.at(b->entity_id).canonical;
  });
  std::vector<std::size_t> left(capacity.begin(), capacity.end());
  std::vector<ScoredCandidate> picked;
  for (const auto* s : order) {
    if (picked.size() == k) break;
    if (left[s->matched_set] == 0) continue;
    --left[s->matched_set];
    picked.push_back(*s);
  }
  return picked;
}

std::vector<ScoredCandidate> select_topk(std::span<const EntityId> candidates,
                                         std::span<const EntitySet> sets, std::size_t k,
                                         std::size_t t, const VariantMatrix& vectors,
                                         const EntityCatalog& catalog) {
  auto scored = score_candidates_reference(candidates, sets, vectors);
  std::vector<std::size_t> capacity;
  for (const auto& s : sets) capacity.push_back(t - std::min(t, s.expanded.size()));
  return pick_topk(scored, capacity, k, catalog);
}

ExpansionState run_coexpansion(const SeedSpec& seeds, const EntityCatalog& catalog,
                               const EmbeddingStore& store, const ExpansionConfig& config,
                               const IterationObserver& observer) {
  if (config.k == 0) throw std::invalid_argument("k must be >= 1");
  if (seeds.size() != catalog.seed_ids().size()) {
    throw std::invalid_argument("seed spec does not match the catalog");
  }

  VariantMatrix vectors(store, config.variant, config.normalize_parts);
  ExpansionState state;
  std::vector<SetCentroid> centroids;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EntitySet set{seeds.types[i].name, catalog.seed_ids()[i], {}, false};
    SetCentroid centroid(vectors.dim());
    for (EntityId id : set.seeds) {
      if (!store.contains(id)) {
        throw DataError("seed '" + catalog.at(id).canonical + "' (" + set.type_name +
                        ") has no embedding");
      }
      centroid.add(id, vectors);
    }
    state.sets.push_back(std::move(set));
    centroids.push_back(std::move(centroid));
  }

  std::vector<EntityId> pool;
  for (EntityId id = 0; id < catalog.pool_size(); ++id) {
    if (store.contains(id)) pool.push_back(id);
  }

  auto capacity = [&] {
    std::vector<std::size_t> cap;
    for (const auto& s : state.sets) cap.push_back(config.t - std::min(config.t, s.expanded.size()));
    return cap;
  };

  while (!pool.empty()) {
    auto cap = capacity();
    if (std::all_of(cap.begin(), cap.end(), [](std::size_t c) { return c == 0; })) break;

    auto scored = score_candidates(pool, centroids, vectors, config.threads);
    auto picked = pick_topk(scored, cap, config.k, catalog);
    if (picked.empty()) break;

    ++state.iterations;
    for (const auto& p : picked) {
      auto& set = state.sets[p.matched_set];
      set.expanded.push_back({p.entity_id, state.iterations, p.score, set.expanded.size() + 1});
    }
    // Centroids change only after the whole batch is placed.
    for (const auto& p : picked) centroids[p.matched_set].add(p.entity_id, vectors);

    std::vector<EntityId> taken;
    for (const auto& p : picked) taken.push_back(p.entity_id);
    std::sort(taken.begin(), taken.end());
    std::erase_if(pool, [&](EntityId id) { return std::binary_search(taken.begin(), taken.end(), id); });

    if (observer) observer(state);
  }

  for (auto& set : state.sets) {
    if (set.expanded.size() < config.t) {
      set.unfilled = true;
      log::warn("set " + set.type_name + " stopped at " + std::to_string(set.expanded.size()) +
                " of " + std::to_string(config.t) + " expanded entities");
    }
  }
  return state;
}

}  // namespace coexpand
