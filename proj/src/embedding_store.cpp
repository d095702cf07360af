#include "coexpand/embedding_store.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <omp.h>

#include "coexpand/error.hpp"

namespace coexpand {

namespace {

std::atomic<std::uint64_t> g_zero_norm{0};

bool all_finite(const std::vector<float>& v) {
  return std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); });
}

// Index ranges [begin, end) of each entity's occurrences after a stable sort
// by entity id.
struct Groups {
  std::vector<OccurrenceEmbedding> sorted;
  std::vector<std::size_t> starts;
};

Groups group_by_entity(std::span<const OccurrenceEmbedding> occurrences) {
  Groups g;
  g.sorted.assign(occurrences.begin(), occurrences.end());
  std::stable_sort(g.sorted.begin(), g.sorted.end(),
                   [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
  for (std::size_t i = 0; i < g.sorted.size(); ++i) {
    if (i == 0 || g.sorted[i].entity_id != g.sorted[i - 1].entity_id) g.starts.push_back(i);
  }
  g.starts.push_back(g.sorted.size());
  return g;
}

void normalize(std::span<float> v) {
  double sq = 0.0;
  for (float x : v) sq += static_cast<double>(x) * x;
  double n = std::sqrt(sq);
  if (n < kMinNorm) return;
  for (float& x : v) x = static_cast<float>(x / n);
}

}  // namespace

std::string_view to_string(EmbeddingVariant v) {
  switch (v) {
    case EmbeddingVariant::content: return "content";
    case EmbeddingVariant::context: return "context";
    case EmbeddingVariant::both: return "both";
  }
  return "?";
}

std::optional<EmbeddingVariant> parse_variant(std::string_view s) {
  if (s == "content") return EmbeddingVariant::content;
  if (s == "context") return EmbeddingVariant::context;
  if (s == "both") return EmbeddingVariant::both;
  return std::nullopt;
}

CorpusEmbedding aggregate(std::span<const OccurrenceEmbedding> occurrences) {
  if (occurrences.empty()) throw DataError("aggregate: no occurrences");
  const std::size_t dim = occurrences.front().content.size();
  const EntityId id = occurrences.front().entity_id;

  std::vector<std::size_t> order(occurrences.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return occurrences[a].sentence_id < occurrences[b].sentence_id;
  });

  std::vector<double> content(dim, 0.0);
  std::vector<double> context(dim, 0.0);
  for (std::size_t i : order) {
    const auto& occ = occurrences[i];
    if (occ.entity_id != id) throw DataError("aggregate: mixed entity ids");
    if (occ.content.size() != dim || occ.context.size() != dim) {
      throw DataError("aggregate: dimension mismatch for entity " + std::to_string(id));
    }
    for (std::size_t d = 0; d < dim; ++d) {
      content[d] += occ.content[d];
      context[d] += occ.context[d];
    }
  }

  CorpusEmbedding out{id, std::vector<float>(dim), std::vector<float>(dim), occurrences.size()};
  const double n = static_cast<double>(occurrences.size());
  for (std::size_t d = 0; d < dim; ++d) {
    out.content[d] = static_cast<float>(content[d] / n);
    out.context[d] = static_cast<float>(context[d] / n);
  }
  return out;
}

std::vector<CorpusEmbedding> aggregate_all_serial(std::span<const OccurrenceEmbedding> occurrences) {
  auto g = group_by_entity(occurrences);
  std::vector<CorpusEmbedding> out;
  out.reserve(g.starts.size() - 1);
  for (std::size_t i = 0; i + 1 < g.starts.size(); ++i) {
    std::span<const OccurrenceEmbedding> group(g.sorted.data() + g.starts[i],
                                               g.starts[i + 1] - g.starts[i]);
    out.push_back(aggregate(group));
  }
  return out;
}

std::vector<CorpusEmbedding> aggregate_all(std::span<const OccurrenceEmbedding> occurrences,
                                           int threads) {
  auto g = group_by_entity(occurrences);
  const auto groups = static_cast<std::int64_t>(g.starts.size()) - 1;
  std::vector<CorpusEmbedding> out(static_cast<std::size_t>(std::max<std::int64_t>(groups, 0)));
  std::exception_ptr error;
  int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for num_threads(nthreads) schedule(dynamic, 64)
  for (std::int64_t i = 0; i < groups; ++i) {
    std::span<const OccurrenceEmbedding> group(g.sorted.data() + g.starts[i],
                                               g.starts[i + 1] - g.starts[i]);
    try {
      out[i] = aggregate(group);
    } catch (...) {
#pragma omp critical
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return out;
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) throw std::invalid_argument("cosine: dimension mismatch");
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double a = u[i];
    double b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  double nu = std::sqrt(uu);
  double nv = std::sqrt(vv);
  if (nu < kMinNorm || nv < kMinNorm) {
    g_zero_norm.fetch_add(1, std::memory_order_relaxed);
    return 0.0;
  }
  return std::clamp(dot / (nu * nv), -1.0, 1.0);
}

std::uint64_t zero_norm_warnings() { return g_zero_norm.load(std::memory_order_relaxed); }

EmbeddingStore::EmbeddingStore(std::vector<CorpusEmbedding> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.entity_id < b.entity_id; });
  if (!entries_.empty()) dim_ = entries_.front().content.size();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    auto who = "entity " + std::to_string(e.entity_id);
    if (e.content.size() != dim_ || e.context.size() != dim_) {
      throw DataError(who + ": embedding dimension differs from " + std::to_string(dim_));
    }
    if (e.occurrence_count == 0) throw DataError(who + ": occurrence count must be >= 1");
    if (!all_finite(e.content) || !all_finite(e.context)) throw DataError(who + ": non-finite value");
    if (!index_.emplace(e.entity_id, i).second) throw DataError(who + ": listed twice");
  }
}

const CorpusEmbedding& EmbeddingStore::at(EntityId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("no embedding for entity " + std::to_string(id));
  return entries_[it->second];
}

std::size_t EmbeddingStore::variant_dim(EmbeddingVariant variant) const {
  return variant == EmbeddingVariant::both ? 2 * dim_ : dim_;
}

std::vector<float> EmbeddingStore::vector_of(EntityId id, EmbeddingVariant variant,
                                             bool normalize_parts) const {
  const auto& e = at(id);
  std::vector<float> out;
  switch (variant) {
    case EmbeddingVariant::content:
      out = e.content;
      break;
    case EmbeddingVariant::context:
      out = e.context;
      break;
    case EmbeddingVariant::both:
      out.reserve(2 * dim_);
      out.insert(out.end(), e.content.begin(), e.content.end());
      out.insert(out.end(), e.context.begin(), e.context.end());
      if (normalize_parts) {
        normalize(std::span<float>(out).first(dim_));
        normalize(std::span<float>(out).subspan(dim_));
      }
      break;
  }
  return out;
}

VariantMatrix::VariantMatrix(const EmbeddingStore& store, EmbeddingVariant variant,
                             bool normalize_parts)
    : dim_(store.variant_dim(variant)) {
  data_.reserve(store.size() * dim_);
  inv_norm_.reserve(store.size());
  for (const auto& e : store.entries()) {
    auto v = store.vector_of(e.entity_id, variant, normalize_parts);
    double sq = 0.0;
    for (float x : v) sq += static_cast<double>(x) * x;
    double n = std::sqrt(sq);
    row_of_.emplace(e.entity_id, inv_norm_.size());
    inv_norm_.push_back(n < kMinNorm ? 0.0 : 1.0 / n);
    data_.insert(data_.end(), v.begin(), v.end());
  }
}

std::size_t VariantMatrix::index(EntityId id) const {
  auto it = row_of_.find(id);
  if (it == row_of_.end()) throw LookupError("no embedding for entity " + std::to_string(id));
  return it->second;
}

std::span<const float> VariantMatrix::row(EntityId id) const {
  return {data_.data() + index(id) * dim_, dim_};
}

double VariantMatrix::inv_norm(EntityId id) const { return inv_norm_[index(id)]; }

}  // namespace coexpand
