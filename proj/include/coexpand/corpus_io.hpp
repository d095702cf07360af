#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coexpand {

using EntityId = std::uint32_t;

struct CandidateEntity {
  EntityId id = 0;
  std::string surface;    // first surface form seen, used for display
  std::string canonical;  // lowercase, whitespace-collapsed key
};

struct SeedType {
  std::string name;
  std::vector<std::string> seeds;  // canonical keys, file order
};

// At least two types, non-empty seed lists, no key shared between or
// repeated within types. Enforced by load_seeds/parse_seeds.
struct SeedSpec {
  std::vector<SeedType> types;

  std::size_t size() const { return types.size(); }
  bool contains(std::string_view canonical) const;
  std::optional<std::size_t> type_index(std::string_view name) const;
};

class GoldLabels {
 public:
  GoldLabels() = default;
  explicit GoldLabels(std::unordered_map<std::string, std::string> labels)
      : labels_(std::move(labels)) {}

  // Looks up by canonical key of `entity`; nullopt means unknown.
  std::optional<std::string_view> type_of(std::string_view entity) const;
  // Unknown entities never match.
  bool matches(std::string_view entity, std::string_view type_name) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, std::string> labels_;
};

struct Document {
  std::string doc_id;
  std::string text;
};
using Corpus = std::vector<Document>;

// Pool entities keep ids 0..n-1; seed entities follow in type order, then seed
// order. Every stage rebuilds the same catalog from the same two files.
class EntityCatalog {
 public:
  EntityCatalog(std::vector<CandidateEntity> pool, const SeedSpec& seeds);

  const std::vector<CandidateEntity>& entities() const { return entities_; }
  const CandidateEntity& at(EntityId id) const;
  std::size_t size() const { return entities_.size(); }
  std::size_t pool_size() const { return pool_size_; }
  bool is_pool(EntityId id) const { return id < pool_size_; }
  std::optional<EntityId> find(std::string_view canonical) const;
  // Seed ids per type, same shape as SeedSpec::types.
  const std::vector<std::vector<EntityId>>& seed_ids() const { return seed_ids_; }

 private:
  std::vector<CandidateEntity> entities_;
  std::size_t pool_size_ = 0;
  std::unordered_map<std::string, EntityId> by_key_;
  std::vector<std::vector<EntityId>> seed_ids_;
};

// One surface form per line, '#' lines ignored. Deduplicated by canonical key
// (first occurrence wins), seed keys removed, ids dense in file order.
std::vector<CandidateEntity> parse_candidates(std::istream& in, const SeedSpec& seeds);
std::vector<CandidateEntity> load_candidates(const std::filesystem::path& path,
                                             const SeedSpec& seeds);

SeedSpec parse_seeds(std::string_view json_text);
SeedSpec load_seeds(const std::filesystem::path& path);

GoldLabels parse_gold(std::string_view json_text);
GoldLabels load_gold(const std::filesystem::path& path);

// JSON lines {"doc_id":..., "text":...}; blank lines skipped.
Corpus parse_corpus(std::istream& in);
Corpus load_corpus(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);

}  // namespace coexpand
