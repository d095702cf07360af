#include "coexpand/corpus_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "coexpand/error.hpp"
#include "coexpand/log.hpp"
#include "coexpand/text.hpp"

namespace coexpand {

using ordered_json = nlohmann::ordered_json;

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

std::size_t line_of(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

ordered_json parse_json_document(std::string_view text, std::string_view what) {
  try {
    return ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(std::string(what) + ": " + e.what());
  }
}

}  // namespace

bool SeedSpec::contains(std::string_view canonical) const {
  for (const auto& t : types) {
    if (std::find(t.seeds.begin(), t.seeds.end(), canonical) != t.seeds.end()) return true;
  }
  return false;
}

std::optional<std::size_t> SeedSpec::type_index(std::string_view name) const {
  for (std::size_t i = 0; i < types.size(); ++i) {
    if (types[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::string_view> GoldLabels::type_of(std::string_view entity) const {
  auto key = text::canonicalize(entity);
  if (!key) return std::nullopt;
  auto it = labels_.find(*key);
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

bool GoldLabels::matches(std::string_view entity, std::string_view type_name) const {
  auto t = type_of(entity);
  return t && *t == type_name;
}

EntityCatalog::EntityCatalog(std::vector<CandidateEntity> pool, const SeedSpec& seeds)
    : entities_(std::move(pool)), pool_size_(entities_.size()) {
  for (std::size_t i = 0; i < entities_.size(); ++i) {
    if (entities_[i].id != i) throw DataError("pool ids must be dense and in order");
    if (!by_key_.emplace(entities_[i].canonical, entities_[i].id).second) {
      throw DataError("duplicate pool key '" + entities_[i].canonical + "'");
    }
  }
  for (const auto& t : seeds.types) {
    auto& ids = seed_ids_.emplace_back();
    for (const auto& key : t.seeds) {
      auto id = static_cast<EntityId>(entities_.size());
      if (!by_key_.emplace(key, id).second) {
        throw DataError("seed '" + key + "' also present in the candidate pool");
      }
      entities_.push_back({id, key, key});
      ids.push_back(id);
    }
  }
}

const CandidateEntity& EntityCatalog::at(EntityId id) const {
  if (id >= entities_.size()) throw LookupError("unknown entity id " + std::to_string(id));
  return entities_[id];
}

std::optional<EntityId> EntityCatalog::find(std::string_view canonical) const {
  auto it = by_key_.find(std::string(canonical));
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

std::vector<CandidateEntity> parse_candidates(std::istream& in, const SeedSpec& seeds) {
  std::vector<CandidateEntity> pool;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  std::size_t seed_hits = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.starts_with('#')) continue;
    if (text::trim(line).empty()) continue;
    auto key = text::canonicalize(line);
    if (!key) {
      log::warn("candidates line " + std::to_string(lineno) + ": empty entity rejected");
      continue;
    }
    if (seeds.contains(*key)) {
      ++seed_hits;
      continue;
    }
    if (!seen.insert(*key).second) continue;
    auto id = static_cast<EntityId>(pool.size());
    pool.push_back({id, std::string(text::trim(line)), std::move(*key)});
  }
  if (pool.empty()) throw DataError("candidate pool is empty after filtering");
  if (seed_hits > 0) {
    log::info("removed " + std::to_string(seed_hits) + " candidate line(s) matching seeds");
  }
  return pool;
}

std::vector<CandidateEntity> load_candidates(const std::filesystem::path& path,
                                             const SeedSpec& seeds) {
  auto in = open_input(path);
  return parse_candidates(in, seeds);
}

SeedSpec parse_seeds(std::string_view json_text) {
  auto doc = parse_json_document(json_text, "seeds file");
  if (!doc.is_object() || !doc.contains("types") || !doc["types"].is_array()) {
    throw DataError("seeds file: expected {\"types\":[...]}");
  }
  SeedSpec spec;
  std::unordered_map<std::string, std::string> owner;
  for (const auto& t : doc["types"]) {
    if (!t.is_object() || !t.contains("name") || !t["name"].is_string() ||
        !t.contains("seeds") || !t["seeds"].is_array()) {
      throw DataError("seeds file: each type needs \"name\" and \"seeds\"");
    }
    SeedType type{t["name"].get<std::string>(), {}};
    if (spec.type_index(type.name)) throw DataError("seeds file: duplicate type " + type.name);
    for (const auto& s : t["seeds"]) {
      if (!s.is_string()) throw DataError("seeds file: seed entries must be strings");
      auto key = text::canonicalize(s.get<std::string>());
      if (!key) throw DataError("seeds file: empty seed in type " + type.name);
      auto [it, inserted] = owner.emplace(*key, type.name);
      if (!inserted) {
        if (it->second == type.name) {
          throw DataError("seeds file: duplicate seed '" + *key + "' in type " + type.name);
        }
        throw DataError("seeds file: seed '" + *key + "' appears in both " + it->second +
                        " and " + type.name);
      }
      type.seeds.push_back(std::move(*key));
    }
    if (type.seeds.empty()) throw DataError("seeds file: type " + type.name + " has no seeds");
    spec.types.push_back(std::move(type));
  }
  if (spec.types.size() < 2) throw DataError("seeds file: co-expansion needs at least 2 types");
  return spec;
}

SeedSpec load_seeds(const std::filesystem::path& path) { return parse_seeds(read_file(path)); }

GoldLabels parse_gold(std::string_view json_text) {
  auto doc = parse_json_document(json_text, "gold file");
  if (!doc.is_object()) throw DataError("gold file: expected a JSON object");
  std::unordered_map<std::string, std::string> labels;
  std::size_t cursor = 0;
  for (const auto& [entity, type] : doc.items()) {
    // Keys are visited in file order; locate each to report a line number.
    auto quoted = ordered_json(entity).dump();
    auto pos = json_text.find(quoted, cursor);
    if (pos != std::string_view::npos) cursor = pos + quoted.size();
    auto where = "gold file line " + std::to_string(line_of(json_text, pos == std::string_view::npos ? cursor : pos));
    if (!type.is_string() || type.get<std::string>().empty()) {
      throw DataError(where + ": type for '" + entity + "' must be a non-empty string");
    }
    auto key = text::canonicalize(entity);
    if (!key) throw DataError(where + ": empty entity");
    auto [it, inserted] = labels.emplace(*key, type.get<std::string>());
    if (!inserted && it->second != type.get<std::string>()) {
      throw DataError(where + ": '" + *key + "' labeled both " + it->second + " and " +
                      type.get<std::string>());
    }
  }
  return GoldLabels(std::move(labels));
}

GoldLabels load_gold(const std::filesystem::path& path) { return parse_gold(read_file(path)); }

Corpus parse_corpus(std::istream& in) {
  Corpus corpus;
  std::unordered_set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    auto where = "corpus line " + std::to_string(lineno);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("doc_id") || !obj.contains("text") ||
        !obj["text"].is_string()) {
      throw DataError(where + ": expected {\"doc_id\":...,\"text\":...}");
    }
    const auto& raw_id = obj["doc_id"];
    std::string doc_id = raw_id.is_string() ? raw_id.get<std::string>() : raw_id.dump();
    if (!ids.insert(doc_id).second) throw DataError(where + ": duplicate doc_id " + doc_id);
    corpus.push_back({std::move(doc_id), obj["text"].get<std::string>()});
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_corpus(in);
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace coexpand
