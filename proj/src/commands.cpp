#include "coexpand/commands.hpp"

#include <fstream>

#include <json.hpp>

#include "coexpand/error.hpp"
#include "coexpand/formats.hpp"
#include "coexpand/log.hpp"

namespace coexpand {

namespace {

namespace fs = std::filesystem;

const fs::path& require(const fs::path& p, const char* flag) {
  if (p.empty()) throw std::invalid_argument(std::string("missing required --") + flag);
  return p;
}

std::ifstream open_in(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw DataError("cannot read " + p.string());
  return in;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + p.string());
  return out;
}

void finish(std::ofstream& out, const fs::path& p) {
  out.flush();
  if (!out) throw DataError("write failed: " + p.string());
}

EntityCatalog load_catalog(const RunConfig& config, SeedSpec& seeds) {
  seeds = load_seeds(require(config.seeds, "seeds"));
  return EntityCatalog(load_candidates(require(config.candidates, "candidates"), seeds), seeds);
}

void check_ids(const EntityCatalog& catalog, EntityId id, std::string_view file) {
  if (id >= catalog.size()) {
    throw DataError(std::string(file) + ": entity_id " + std::to_string(id) +
                    " is outside the catalog (" + std::to_string(catalog.size()) + " entities)");
  }
}

}  // namespace

IndexResult cmd_index(const RunConfig& config) {
  SeedSpec seeds;
  auto catalog = load_catalog(config, seeds);
  auto corpus = load_corpus(require(config.corpus, "corpus"));
  const auto& out_path = require(config.occurrences, "occurrences");

  OccurrenceIndexer indexer(catalog);
  IndexOptions options{config.dedup_sentences, config.max_occurrences, config.threads};
  auto result = index_occurrences(corpus, indexer, options);

  auto out = open_out(out_path);
  formats::write_occurrences(out, result.records);
  finish(out, out_path);
  if (!config.summary.empty()) {
    auto sum = open_out(config.summary);
    formats::write_summary(sum, result.counts);
    finish(sum, config.summary);
  }

  for (EntityId id : result.unmatched) {
    if (!catalog.is_pool(id)) log::warn("seed '" + catalog.at(id).canonical + "' never occurs in the corpus");
  }
  log::info("indexed " + std::to_string(result.records.size()) + " occurrences; " +
            std::to_string(result.unmatched.size()) + " of " + std::to_string(catalog.size()) +
            " entities have none");
  return result;
}

std::vector<CorpusEmbedding> cmd_aggregate(const RunConfig& config) {
  SeedSpec seeds;
  auto catalog = load_catalog(config, seeds);
  const auto& in_path = require(config.embeddings, "embeddings");
  const auto& out_path = require(config.aggregated, "aggregated");

  auto in = open_in(in_path);
  auto file = formats::read_occurrence_embeddings(in);
  for (const auto& r : file.records) check_ids(catalog, r.entity_id, in_path.string());

  auto rows = aggregate_all(file.records, config.threads);
  EmbeddingStore store(rows);

  std::string missing_seeds;
  for (const auto& ids : catalog.seed_ids()) {
    for (EntityId id : ids) {
      if (!store.contains(id)) missing_seeds += " '" + catalog.at(id).canonical + "'";
    }
  }
  if (!missing_seeds.empty()) throw DataError("seeds without embeddings:" + missing_seeds);

  std::size_t missing_pool = 0;
  for (EntityId id = 0; id < catalog.pool_size(); ++id) missing_pool += store.contains(id) ? 0 : 1;
  if (missing_pool > 0) {
    log::info(std::to_string(missing_pool) + " pool entities have no embedding and are excluded");
  }

  auto out = open_out(out_path);
  formats::write_aggregated(out, file.dim, rows);
  finish(out, out_path);
  return rows;
}

ExpansionState cmd_expand(const RunConfig& config, const IterationObserver& observer) {
  SeedSpec seeds;
  auto catalog = load_catalog(config, seeds);
  const auto& in_path = require(config.aggregated, "aggregated");
  const auto& out_path = require(config.result, "result");

  auto in = open_in(in_path);
  auto rows = formats::read_aggregated(in);
  for (const auto& r : rows) check_ids(catalog, r.entity_id, in_path.string());
  EmbeddingStore store(std::move(rows));

  ExpansionConfig ec{config.variant, config.k, config.t, config.normalize_parts, config.threads};
  auto state = run_coexpansion(seeds, catalog, store, ec, observer);

  auto out = open_out(out_path);
  formats::write_result(out, state, catalog, ec);
  finish(out, out_path);
  return state;
}

EvalReport cmd_eval(const RunConfig& config) {
  const auto& result_path = require(config.result, "result");
  const auto& out_path = require(config.report, "report");
  auto result = formats::read_result(read_file(result_path));
  auto gold = load_gold(require(config.gold, "gold"));
  auto report = precision_at_k(result.sets, gold, config.ks);

  auto out = open_out(out_path);
  formats::write_report(out, report);
  finish(out, out_path);
  return report;
}

SynthFixture cmd_synth(const RunConfig& config) {
  const auto& dir = require(config.out_dir, "out-dir");
  auto fx = make_synth_fixture(config.synth);
  fs::create_directories(dir);

  {
    auto p = dir / synth_files::kCandidates;
    auto out = open_out(p);
    out << "# synthetic candidate pool, random seed " << config.synth.random_seed << '\n';
    for (const auto& c : fx.candidates) out << c << '\n';
    finish(out, p);
  }
  {
    nlohmann::ordered_json j;
    auto& types = j["types"] = nlohmann::ordered_json::array();
    for (const auto& t : fx.seeds.types) types.push_back({{"name", t.name}, {"seeds", t.seeds}});
    auto p = dir / synth_files::kSeeds;
    auto out = open_out(p);
    out << j.dump(2) << '\n';
    finish(out, p);
  }
  {
    nlohmann::ordered_json j(fx.gold);
    auto p = dir / synth_files::kGold;
    auto out = open_out(p);
    out << j.dump(2) << '\n';
    finish(out, p);
  }
  {
    auto p = dir / synth_files::kAggregated;
    auto out = open_out(p);
    formats::write_aggregated(out, config.synth.dim, fx.embeddings);
    finish(out, p);
  }
  if (config.synth_corpus) {
    auto p = dir / synth_files::kCorpus;
    auto out = open_out(p);
    for (const auto& d : fx.corpus) {
      nlohmann::ordered_json j;
      j["doc_id"] = d.doc_id;
      j["text"] = d.text;
      out << j.dump() << '\n';
    }
    finish(out, p);
  }
  return fx;
}

}  // namespace coexpand
