#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "coexpand/coexpansion.hpp"
#include "coexpand/evaluation.hpp"
#include "coexpand/occurrence_indexer.hpp"
#include "coexpand/synth.hpp"

namespace coexpand {

// Everything a subcommand may read. Each command uses only the fields it
// needs and reads every input from files.
struct RunConfig {
  EmbeddingVariant variant = EmbeddingVariant::context;
  std::size_t k = 10;
  std::size_t t = 30;

  std::filesystem::path corpus;
  std::filesystem::path candidates;
  std::filesystem::path seeds;
  std::filesystem::path occurrences;  // index output
  std::filesystem::path summary;      // index output, optional
  std::filesystem::path embeddings;   // per-occurrence embeddings, aggregate input
  std::filesystem::path aggregated;   // aggregate output, expand input
  std::filesystem::path gold;
  std::filesystem::path result;
  std::filesystem::path report;
  std::filesystem::path out_dir;      // synth output

  bool dedup_sentences = false;
  std::optional<std::size_t> max_occurrences;
  bool normalize_parts = false;
  int threads = 0;
  std::vector<std::size_t> ks{10, 20, 30};

  SynthConfig synth;
  bool synth_corpus = false;
};

IndexResult cmd_index(const RunConfig& config);
std::vector<CorpusEmbedding> cmd_aggregate(const RunConfig& config);
ExpansionState cmd_expand(const RunConfig& config, const IterationObserver& observer = {});
EvalReport cmd_eval(const RunConfig& config);
SynthFixture cmd_synth(const RunConfig& config);

// File names cmd_synth writes inside out_dir.
namespace synth_files {
inline constexpr const char* kCandidates = "candidates.txt";
inline constexpr const char* kSeeds = "seeds.json";
inline constexpr const char* kGold = "gold.json";
inline constexpr const char* kAggregated = "aggregated.jsonl";
inline constexpr const char* kCorpus = "corpus.jsonl";
}  // namespace synth_files

}  // namespace coexpand
