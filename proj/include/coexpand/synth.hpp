#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coexpand/corpus_io.hpp"
#include "coexpand/embedding_store.hpp"

namespace coexpand {

struct SynthConfig {
  std::size_t types = 4;
  std::size_t dim = 16;
  std::size_t per_cluster = 50;       // pool candidates per type
  std::size_t seeds_per_cluster = 5;
  double sigma = 0.05;                // per-component Gaussian noise
  std::uint64_t random_seed = 42;
  bool plant_midpoint = false;        // one unlabeled entity between clusters 0 and 1
  std::size_t mentions_per_entity = 3;  // corpus only
};

// Clustered embeddings with known labels. Entity ids follow EntityCatalog:
// pool candidates first (cluster-major), then seeds.
struct SynthFixture {
  std::vector<std::string> candidates;  // pool surface forms in id order
  SeedSpec seeds;
  std::vector<CorpusEmbedding> embeddings;
  std::map<std::string, std::string> gold;  // canonical key -> type
  std::vector<std::vector<float>> centers;
  Corpus corpus;  // every entity mentioned mentions_per_entity times
};

SynthFixture make_synth_fixture(const SynthConfig& config);

}  // namespace coexpand
