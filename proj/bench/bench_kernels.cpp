// Serial reference vs OpenMP kernels. Arg(0) is the serial path, Arg(n) the
// parallel one with n threads.

#include <benchmark/benchmark.h>

#include <cstdio>
#include <random>

#include "coexpand/coexpansion.hpp"
#include "coexpand/embedding_store.hpp"
#include "coexpand/occurrence_indexer.hpp"
#include "coexpand/synth.hpp"

using namespace coexpand;

namespace {

struct IndexFixture {
  Corpus corpus;
  std::vector<std::string> keys;
};

const IndexFixture& index_fixture() {
  static const IndexFixture fx = [] {
    IndexFixture f;
    std::mt19937 rng(5);
    for (int i = 0; i < 2000; ++i) f.keys.push_back("term" + std::to_string(i));
    for (int i = 0; i < 400; ++i) f.keys.push_back("term" + std::to_string(i) + " kit");
    for (int d = 0; d < 2000; ++d) {
      std::string text;
      for (int w = 0; w < 200; ++w) {
        text += (rng() % 3 == 0 ? "Term" : "word") + std::to_string(rng() % 2500);
        text += w % 20 == 19 ? ". " : (rng() % 7 == 0 ? " kit " : " ");
      }
      char id[16];
      std::snprintf(id, sizeof(id), "d%05d", d);
      f.corpus.push_back({id, text});
    }
    return f;
  }();
  return fx;
}

void BM_Index(benchmark::State& state) {
  const auto& fx = index_fixture();
  OccurrenceIndexer indexer(fx.keys);
  const int threads = static_cast<int>(state.range(0));
  std::size_t records = 0;
  for (auto _ : state) {
    auto r = threads == 0 ? index_occurrences_serial(fx.corpus, indexer)
                          : index_occurrences(fx.corpus, indexer, {false, std::nullopt, threads});
    records = r.records.size();
    benchmark::DoNotOptimize(r);
  }
  state.counters["records"] = static_cast<double>(records);
}
BENCHMARK(BM_Index)->Arg(0)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

const std::vector<OccurrenceEmbedding>& occurrence_fixture() {
  static const std::vector<OccurrenceEmbedding> occ = [] {
    std::mt19937 rng(6);
    std::normal_distribution<float> n;
    std::vector<OccurrenceEmbedding> v;
    for (int i = 0; i < 100000; ++i) {
      OccurrenceEmbedding e{static_cast<EntityId>(rng() % 5000), "d#" + std::to_string(i),
                            std::vector<float>(128), std::vector<float>(128)};
      for (auto& x : e.content) x = n(rng);
      for (auto& x : e.context) x = n(rng);
      v.push_back(std::move(e));
    }
    return v;
  }();
  return occ;
}

void BM_Aggregate(benchmark::State& state) {
  const auto& occ = occurrence_fixture();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto rows = threads == 0 ? aggregate_all_serial(occ) : aggregate_all(occ, threads);
    benchmark::DoNotOptimize(rows);
  }
}
BENCHMARK(BM_Aggregate)->Arg(0)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

struct ScoreFixture {
  EmbeddingStore store;
  std::vector<EntitySet> sets;
  std::vector<EntityId> pool;
};

const ScoreFixture& score_fixture() {
  static const ScoreFixture fx = [] {
    SynthConfig sc;
    sc.types = 8;
    sc.dim = 256;
    sc.per_cluster = 1000;
    sc.seeds_per_cluster = 40;
    sc.sigma = 0.1;
    auto synth = make_synth_fixture(sc);
    ScoreFixture f{EmbeddingStore(synth.embeddings), {}, {}};
    const EntityId pool = static_cast<EntityId>(synth.candidates.size());
    for (EntityId i = 0; i < pool; ++i) f.pool.push_back(i);
    EntityId next = pool;
    for (const auto& t : synth.seeds.types) {
      EntitySet s{t.name, {}, {}, false};
      for (std::size_t j = 0; j < t.seeds.size(); ++j) s.seeds.push_back(next++);
      f.sets.push_back(std::move(s));
    }
    return f;
  }();
  return fx;
}

void BM_ScoreReference(benchmark::State& state) {
  const auto& fx = score_fixture();
  VariantMatrix vm(fx.store, EmbeddingVariant::context);
  for (auto _ : state) {
    auto scored = score_candidates_reference(fx.pool, fx.sets, vm);
    benchmark::DoNotOptimize(scored);
  }
}
BENCHMARK(BM_ScoreReference)->Unit(benchmark::kMillisecond);

void BM_ScoreKernel(benchmark::State& state) {
  const auto& fx = score_fixture();
  VariantMatrix vm(fx.store, EmbeddingVariant::context);
  std::vector<SetCentroid> centroids;
  for (const auto& s : fx.sets) {
    SetCentroid c(vm.dim());
    for (EntityId id : s.members()) c.add(id, vm);
    centroids.push_back(std::move(c));
  }
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto scored = score_candidates(fx.pool, centroids, vm, threads);
    benchmark::DoNotOptimize(scored);
  }
}
BENCHMARK(BM_ScoreKernel)->Arg(1)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
