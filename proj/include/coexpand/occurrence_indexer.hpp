#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coexpand/corpus_io.hpp"
#include "coexpand/pattern_matcher.hpp"
#include "coexpand/sentence.hpp"

namespace coexpand {

// One hit of an entity inside a sentence. start/end are code-point offsets
// into `sentence`, end exclusive.
struct OccurrenceRecord {
  EntityId entity_id = 0;
  std::string sentence_id;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::string sentence;

  bool operator==(const OccurrenceRecord&) const = default;
};

struct IndexOptions {
  bool dedup_sentences = false;                  // skip repeated sentence texts
  std::optional<std::size_t> max_occurrences;    // per entity, first n in stream order
  int threads = 0;                               // 0: OpenMP default
};

struct IndexResult {
  std::vector<OccurrenceRecord> records;
  std::vector<std::size_t> counts;  // per entity id, after dedup and cap
  std::vector<EntityId> unmatched;  // entities with no occurrence
};

// Matches canonical keys against sentences: case-folded, any whitespace run
// matches one space, and neither side of the hit may touch a letter or digit.
class OccurrenceIndexer {
 public:
  // keys[i] is the canonical key of entity id i; keys must be distinct.
  explicit OccurrenceIndexer(std::vector<std::string> keys);
  explicit OccurrenceIndexer(const EntityCatalog& catalog);

  std::size_t entity_count() const { return pattern_entity_.size(); }

  // Hits in one sentence, ordered by (start, entity_id).
  std::vector<OccurrenceRecord> match_sentence(const Sentence& sentence) const;

 private:
  PatternMatcher matcher_;
  std::vector<EntityId> pattern_entity_;
};

// Output is ordered by (doc_id, sentence index, start, entity_id). The
// parallel version splits work over documents and merges to the same stream.
IndexResult index_occurrences_serial(const Corpus& corpus, const OccurrenceIndexer& indexer,
                                     const IndexOptions& options = {});
IndexResult index_occurrences(const Corpus& corpus, const OccurrenceIndexer& indexer,
                              const IndexOptions& options = {});

}  // namespace coexpand
