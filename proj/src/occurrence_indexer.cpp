#include "coexpand/occurrence_indexer.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include <omp.h>

#include "coexpand/error.hpp"
#include "coexpand/text.hpp"

namespace coexpand {

namespace {

std::vector<std::string> catalog_keys(const EntityCatalog& catalog) {
  std::vector<std::string> keys;
  keys.reserve(catalog.size());
  for (const auto& e : catalog.entities()) keys.push_back(e.canonical);
  return keys;
}

// Case-folded, whitespace-collapsed copy of a sentence, with maps back to the
// original code-point positions.
struct Shadow {
  std::string bytes;
  std::u32string cps;
  std::vector<std::uint32_t> original;  // shadow cp -> original cp index
  std::vector<std::uint32_t> cp_at;     // shadow byte -> shadow cp index (size bytes+1)
};

Shadow make_shadow(std::string_view sentence) {
  Shadow sh;
  auto cps = text::decode_utf8(sentence);
  for (std::uint32_t i = 0; i < cps.size(); ++i) {
    char32_t cp = cps[i];
    if (text::is_space(cp)) {
      if (sh.cps.empty() || sh.cps.back() == U' ') continue;
      cp = U' ';
    } else {
      cp = text::fold_case(cp);
    }
    auto cp_index = static_cast<std::uint32_t>(sh.cps.size());
    std::size_t before = sh.bytes.size();
    text::append_utf8(sh.bytes, cp);
    sh.cp_at.insert(sh.cp_at.end(), sh.bytes.size() - before, cp_index);
    sh.cps.push_back(cp);
    sh.original.push_back(i);
  }
  sh.cp_at.push_back(static_cast<std::uint32_t>(sh.cps.size()));
  return sh;
}

struct DocumentHits {
  std::vector<Sentence> sentences;
  std::vector<std::vector<OccurrenceRecord>> hits;  // per sentence
};

DocumentHits match_document(const Document& doc, const OccurrenceIndexer& indexer) {
  DocumentHits out;
  out.sentences = split_sentences(doc);
  out.hits.reserve(out.sentences.size());
  for (const auto& s : out.sentences) out.hits.push_back(indexer.match_sentence(s));
  return out;
}

std::vector<std::size_t> document_order(const Corpus& corpus) {
  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return corpus[a].doc_id < corpus[b].doc_id; });
  return order;
}

// Sequential merge in stream order; dedup and the cap depend on what came
// earlier in the stream.
IndexResult merge(std::vector<DocumentHits>& docs, std::size_t entity_count,
                  const IndexOptions& options) {
  IndexResult result;
  result.counts.assign(entity_count, 0);
  std::unordered_set<std::string> seen_text;
  for (auto& doc : docs) {
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
      if (options.dedup_sentences && !seen_text.insert(doc.sentences[s].text).second) continue;
      for (auto& rec : doc.hits[s]) {
        auto& n = result.counts[rec.entity_id];
        if (options.max_occurrences && n >= *options.max_occurrences) continue;
        ++n;
        result.records.push_back(std::move(rec));
      }
    }
  }
  for (std::size_t id = 0; id < entity_count; ++id) {
    if (result.counts[id] == 0) result.unmatched.push_back(static_cast<EntityId>(id));
  }
  return result;
}

}  // namespace

OccurrenceIndexer::OccurrenceIndexer(std::vector<std::string> keys) {
  pattern_entity_.reserve(keys.size());
  for (std::size_t id = 0; id < keys.size(); ++id) {
    auto canonical = text::canonicalize(keys[id]);
    if (!canonical || *canonical != keys[id]) {
      throw DataError("entity key '" + keys[id] + "' is not canonical");
    }
    try {
      matcher_.add(keys[id]);
    } catch (const std::invalid_argument&) {
      throw DataError("duplicate entity key '" + keys[id] + "'");
    }
    pattern_entity_.push_back(static_cast<EntityId>(id));
  }
  matcher_.compile();
}

OccurrenceIndexer::OccurrenceIndexer(const EntityCatalog& catalog)
    : OccurrenceIndexer(catalog_keys(catalog)) {}

std::vector<OccurrenceRecord> OccurrenceIndexer::match_sentence(const Sentence& sentence) const {
  std::vector<OccurrenceRecord> out;
  Shadow sh = make_shadow(sentence.text);
  matcher_.scan(sh.bytes, [&](std::uint32_t pattern, std::size_t b, std::size_t e) {
    std::uint32_t first = sh.cp_at[b];
    std::uint32_t last = sh.cp_at[e];  // exclusive
    if (first > 0 && text::is_word_char(sh.cps[first - 1])) return;
    if (last < sh.cps.size() && text::is_word_char(sh.cps[last])) return;
    out.push_back({pattern_entity_[pattern], sentence.sentence_id, sh.original[first],
                   sh.original[last - 1] + 1, sentence.text});
  });
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.start != b.start ? a.start < b.start : a.entity_id < b.entity_id;
  });
  return out;
}

IndexResult index_occurrences_serial(const Corpus& corpus, const OccurrenceIndexer& indexer,
                                     const IndexOptions& options) {
  std::vector<DocumentHits> docs;
  docs.reserve(corpus.size());
  for (std::size_t d : document_order(corpus)) docs.push_back(match_document(corpus[d], indexer));
  return merge(docs, indexer.entity_count(), options);
}

IndexResult index_occurrences(const Corpus& corpus, const OccurrenceIndexer& indexer,
                              const IndexOptions& options) {
  auto order = document_order(corpus);
  std::vector<DocumentHits> docs(order.size());
  int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
  auto n = static_cast<std::int64_t>(order.size());
#pragma omp parallel for num_threads(threads) schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    docs[i] = match_document(corpus[order[i]], indexer);
  }
  return merge(docs, indexer.entity_count(), options);
}

}  // namespace coexpand
