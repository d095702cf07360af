#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coexpand/coexpansion.hpp"
#include "coexpand/embedding_store.hpp"
#include "coexpand/evaluation.hpp"
#include "coexpand/occurrence_indexer.hpp"

// Readers and writers for the files exchanged between stages. Floats are
// written in shortest round-trip form so output bytes depend only on values.
namespace coexpand::formats {

std::string format_float(float x);
double round6(double x);

// {"entity_id":7,"sentence_id":"doc42#3","start":12,"end":25,"sentence":"..."}
void write_occurrences(std::ostream& out, std::span<const OccurrenceRecord> records);
std::vector<OccurrenceRecord> read_occurrences(std::istream& in);

// {"<entity_id>": count, ...} in ascending id order.
void write_summary(std::ostream& out, std::span<const std::size_t> counts);

struct OccurrenceEmbeddings {
  std::size_t dim = 0;
  std::string model;
  std::vector<OccurrenceEmbedding> records;
};
// Header {"dim":d,"model":"..."} then one record per line.
void write_occurrence_embeddings(std::ostream& out, const OccurrenceEmbeddings& file);
OccurrenceEmbeddings read_occurrence_embeddings(std::istream& in);

// Header {"dim":d} then {"entity_id":7,"count":12,"content":[...],"context":[...]}.
void write_aggregated(std::ostream& out, std::size_t dim, std::span<const CorpusEmbedding> rows);
std::vector<CorpusEmbedding> read_aggregated(std::istream& in);

void write_result(std::ostream& out, const ExpansionState& state, const EntityCatalog& catalog,
                  const ExpansionConfig& config);

struct ResultFile {
  std::string variant;
  std::size_t k = 0;
  std::size_t t = 0;
  std::vector<RankedSet> sets;
};
ResultFile read_result(std::string_view json_text);

void write_report(std::ostream& out, const EvalReport& report);

}  // namespace coexpand::formats
