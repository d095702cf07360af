#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "coexpand/coexpansion.hpp"
#include "coexpand/corpus_io.hpp"

namespace coexpand {

// Expanded entities of one type, best rank first.
struct RankedSet {
  std::string type_name;
  std::vector<std::string> entities;
};

std::vector<RankedSet> ranked_sets(const ExpansionState& state, const EntityCatalog& catalog);

struct EvalReport {
  std::vector<std::size_t> ks;
  std::vector<std::string> types;                  // result order
  std::vector<std::vector<double>> per_type;       // [type][k index]
  std::vector<double> macro;                       // [k index]
  std::size_t unknown_entities = 0;                // distinct, within the top max(ks)
  std::map<std::string, std::vector<std::size_t>> truncated;  // type -> Ks with fewer than K members
};

// P@K = (1/M) sum_i (1/K) sum_{j<=K} 1(gold[e_ij] == type_i). A set holding
// fewer than K entities divides by its actual count (0 when empty) and is
// listed under `truncated`. Throws std::invalid_argument for K == 0.
EvalReport precision_at_k(std::span<const RankedSet> sets, const GoldLabels& gold,
                          std::span<const std::size_t> ks);

}  // namespace coexpand
