#include "coexpand/evaluation.hpp"

#include "coexpand/text.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace coexpand {

std::vector<RankedSet> ranked_sets(const ExpansionState& state, const EntityCatalog& catalog) {
  std::vector<RankedSet> out;
  for (const auto& s : state.sets) {
    RankedSet r{s.type_name, {}};
    auto expanded = s.expanded;
    std::sort(expanded.begin(), expanded.end(),
              [](const auto& a, const auto& b) { return a.rank < b.rank; });
    for (const auto& m : expanded) r.entities.push_back(catalog.at(m.entity_id).surface);
    out.push_back(std::move(r));
  }
  return out;
}

EvalReport precision_at_k(std::span<const RankedSet> sets, const GoldLabels& gold,
                          std::span<const std::size_t> ks) {
  if (ks.empty()) throw std::invalid_argument("precision_at_k: no K given");
  if (sets.empty()) throw std::invalid_argument("precision_at_k: no sets");
  for (std::size_t k : ks) {
    if (k == 0) throw std::invalid_argument("precision_at_k: K must be positive");
  }

  EvalReport report;
  report.ks.assign(ks.begin(), ks.end());
  report.macro.assign(ks.size(), 0.0);
  std::size_t max_k = *std::max_element(ks.begin(), ks.end());
  std::set<std::string> unknown;

  for (const auto& set : sets) {
    report.types.push_back(set.type_name);
    auto& row = report.per_type.emplace_back(ks.size(), 0.0);
    for (std::size_t ki = 0; ki < ks.size(); ++ki) {
      std::size_t k = ks[ki];
      std::size_t n = std::min(k, set.entities.size());
      std::size_t correct = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (gold.matches(set.entities[j], set.type_name)) ++correct;
      }
      if (n < k) report.truncated[set.type_name].push_back(k);
      row[ki] = n == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(n);
      report.macro[ki] += row[ki];
    }
    for (std::size_t j = 0; j < std::min(max_k, set.entities.size()); ++j) {
      if (!gold.type_of(set.entities[j])) {
        unknown.insert(text::canonicalize(set.entities[j]).value_or(set.entities[j]));
      }
    }
  }
  for (double& m : report.macro) m /= static_cast<double>(sets.size());
  report.unknown_entities = unknown.size();
  return report;
}

}  // namespace coexpand
