#include "coexpand/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "coexpand/error.hpp"
#include "coexpand/text.hpp"

namespace coexpand::formats {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse_line(const std::string& line, std::string_view what, std::size_t lineno) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string(what) + " line " + std::to_string(lineno) + ": " + e.what());
  }
}

void write_vector(std::ostream& out, std::span<const float> v) {
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out << ',';
    out << format_float(v[i]);
  }
  out << ']';
}

std::vector<float> read_vector(const json& j, std::size_t dim, std::string_view where) {
  if (!j.is_array()) throw DataError(std::string(where) + ": expected a number array");
  std::vector<float> v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number()) throw DataError(std::string(where) + ": non-numeric component");
    v.push_back(x.get<float>());
  }
  if (dim != 0 && v.size() != dim) {
    throw DataError(std::string(where) + ": expected " + std::to_string(dim) + " components, got " +
                    std::to_string(v.size()));
  }
  return v;
}

template <class T>
T field(const json& obj, const char* key, std::string_view where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw DataError(std::string(where) + ": missing \"" + key + "\"");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw DataError(std::string(where) + ": bad value for \"" + key + "\"");
  }
}

bool blank(const std::string& line) { return text::trim(line).empty(); }

}  // namespace

std::string format_float(float x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double round6(double x) { return std::round(x * 1e6) / 1e6; }

void write_occurrences(std::ostream& out, std::span<const OccurrenceRecord> records) {
  for (const auto& r : records) {
    ordered_json j;
    j["entity_id"] = r.entity_id;
    j["sentence_id"] = r.sentence_id;
    j["start"] = r.start;
    j["end"] = r.end;
    j["sentence"] = r.sentence;
    out << j.dump() << '\n';
  }
}

std::vector<OccurrenceRecord> read_occurrences(std::istream& in) {
  std::vector<OccurrenceRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto j = parse_line(line, "occurrences", lineno);
    auto where = "occurrences line " + std::to_string(lineno);
    out.push_back({field<EntityId>(j, "entity_id", where), field<std::string>(j, "sentence_id", where),
                   field<std::uint32_t>(j, "start", where), field<std::uint32_t>(j, "end", where),
                   field<std::string>(j, "sentence", where)});
  }
  return out;
}

void write_summary(std::ostream& out, std::span<const std::size_t> counts) {
  ordered_json j = ordered_json::object();
  for (std::size_t id = 0; id < counts.size(); ++id) j[std::to_string(id)] = counts[id];
  out << j.dump(1) << '\n';
}

void write_occurrence_embeddings(std::ostream& out, const OccurrenceEmbeddings& file) {
  ordered_json header;
  header["dim"] = file.dim;
  header["model"] = file.model;
  out << header.dump() << '\n';
  for (const auto& r : file.records) {
    out << "{\"entity_id\":" << r.entity_id << ",\"sentence_id\":" << json(r.sentence_id).dump()
        << ",\"content\":";
    write_vector(out, r.content);
    out << ",\"context\":";
    write_vector(out, r.context);
    out << "}\n";
  }
}

OccurrenceEmbeddings read_occurrence_embeddings(std::istream& in) {
  OccurrenceEmbeddings file;
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto j = parse_line(line, "occurrence embeddings", lineno);
    auto where = "occurrence embeddings line " + std::to_string(lineno);
    if (!have_header) {
      file.dim = field<std::size_t>(j, "dim", where);
      if (j.contains("model") && j["model"].is_string()) file.model = j["model"].get<std::string>();
      if (file.dim == 0) throw DataError(where + ": dim must be positive");
      have_header = true;
      continue;
    }
    file.records.push_back({field<EntityId>(j, "entity_id", where),
                            field<std::string>(j, "sentence_id", where),
                            read_vector(j.value("content", json()), file.dim, where + " content"),
                            read_vector(j.value("context", json()), file.dim, where + " context")});
  }
  if (!have_header) throw DataError("occurrence embeddings: missing header line");
  return file;
}

void write_aggregated(std::ostream& out, std::size_t dim, std::span<const CorpusEmbedding> rows) {
  out << "{\"dim\":" << dim << "}\n";
  for (const auto& r : rows) {
    out << "{\"entity_id\":" << r.entity_id << ",\"count\":" << r.occurrence_count
        << ",\"content\":";
    write_vector(out, r.content);
    out << ",\"context\":";
    write_vector(out, r.context);
    out << "}\n";
  }
}

std::vector<CorpusEmbedding> read_aggregated(std::istream& in) {
  std::vector<CorpusEmbedding> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t dim = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank(line)) continue;
    auto j = parse_line(line, "aggregated embeddings", lineno);
    auto where = "aggregated embeddings line " + std::to_string(lineno);
    if (!have_header) {
      dim = field<std::size_t>(j, "dim", where);
      if (dim == 0) throw DataError(where + ": dim must be positive");
      have_header = true;
      continue;
    }
    rows.push_back({field<EntityId>(j, "entity_id", where),
                    read_vector(j.value("content", json()), dim, where + " content"),
                    read_vector(j.value("context", json()), dim, where + " context"),
                    field<std::size_t>(j, "count", where)});
  }
  if (!have_header) throw DataError("aggregated embeddings: missing header line");
  return rows;
}

void write_result(std::ostream& out, const ExpansionState& state, const EntityCatalog& catalog,
                  const ExpansionConfig& config) {
  ordered_json j;
  j["variant"] = to_string(config.variant);
  j["k"] = config.k;
  j["t"] = config.t;
  j["iterations"] = state.iterations;
  auto& sets = j["sets"] = ordered_json::array();
  for (const auto& s : state.sets) {
    ordered_json set;
    set["name"] = s.type_name;
    auto& seeds = set["seeds"] = ordered_json::array();
    for (EntityId id : s.seeds) seeds.push_back(catalog.at(id).canonical);
    auto& expanded = set["expanded"] = ordered_json::array();
    for (const auto& m : s.expanded) {
      ordered_json e;
      e["entity"] = catalog.at(m.entity_id).surface;
      e["rank"] = m.rank;
      e["score"] = round6(m.score);
      e["iteration"] = m.iteration;
      expanded.push_back(std::move(e));
    }
    set["unfilled"] = s.unfilled;
    sets.push_back(std::move(set));
  }
  out << j.dump(2) << '\n';
}

ResultFile read_result(std::string_view json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw DataError(std::string("result file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("sets") || !j["sets"].is_array()) {
    throw DataError("result file: expected {\"sets\":[...]}");
  }
  ResultFile r;
  r.variant = j.value("variant", "");
  r.k = j.value("k", std::size_t{0});
  r.t = j.value("t", std::size_t{0});
  for (const auto& s : j["sets"]) {
    if (!s.is_object() || !s.contains("name") || !s["name"].is_string()) {
      throw DataError("result file: set without a name");
    }
    RankedSet set{s["name"].get<std::string>(), {}};
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const auto& e : s.value("expanded", ordered_json::array())) {
      if (!e.is_object() || !e.contains("entity") || !e["entity"].is_string()) {
        throw DataError("result file: expanded entry without \"entity\" in " + set.type_name);
      }
      ranked.emplace_back(e.value("rank", ranked.size() + 1), e["entity"].get<std::string>());
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [rank, name] : ranked) set.entities.push_back(std::move(name));
    r.sets.push_back(std::move(set));
  }
  return r;
}

void write_report(std::ostream& out, const EvalReport& report) {
  auto key = [](std::size_t k) { return "P@" + std::to_string(k); };
  ordered_json j;
  auto& per_type = j["per_type"] = ordered_json::object();
  for (std::size_t i = 0; i < report.types.size(); ++i) {
    ordered_json row;
    for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
      row[key(report.ks[ki])] = round6(report.per_type[i][ki]);
    }
    per_type[report.types[i]] = std::move(row);
  }
  auto& macro = j["macro"] = ordered_json::object();
  for (std::size_t ki = 0; ki < report.ks.size(); ++ki) {
    macro[key(report.ks[ki])] = round6(report.macro[ki]);
  }
  j["unknown_entities"] = report.unknown_entities;
  auto& truncated = j["truncated"] = ordered_json::object();
  for (const auto& [type, ks] : report.truncated) truncated[type] = ks;
  out << j.dump(2) << '\n';
}

}  // namespace coexpand::formats
