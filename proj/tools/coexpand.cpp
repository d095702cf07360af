// coexpand: command-line driver for the entity set co-expansion pipeline.
//
//   coexpand index     --corpus C --candidates P --seeds S --occurrences O [--summary F]
//   coexpand aggregate --candidates P --seeds S --embeddings E --aggregated A
//   coexpand expand    --candidates P --seeds S --aggregated A --result R [--variant V --k 10 --t 30]
//   coexpand eval      --result R --gold G --report F [--ks 10,20,30]
//   coexpand synth     --out-dir D [--types 4 --dim 16 --per-cluster 50 --sigma 0.05]
//
// Any subcommand also accepts --config FILE, a flat JSON object keyed by long
// flag names; flags given on the command line take precedence.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cstring>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coexpand/commands.hpp"
#include "coexpand/corpus_io.hpp"
#include "coexpand/error.hpp"

namespace {

using coexpand::RunConfig;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Paths {
  std::string corpus, candidates, seeds, occurrences, summary, embeddings, aggregated, gold,
      result, report, out_dir;
};

void add_config_flag(CLI::App* sub, std::string& config_file) {
  sub->add_option("--config", config_file, "JSON file with default values for these flags");
}

// Applies a flat JSON config as option defaults before the real parse.
void apply_config(CLI::App* sub, const std::string& path) {
  auto doc = nlohmann::json::parse(coexpand::read_file(path));
  if (!doc.is_object()) throw CLI::ValidationError("--config", "expected a JSON object");
  for (const auto& [key, value] : doc.items()) {
    auto* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw CLI::ValidationError("--config", "unknown key '" + key + "' for " + sub->get_name());
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      for (const auto& v : value) text += (text.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      text = value.dump();
    }
    opt->default_val(text);
    opt->required(false);
  }
}

std::string find_config_arg(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity set co-expansion over corpus-level embeddings"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  RunConfig cfg;
  Paths p;
  std::string variant = "context";
  std::string config_file;
  std::size_t max_occurrences = 0;

  auto threads_opt = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "OpenMP threads (0 = runtime default)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
  };
  auto catalog_opts = [&](CLI::App* sub) {
    sub->add_option("--candidates", p.candidates, "Candidate pool, one surface form per line")->required();
    sub->add_option("--seeds", p.seeds, "Seed sets JSON")->required();
  };

  auto* index = app.add_subcommand("index", "Find every entity occurrence in the corpus");
  catalog_opts(index);
  index->add_option("--corpus", p.corpus, "Corpus JSON lines {doc_id,text}")->required();
  index->add_option("--occurrences", p.occurrences, "Output occurrences JSON lines")->required();
  index->add_option("--summary", p.summary, "Output per-entity occurrence counts JSON");
  index->add_flag("--dedup-sentences", cfg.dedup_sentences, "Skip repeated sentence texts")
      ->capture_default_str();
  auto* max_occ = index->add_option("--max-occurrences", max_occurrences,
                                    "Keep at most N occurrences per entity (default: unlimited)")
                      ->check(CLI::PositiveNumber);
  threads_opt(index);
  add_config_flag(index, config_file);

  auto* aggregate = app.add_subcommand("aggregate", "Average occurrence embeddings per entity");
  catalog_opts(aggregate);
  aggregate->add_option("--embeddings", p.embeddings, "Occurrence embeddings JSON lines")->required();
  aggregate->add_option("--aggregated", p.aggregated, "Output aggregated embeddings")->required();
  threads_opt(aggregate);
  add_config_flag(aggregate, config_file);

  auto* expand = app.add_subcommand("expand", "Run iterative set co-expansion");
  catalog_opts(expand);
  expand->add_option("--aggregated", p.aggregated, "Aggregated embeddings")->required();
  expand->add_option("--result", p.result, "Output result JSON")->required();
  expand->add_option("--variant", variant, "Embedding variant")
      ->capture_default_str()
      ->check(CLI::IsMember({"content", "context", "both"}));
  expand->add_option("--k", cfg.k, "Entities added per iteration")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  expand->add_option("--t", cfg.t, "Target expanded entities per set")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  expand->add_flag("--normalize-parts", cfg.normalize_parts,
                   "L2-normalize content and context before concatenating (variant both)")
      ->capture_default_str();
  threads_opt(expand);
  add_config_flag(expand, config_file);

  auto* eval = app.add_subcommand("eval", "Precision@K against gold labels");
  eval->add_option("--result", p.result, "Result JSON from expand")->required();
  eval->add_option("--gold", p.gold, "Gold labels JSON")->required();
  eval->add_option("--report", p.report, "Output report JSON")->required();
  eval->add_option("--ks", cfg.ks, "Cut-offs K")
      ->delimiter(',')
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  add_config_flag(eval, config_file);

  auto* synth = app.add_subcommand("synth", "Write a clustered synthetic fixture");
  synth->add_option("--out-dir", p.out_dir, "Output directory")->required();
  synth->add_option("--types", cfg.synth.types, "Number of types M")->capture_default_str()->check(CLI::Range(2, 1000000));
  synth->add_option("--dim", cfg.synth.dim, "Embedding dimension")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--per-cluster", cfg.synth.per_cluster, "Candidates per type")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--seeds-per-cluster", cfg.synth.seeds_per_cluster, "Seeds per type")->capture_default_str()->check(CLI::PositiveNumber);
  synth->add_option("--sigma", cfg.synth.sigma, "Gaussian noise per component")->capture_default_str()->check(CLI::NonNegativeNumber);
  synth->add_option("--random-seed", cfg.synth.random_seed, "Random seed")->capture_default_str();
  synth->add_flag("--plant-midpoint", cfg.synth.plant_midpoint, "Add one unlabeled entity between type0 and type1");
  synth->add_flag("--with-corpus", cfg.synth_corpus, "Also write a corpus mentioning every entity");
  synth->add_option("--mentions", cfg.synth.mentions_per_entity, "Corpus mentions per entity")->capture_default_str();
  add_config_flag(synth, config_file);

  try {
    if (auto cfg_path = find_config_arg(argc, argv); !cfg_path.empty()) {
      for (auto* sub : app.get_subcommands({})) {
        for (int i = 1; i < argc; ++i) {
          if (sub->get_name() == argv[i]) apply_config(sub, cfg_path);
        }
      }
    }
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kUsageError;
  } catch (const coexpand::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: bad --config: " << e.what() << '\n';
    return kUsageError;
  }

  if (*max_occ) cfg.max_occurrences = max_occurrences;
  cfg.variant = *coexpand::parse_variant(variant);
  cfg.corpus = p.corpus;
  cfg.candidates = p.candidates;
  cfg.seeds = p.seeds;
  cfg.occurrences = p.occurrences;
  cfg.summary = p.summary;
  cfg.embeddings = p.embeddings;
  cfg.aggregated = p.aggregated;
  cfg.gold = p.gold;
  cfg.result = p.result;
  cfg.report = p.report;
  cfg.out_dir = p.out_dir;

  try {
    if (index->parsed()) {
      coexpand::cmd_index(cfg);
    } else if (aggregate->parsed()) {
      coexpand::cmd_aggregate(cfg);
    } else if (expand->parsed()) {
      coexpand::cmd_expand(cfg);
    } else if (eval->parsed()) {
      coexpand::cmd_eval(cfg);
    } else if (synth->parsed()) {
      coexpand::cmd_synth(cfg);
    }
  } catch (const coexpand::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const coexpand::LookupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}
