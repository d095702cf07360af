#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "coexpand/corpus_io.hpp"
#include "coexpand/formats.hpp"

namespace fs = std::filesystem;
using namespace coexpand;

namespace {

const fs::path kFixtures = COEXPAND_FIXTURES;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coexpand_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    std::string cmd = std::string(COEXPAND_BIN) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                      " 2> " + (dir_ / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path path(const std::string& name) const { return dir_ / name; }
  std::string q(const fs::path& p) const { return "'" + p.string() + "'"; }

  void write(const fs::path& p, const std::string& content) const {
    std::ofstream out(p, std::ios::binary);
    out << content;
  }

  std::string toy_catalog() const {
    return " --candidates " + q(kFixtures / "toy/candidates.txt") + " --seeds " + q(kFixtures / "toy/seeds.json");
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, IndexToyCorpusMatchesFrozenFixture) {
  ASSERT_EQ(run("index" + toy_catalog() + " --corpus " + q(kFixtures / "toy/corpus.jsonl") + " --occurrences " +
                q(path("occ.jsonl")) + " --summary " + q(path("summary.json"))),
            0);
  EXPECT_EQ(read_file(path("occ.jsonl")), read_file(kFixtures / "toy/expected_occurrences.jsonl"));
  auto summary = nlohmann::json::parse(read_file(path("summary.json")));
  EXPECT_EQ(summary.size(), 18u);
  EXPECT_EQ(summary["15"], 2);  // java
  EXPECT_EQ(summary["8"], 0);   // kotlin

  ASSERT_EQ(run("index" + toy_catalog() + " --corpus " + q(kFixtures / "toy/corpus.jsonl") + " --occurrences " +
                q(path("occ8.jsonl")) + " --threads 8"),
            0);
  EXPECT_EQ(read_file(path("occ8.jsonl")), read_file(path("occ.jsonl")));
}

TEST_F(CliTest, IndexMaxOccurrencesKeepsFirstTwo) {
  write(path("corpus.jsonl"),
        R"({"doc_id":"d","text":"rust a. rust b. rust c. rust d. rust e."})" "\n");
  write(path("cands.txt"), "rust\n");
  write(path("seeds.json"), R"({"types":[{"name":"A","seeds":["go"]},{"name":"B","seeds":["zig"]}]})");
  ASSERT_EQ(run("index --candidates " + q(path("cands.txt")) + " --seeds " + q(path("seeds.json")) +
                " --corpus " + q(path("corpus.jsonl")) + " --occurrences " + q(path("occ.jsonl")) +
                " --max-occurrences 2"),
            0);
  std::istringstream in(read_file(path("occ.jsonl")));
  auto recs = formats::read_occurrences(in);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].sentence_id, "d#0");
  EXPECT_EQ(recs[1].sentence_id, "d#1");
}

TEST_F(CliTest, IndexEmptyCandidatesFails) {
  write(path("cands.txt"), "# nothing\n");
  EXPECT_EQ(run("index --candidates " + q(path("cands.txt")) + " --seeds " + q(kFixtures / "toy/seeds.json") +
                " --corpus " + q(kFixtures / "toy/corpus.jsonl") + " --occurrences " + q(path("occ.jsonl"))),
            2);
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("index --corpus x"), 1);
  EXPECT_EQ(run("expand" + toy_catalog() + " --aggregated a --result r --k 0"), 1);
  EXPECT_EQ(run("expand" + toy_catalog() + " --aggregated a --result r --variant nope"), 1);
  EXPECT_EQ(run("--help"), 0);
  EXPECT_NE(read_file(path("stdout.txt")).find("synth"), std::string::npos);
  EXPECT_EQ(run("expand --help"), 0);
  EXPECT_NE(read_file(path("stdout.txt")).find("30"), std::string::npos);
}

TEST_F(CliTest, AggregateMeanRowAndMissingSeed) {
  write(path("cands.txt"), "rust\nzig\n");
  write(path("seeds.json"), R"({"types":[{"name":"A","seeds":["go"]},{"name":"B","seeds":["c"]}]})");
  // ids: rust 0, zig 1, go 2, c 3
  write(path("emb.jsonl"),
        "{\"dim\":2,\"model\":\"fixture\"}\n"
        "{\"entity_id\":0,\"sentence_id\":\"d#1\",\"content\":[1,0],\"context\":[0,2]}\n"
        "{\"entity_id\":2,\"sentence_id\":\"d#0\",\"content\":[1,1],\"context\":[1,1]}\n"
        "{\"entity_id\":0,\"sentence_id\":\"d#0\",\"content\":[0,1],\"context\":[2,0]}\n"
        "{\"entity_id\":3,\"sentence_id\":\"d#2\",\"content\":[0.5,0.25],\"context\":[-1,1]}\n");
  std::string base = " --candidates " + q(path("cands.txt")) + " --seeds " + q(path("seeds.json"));
  ASSERT_EQ(run("aggregate" + base + " --embeddings " + q(path("emb.jsonl")) + " --aggregated " + q(path("agg.jsonl"))), 0);
  EXPECT_EQ(read_file(path("agg.jsonl")),
            "{\"dim\":2}\n"
            "{\"entity_id\":0,\"count\":2,\"content\":[0.5,0.5],\"context\":[1,1]}\n"
            "{\"entity_id\":2,\"count\":1,\"content\":[1,1],\"context\":[1,1]}\n"
            "{\"entity_id\":3,\"count\":1,\"content\":[0.5,0.25],\"context\":[-1,1]}\n");

  write(path("emb_noseed.jsonl"),
        "{\"dim\":2,\"model\":\"fixture\"}\n"
        "{\"entity_id\":0,\"sentence_id\":\"d#1\",\"content\":[1,0],\"context\":[0,2]}\n"
        "{\"entity_id\":2,\"sentence_id\":\"d#0\",\"content\":[1,1],\"context\":[1,1]}\n");
  EXPECT_EQ(run("aggregate" + base + " --embeddings " + q(path("emb_noseed.jsonl")) + " --aggregated " +
                q(path("agg2.jsonl"))),
            2);
  EXPECT_NE(read_file(path("stderr.txt")).find("'c'"), std::string::npos);

  write(path("emb_baddim.jsonl"),
        "{\"dim\":3}\n{\"entity_id\":0,\"sentence_id\":\"d#1\",\"content\":[1,0],\"context\":[0,2]}\n");
  EXPECT_EQ(run("aggregate" + base + " --embeddings " + q(path("emb_baddim.jsonl")) + " --aggregated " +
                q(path("agg3.jsonl"))),
            2);
}

TEST_F(CliTest, SynthExpandEvalAndDeterminism) {
  ASSERT_EQ(run("synth --out-dir " + q(path("fx")) + " --random-seed 7"), 0);
  ASSERT_EQ(run("synth --out-dir " + q(path("fx2")) + " --random-seed 7"), 0);
  for (const char* f : {"candidates.txt", "seeds.json", "gold.json", "aggregated.jsonl"}) {
    EXPECT_EQ(read_file(path("fx") / f), read_file(path("fx2") / f)) << f;
  }
  std::string base = "expand --candidates " + q(path("fx/candidates.txt")) + " --seeds " +
                     q(path("fx/seeds.json")) + " --aggregated " + q(path("fx/aggregated.jsonl"));
  ASSERT_EQ(run(base + " --result " + q(path("r1.json"))), 0);
  ASSERT_EQ(run(base + " --result " + q(path("r2.json")) + " --threads 8"), 0);
  EXPECT_EQ(read_file(path("r1.json")), read_file(path("r2.json")));

  auto result = nlohmann::json::parse(read_file(path("r1.json")));
  EXPECT_EQ(result["variant"], "context");
  EXPECT_EQ(result["k"], 10);
  EXPECT_EQ(result["t"], 30);
  EXPECT_EQ(result["sets"].size(), 4u);
  EXPECT_EQ(result["sets"][0]["expanded"].size(), 30u);
  EXPECT_EQ(result["sets"][0]["expanded"][0]["rank"], 1);

  ASSERT_EQ(run("eval --result " + q(path("r1.json")) + " --gold " + q(path("fx/gold.json")) + " --report " +
                q(path("report.json"))),
            0);
  auto report = nlohmann::json::parse(read_file(path("report.json")));
  EXPECT_EQ(report["macro"]["P@30"], 1.0);
  EXPECT_EQ(report["per_type"]["type2"]["P@10"], 1.0);
  EXPECT_EQ(report["unknown_entities"], 0);

  ASSERT_EQ(run(base + " --result " + q(path("r0.json")) + " --t 0"), 0);
  auto empty = nlohmann::json::parse(read_file(path("r0.json")));
  for (const auto& s : empty["sets"]) EXPECT_TRUE(s["expanded"].empty());
}

TEST_F(CliTest, EvalTwoTypeFixture) {
  write(path("result.json"), R"({"sets":[
    {"name":"A","seeds":["sa"],"expanded":[{"entity":"a1","rank":1},{"entity":"a2","rank":2}]},
    {"name":"B","seeds":["sb"],"expanded":[{"entity":"x","rank":2},{"entity":"B1","rank":1}]}]})");
  write(path("gold.json"), R"({"a1":"A","a2":"A","b1":"B","x":"A"})");
  ASSERT_EQ(run("eval --result " + q(path("result.json")) + " --gold " + q(path("gold.json")) + " --report " +
                q(path("report.json")) + " --ks 2"),
            0);
  auto report = nlohmann::json::parse(read_file(path("report.json")));
  EXPECT_EQ(report["macro"]["P@2"].get<double>(), 0.75);
  EXPECT_EQ(report["per_type"]["B"]["P@2"].get<double>(), 0.5);

  EXPECT_EQ(run("eval --result " + q(path("result.json")) + " --gold " + q(path("gold.json")) + " --report " +
                q(path("r.json")) + " --ks 0"),
            1);
  write(path("badgold.json"), "{\n\"a1\": [1]\n}");
  EXPECT_EQ(run("eval --result " + q(path("result.json")) + " --gold " + q(path("badgold.json")) + " --report " +
                q(path("r.json"))),
            2);
  EXPECT_NE(read_file(path("stderr.txt")).find("line 2"), std::string::npos);
}

TEST_F(CliTest, ConfigFileSuppliesDefaults) {
  ASSERT_EQ(run("synth --out-dir " + q(path("fx"))), 0);
  nlohmann::json cfg{{"candidates", path("fx/candidates.txt").string()},
                     {"seeds", path("fx/seeds.json").string()},
                     {"aggregated", path("fx/aggregated.jsonl").string()},
                     {"result", path("from_config.json").string()},
                     {"variant", "both"},
                     {"k", 5},
                     {"t", 3}};
  write(path("cfg.json"), cfg.dump());
  ASSERT_EQ(run("expand --config " + q(path("cfg.json"))), 0);
  auto r = nlohmann::json::parse(read_file(path("from_config.json")));
  EXPECT_EQ(r["variant"], "both");
  EXPECT_EQ(r["k"], 5);
  EXPECT_EQ(r["sets"][1]["expanded"].size(), 3u);

  ASSERT_EQ(run("expand --config " + q(path("cfg.json")) + " --t 4"), 0);
  r = nlohmann::json::parse(read_file(path("from_config.json")));
  EXPECT_EQ(r["t"], 4);

  write(path("bad.json"), R"({"no_such_flag":1})");
  EXPECT_EQ(run("expand --config " + q(path("bad.json"))), 1);
}

TEST(Formats, FloatsRoundTripThroughAggregatedFile) {
  std::mt19937 rng(61);
  std::normal_distribution<float> n(0.0f, 10.0f);
  std::vector<CorpusEmbedding> rows;
  for (EntityId id = 0; id < 50; ++id) {
    CorpusEmbedding e{id, std::vector<float>(9), std::vector<float>(9), 1 + id};
    for (auto& x : e.content) x = n(rng);
    for (auto& x : e.context) x = n(rng) * 1e-20f;
    rows.push_back(e);
  }
  std::stringstream ss;
  formats::write_aggregated(ss, 9, rows);
  auto back = formats::read_aggregated(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].content, rows[i].content);
    EXPECT_EQ(back[i].context, rows[i].context);
    EXPECT_EQ(back[i].occurrence_count, rows[i].occurrence_count);
  }
}

TEST(Formats, OccurrenceEmbeddingsHeaderAndDimCheck) {
  std::istringstream ok("{\"dim\":2,\"model\":\"m\"}\n{\"entity_id\":1,\"sentence_id\":\"a#0\",\"content\":[1,2],\"context\":[3,4]}\n");
  auto f = formats::read_occurrence_embeddings(ok);
  EXPECT_EQ(f.dim, 2u);
  EXPECT_EQ(f.model, "m");
  ASSERT_EQ(f.records.size(), 1u);
  EXPECT_EQ(f.records[0].context, (std::vector<float>{3, 4}));
  std::istringstream no_header("");
  EXPECT_THROW(formats::read_occurrence_embeddings(no_header), std::exception);
}
