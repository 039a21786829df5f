// Copyright 2026 The Sticktionary Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sticktionary/cli.h"

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "sticktionary/curation.h"
#include "sticktionary/dataset.h"
#include "sticktionary/jsonl.h"
#include "sticktionary/retrieval.h"
#include "sticktionary/simulate.h"
#include "test_util.h"

namespace sticktionary {
namespace {

#include "oracles/interannotator_toy.inc"

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sticktionary");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(Cli({"curate"}).code, kExitUsage);  // missing required options
  const CliRun help = Cli({"--help"});
  EXPECT_EQ(help.code, kExitOk);
  EXPECT_NE(help.out.find("simulate"), std::string::npos);
  EXPECT_EQ(Cli({"export", "--in", "/nonexistent/x.jsonl", "--out", "/tmp/y"}).code,
            kExitFailure);
}

TEST(Cli, SimulateIsByteIdenticalAcrossRuns) {
  testing::TempDir dir;
  const CliRun a = Cli({"simulate", "--tasks", "40", "--seed", "7", "--log", dir.File("a.jsonl")});
  const CliRun b = Cli({"simulate", "--tasks", "40", "--seed", "7", "--log", dir.File("b.jsonl")});
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  EXPECT_EQ(a.out, b.out);
  const auto rows = Lines(a.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "events,tasks,completed,review,records,violations");
  EXPECT_EQ(rows[1].substr(rows[1].rfind(',')), ",0");
  EXPECT_FALSE(ReadFile(dir.File("a.jsonl")).empty());
  EXPECT_EQ(ReadFile(dir.File("a.jsonl")), ReadFile(dir.File("b.jsonl")));
  const CliRun c = Cli({"simulate", "--tasks", "40", "--seed", "8", "--log", dir.File("c.jsonl")});
  EXPECT_NE(ReadFile(dir.File("a.jsonl")), ReadFile(dir.File("c.jsonl")));
}

TEST(Cli, FinalizeFromDataDirMatchesSimulationRecords) {
  testing::TempDir dir;
  SimulationOptions options;
  options.tasks = 25;
  options.seed = 3;
  const SyntheticWorld world = MakeSyntheticWorld(options);
  WriteTaskPool(dir.File("pool.jsonl"), world.setup.tasks);
  if (!world.setup.finalized.empty()) {
    ExportJsonl(world.setup.finalized, dir.File("finalized.jsonl"));
  }
  const CliRun sim = Cli({"simulate", "--tasks", "25", "--seed", "3", "--log",
                       dir.File("events.jsonl"), "--records", dir.File("sim.jsonl")});
  ASSERT_EQ(sim.code, kExitOk) << sim.err;
  const CliRun fin = Cli({"finalize", "--data-dir", dir.path(), "--seed", "3", "--out",
                       dir.File("fin.jsonl")});
  ASSERT_EQ(fin.code, kExitOk) << fin.err;
  EXPECT_EQ(ReadFile(dir.File("fin.jsonl")), ReadFile(dir.File("sim.jsonl")));

  // A rejection recorded through the review verb removes that sticker.
  const auto records = ImportJsonl(dir.File("fin.jsonl"));
  ASSERT_FALSE(records.empty());
  std::string task_id;
  for (const auto& t : world.setup.tasks) {
    if (t.sticker.sticker_id == records[0].sticker_id) task_id = t.task_id;
  }
  ASSERT_FALSE(task_id.empty());
  EXPECT_EQ(Cli({"review", "--data-dir", dir.path(), "--task", task_id}).code, kExitFailure);
  ASSERT_EQ(Cli({"review", "--data-dir", dir.path(), "--task", task_id, "--reject"}).code,
            kExitOk);
  const CliRun after = Cli({"finalize", "--data-dir", dir.path(), "--seed", "3"});
  ASSERT_EQ(after.code, kExitOk) << after.err;
  EXPECT_EQ(Lines(after.out).size(), records.size() - 1);
  EXPECT_EQ(after.out.find("\"sticker_id\":\"" + records[0].sticker_id + "\""),
            std::string::npos);
}

TEST(Cli, EvaluateIdentityPoolHasPerfectRecall) {
  testing::TempDir dir;
  const std::vector<QuerySourceRecord> pool = {
      {"s1", "sleepy cat nap", "human"},
      {"s2", "angry shouting dog", "human"},
      {"s3", "birthday party cake", "human"},
  };
  WriteQuerySource(dir.File("pool.jsonl"), pool);
  const std::vector<QuerySourceRecord> trials = {
      {"s1", "sleepy cat nap", "exact"},
      {"s2", "angry shouting dog", "exact"},
      {"s3", "birthday party cake", "exact"},
      {"s1", "angry", "wrong"},
  };
  WriteQuerySource(dir.File("trials.jsonl"), trials);
  const CliRun r = Cli({"evaluate", "--pool", dir.File("pool.jsonl"), "--queries",
                     dir.File("trials.jsonl"), "--k", "1,3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = Lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "source,trials,R@1,R@3");
  EXPECT_EQ(rows[1], "exact,3,1.000000,1.000000");
  EXPECT_EQ(rows[2], "wrong,1,0.000000,0.000000");
  EXPECT_EQ(Cli({"evaluate", "--pool", dir.File("pool.jsonl"), "--queries",
                 dir.File("trials.jsonl"), "--k", "0"})
                .code,
            kExitFailure);
}

TEST(Cli, CurateFixture) {
  testing::TempDir dir;
  const CliRun r = Cli({"curate", "--in", testing::FixturePath("conversations_50.jsonl"),
                     "--out", dir.File("pool.jsonl")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.err.find("tasks=7"), std::string::npos) << r.err;
  EXPECT_EQ(ReadTaskPool(dir.File("pool.jsonl")).size(), 7u);
  const CliRun loose = Cli({"curate", "--in", testing::FixturePath("conversations_50.jsonl"),
                         "--out", dir.File("loose.jsonl"), "--min-context-words", "19"});
  ASSERT_EQ(loose.code, kExitOk);
  EXPECT_GT(ReadTaskPool(dir.File("loose.jsonl")).size(), 7u);
}

TEST(Cli, MetricsWithTableEmbeddingsMatchesToyOracle) {
  testing::TempDir dir;
  WriteFile(dir.File("vectors.txt"),
            "7 3\nhappy 1 0 0\ndance 0 1 0\nso 1 1 0\nparty 0 1 1\n"
            "cat 0.2 0.3 0.9\nmeow 0.1 -0.4 0.8\nsleepy -0.5 0.2 0.4\n");
  WriteFile(dir.File("toy.jsonl"),
            R"({"sticker_id":"toy-1","language":"en","review_status":"AUTO","queries":[)"
            R"({"text":"happy dance","annotator_id":"ann-a","origin":"LABEL"},)"
            R"({"text":"happy","annotator_id":"ann-b","origin":"LABEL"},)"
            R"({"text":"so happy","annotator_id":"ann-b","origin":"LABEL"},)"
            R"({"text":"dance party","annotator_id":"ann-c","origin":"LABEL"}]})"
            "\n"
            R"({"sticker_id":"toy-2","language":"en","review_status":"AUTO","queries":[)"
            R"({"text":"cat","annotator_id":"ann-a","origin":"LABEL"},)"
            R"({"text":"sleepy cat","annotator_id":"ann-b","origin":"LABEL"},)"
            R"({"text":"meow","annotator_id":"ann-b","origin":"LABEL"}]})"
            "\n");
  const CliRun r = Cli({"metrics", "--dataset", dir.File("toy.jsonl"), "--provider",
                     "table:" + dir.File("vectors.txt")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rows = Lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  std::vector<std::string> cells;
  std::istringstream row(rows[1]);
  for (std::string cell; std::getline(row, cell, ',');) cells.push_back(cell);
  ASSERT_EQ(cells.size(), 12u);
  EXPECT_EQ(cells[0], "en");
  const double expected[] = {kToy_bleu,  kToy_rouge1, kToy_rouge2, kToy_rougeL,
                             kToy_cosine, kToy_bert_p, kToy_bert_r, kToy_bert_f1};
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(std::stod(cells[i + 1]), expected[i], 5e-7);
  EXPECT_EQ(cells[9], "2");
  EXPECT_EQ(cells[10], "4");

  const CliRun jsonl = Cli({"metrics", "--dataset", dir.File("toy.jsonl"), "--format", "jsonl"});
  ASSERT_EQ(jsonl.code, kExitOk);
  EXPECT_EQ(Json::parse(Lines(jsonl.out).at(0))["stickers"], 2);
  EXPECT_EQ(Cli({"metrics", "--dataset", dir.File("toy.jsonl"), "--provider", "bogus"}).code,
            kExitFailure);

  const CliRun stats = Cli({"stats", "--dataset", dir.File("toy.jsonl")});
  ASSERT_EQ(stats.code, kExitOk);
  EXPECT_EQ(Lines(stats.out).at(1), "en,2,7,7,2,3.5000");

  const CliRun tokens = Cli({"tokens", "--dataset", dir.File("toy.jsonl")});
  ASSERT_EQ(tokens.code, kExitOk);
  EXPECT_EQ(Lines(tokens.out), (std::vector<std::string>{"happy dance", "happy so happy",
                                                         "dance party", "cat",
                                                         "sleepy cat meow"}));

  const CliRun freq = Cli({"freq", "--dataset", dir.File("toy.jsonl"), "--top", "2"});
  ASSERT_EQ(freq.code, kExitOk);
  EXPECT_EQ(Lines(freq.out), (std::vector<std::string>{"rank,term,count", "1,happy,3",
                                                       "2,cat,2"}));
}

TEST(Cli, ImportThenExportRoundTrip) {
  testing::TempDir dir;
  WriteFile(dir.File("release.json"),
            R"([{"image": "a.png", "queries": ["lol", "so funny"], "lang": "en"}])");
  const CliRun imp = Cli({"import", "--in", dir.File("release.json"), "--out",
                       dir.File("records.jsonl")});
  ASSERT_EQ(imp.code, kExitOk) << imp.err;
  ASSERT_EQ(Cli({"export", "--in", dir.File("records.jsonl"), "--out", dir.File("copy.jsonl")})
                .code,
            kExitOk);
  EXPECT_EQ(ReadFile(dir.File("records.jsonl")), ReadFile(dir.File("copy.jsonl")));
  const auto records = ImportJsonl(dir.File("copy.jsonl"));
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].sticker_id, "a.png");
}

}  // namespace
}  // namespace sticktionary
