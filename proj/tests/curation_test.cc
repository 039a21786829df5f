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

#include "sticktionary/curation.h"

#include <gtest/gtest.h>

#include <fstream>
#include <set>

#include "sticktionary/jsonl.h"
#include "sticktionary/status.h"
#include "test_util.h"

namespace sticktionary {
namespace {

Utterance Say(const std::string& text) { return {"u1", text, false, std::nullopt, ""}; }
Utterance StickerUtt(const std::string& id) { return {"u2", "", true, id, "img/" + id}; }

std::string Words(int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += (i ? " w" : "w") + std::to_string(i);
  return out;
}

Conversation Conv(const std::string& id, std::vector<Utterance> utts) {
  return {id, std::move(utts), Language::kEn};
}

TEST(IngestConversations, EmptyFileWarns) {
  testing::TempDir dir;
  WriteFile(dir.File("empty.jsonl"), "");
  const auto r = IngestConversations(dir.File("empty.jsonl"));
  EXPECT_TRUE(r.conversations.empty());
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(IngestConversations, ReportsMalformedLineNumbers) {
  testing::TempDir dir;
  WriteFile(dir.File("c.jsonl"),
            R"({"conv_id":"a","language":"en","utterances":[{"speaker_id":"x","text":"hi"}]})"
            "\n{not json\n"
            R"({"conv_id":"b","language":"en","utterances":[{"speaker_id":"x","is_sticker":true}]})"
            "\n");
  const auto r = IngestConversations(dir.File("c.jsonl"));
  ASSERT_EQ(r.conversations.size(), 1u);
  ASSERT_EQ(r.skipped.size(), 2u);
  EXPECT_EQ(r.skipped[0].line, 2u);
  EXPECT_EQ(r.skipped[1].line, 3u);  // sticker without sticker_id
  EXPECT_THROW(IngestConversations(dir.File("missing.jsonl")), Error);
}

TEST(IngestConversations, FixtureLoadsAllFifty) {
  const auto r = IngestConversations(testing::FixturePath("conversations_50.jsonl"));
  EXPECT_EQ(r.conversations.size(), 50u);
  EXPECT_TRUE(r.skipped.empty());
}

TEST(FilterContexts, WordThresholdBoundary) {
  const std::vector<Conversation> convs = {
      Conv("c19", {Say(Words(10)), Say(Words(9)), StickerUtt("s")}),
      Conv("c20", {Say(Words(10)), Say(Words(10)), StickerUtt("s")})};
  const auto kept = FilterContexts(convs);
  ASSERT_EQ(kept.size(), 1u);
  EXPECT_EQ(kept[0].sticker.source_conv_id, "c20");
  EXPECT_EQ(ContextWordCount(kept[0].context, Language::kEn), 20u);
}

TEST(FilterContexts, CommandsAndBriefReplies) {
  std::vector<Utterance> brief;
  for (int i = 0; i < 12; ++i) brief.push_back(Say("ok sure"));
  brief.push_back(StickerUtt("s"));
  const std::vector<Conversation> convs = {
      Conv("cmd", {Say("/start"), Say(Words(25)), StickerUtt("s")}),
      Conv("bang", {Say(Words(25)), Say("!roll"), StickerUtt("s")}),
      Conv("brief", brief)};
  EXPECT_TRUE(FilterContexts(convs).empty());

  FilterOptions loose;
  loose.command_prefixes = {"#"};
  loose.min_mean_utterance = 1.5;
  EXPECT_EQ(FilterContexts(convs, loose).size(), 3u);
}

TEST(FilterContexts, FixtureHasExactlyTheKnownOccurrences) {
  const auto ingest = IngestConversations(testing::FixturePath("conversations_50.jsonl"));
  std::set<std::string> expected;
  std::ifstream in(testing::FixturePath("conversations_50.expected"));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) expected.insert(line);
  }
  ASSERT_EQ(expected.size(), 7u);
  std::set<std::string> got;
  for (const auto& occ : FilterContexts(ingest.conversations)) {
    got.insert(occ.sticker.source_conv_id + "#" + std::to_string(occ.utterance_index));
  }
  EXPECT_EQ(got, expected);
  EXPECT_FALSE(got.contains("c08#4"));  // 19 words
}

TEST(BuildTaskPool, DedupesStickerContextPairs) {
  const std::vector<Conversation> convs = {
      Conv("a", {Say(Words(22)), StickerUtt("s1")}),
      Conv("b", {Say(Words(22)), StickerUtt("s1")}),   // duplicate of a
      Conv("c", {Say(Words(22)), StickerUtt("s2")}),
      Conv("d", {Say(Words(23)), StickerUtt("s1")})};
  const auto occ = FilterContexts(convs);
  ASSERT_EQ(occ.size(), 4u);
  const auto pool = BuildTaskPool(occ);
  ASSERT_EQ(pool.size(), 3u);
  EXPECT_EQ(pool[0].task_id, "a#1");
  EXPECT_EQ(pool[0].status, TaskStatus::kPending);
  EXPECT_EQ(BuildTaskPool(occ, /*dedupe=*/false).size(), 4u);
  EXPECT_TRUE(BuildTaskPool({}).empty());
}

TEST(BuildTaskPool, HashIgnoresCaseAndSpacing) {
  EXPECT_EQ(ContextHash(std::vector{Say("Hello   THERE")}),
            ContextHash(std::vector{Say("hello there")}));
  EXPECT_NE(ContextHash(std::vector{Say("hello there")}),
            ContextHash(std::vector{Say("hello"), Say("there")}));
}

TEST(TaskPool, RoundTripIsByteStableAndAFixedPoint) {
  testing::TempDir dir;
  const auto ingest = IngestConversations(testing::FixturePath("conversations_50.jsonl"));
  const auto pool = BuildTaskPool(FilterContexts(ingest.conversations));
  WriteTaskPool(dir.File("pool.jsonl"), pool);
  const auto back = ReadTaskPool(dir.File("pool.jsonl"));
  EXPECT_EQ(back, pool);
  EXPECT_EQ(TaskPoolToJsonl(back), ReadFile(dir.File("pool.jsonl")));
  EXPECT_EQ(BuildTaskPool(OccurrencesFromTasks(back)).size(), pool.size());
  for (const auto& t : back) {
    EXPECT_GE(ContextWordCount(t.context, t.language), 20u);
  }
}

TEST(TaskStatus, Transitions) {
  using S = TaskStatus;
  EXPECT_TRUE(IsValidTransition(S::kPending, S::kLabeled));
  EXPECT_TRUE(IsValidTransition(S::kLabeled, S::kReview));
  EXPECT_TRUE(IsValidTransition(S::kLabeled, S::kCompleted));
  EXPECT_TRUE(IsValidTransition(S::kCompleted, S::kRetired));
  EXPECT_FALSE(IsValidTransition(S::kPending, S::kCompleted));
  EXPECT_FALSE(IsValidTransition(S::kReview, S::kLabeled));
  EXPECT_FALSE(IsValidTransition(S::kRetired, S::kRetired));
  EXPECT_EQ(ParseTaskStatus(TaskStatusName(S::kReview)), S::kReview);
}

}  // namespace
}  // namespace sticktionary
