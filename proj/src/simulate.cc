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

#include "sticktionary/simulate.h"

#include <algorithm>
#include <set>

#include "sticktionary/hash.h"
#include "sticktionary/status.h"

namespace sticktionary {

namespace {

const std::vector<std::string>& Vocabulary(Language lang) {
  static const std::vector<std::string> kEnglish = {
      "happy",   "sad",     "angry",    "lol",     "chill",   "zen",      "tired",
      "excited", "shocked", "confused", "awkward", "love",    "cute",     "cry",
      "laugh",   "bored",   "scared",   "proud",   "sleepy",  "hungry",   "dance",
      "wave",    "hug",     "facepalm", "shrug",   "cheer",   "sarcastic", "savage",
      "smug",    "nervous", "relieved", "grateful", "sorry",  "yay",      "meh",
      "ugh",     "wow",     "hmm",      "party",   "sigh",
  };
  static const std::vector<std::string> kChinese = {
      "开心", "难过", "生气", "哈哈", "无语", "尴尬", "可爱", "委屈", "害怕", "震惊",
      "疑惑", "得意", "害羞", "加油", "晚安", "谢谢", "抱抱", "崩溃", "淡定", "躺平",
      "摸鱼", "点赞", "鼓掌", "吃瓜", "好累", "卖萌", "嫌弃", "感动", "期待", "冷漠",
  };
  return lang == Language::kEn ? kEnglish : kChinese;
}

const std::vector<std::string>& Filler(Language lang) {
  static const std::vector<std::string> kEnglish = {
      "so",   "we",    "were", "talking", "about", "the",  "weekend", "plans", "and",
      "then", "she",   "said", "that",    "it",    "was",  "going",   "to",    "rain",
      "all",  "day",   "long", "but",     "honestly", "i", "think",   "movie", "night",
  };
  static const std::vector<std::string> kChinese = {
      "我们", "今天", "一起", "吃饭", "然后", "老板", "说", "明天", "还要", "加班",
      "真的", "觉得", "有点", "问题", "朋友", "周末", "回家", "看看", "视频", "游戏",
  };
  return lang == Language::kEn ? kEnglish : kChinese;
}

std::string Pick(StableRng& rng, const std::vector<std::string>& words) {
  return words[rng.Below(words.size())];
}

std::vector<std::string> Descriptors(StableRng& rng, Language lang, std::size_t n) {
  std::vector<std::string> vocab = Vocabulary(lang);
  rng.Shuffle(vocab);
  vocab.resize(std::min(n, vocab.size()));
  return vocab;
}

std::string JoinWords(const std::vector<std::string>& words, Language lang) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty() && lang == Language::kEn) out += ' ';
    out += w;
  }
  return out;
}

}  // namespace

SyntheticWorld MakeSyntheticWorld(const SimulationOptions& options) {
  SyntheticWorld world;
  world.setup.seed = options.seed;
  StableRng rng(MixSeed(options.seed, 0x5717));
  const Language lang = options.language;
  const std::string prefix = std::string(LanguageName(lang));

  for (std::size_t i = 0; i < options.tasks; ++i) {
    const std::string num = std::to_string(i + 1);
    AnnotationTask task;
    task.task_id = "sim-" + std::string(4 - std::min<std::size_t>(4, num.size()), '0') + num;
    task.sticker = {prefix + "-s" + num, "synthetic://" + prefix + "-s" + num, lang,
                    "sim-conv-" + num};
    task.language = lang;
    for (int u = 0; u < 3; ++u) {
      std::vector<std::string> words;
      for (int w = 0; w < 8; ++w) words.push_back(Pick(rng, Filler(lang)));
      task.context.push_back({u % 2 == 0 ? "alice" : "bob", JoinWords(words, lang), false,
                              std::nullopt, ""});
    }
    task.context_hash = ContextHash(task.context);
    world.descriptors[task.sticker.sticker_id] = Descriptors(rng, lang, 4);
    world.setup.tasks.push_back(std::move(task));
  }
  for (std::size_t i = 0; i < options.background_stickers; ++i) {
    QueryRecord r;
    r.sticker_id = prefix + "-bg" + std::to_string(i + 1);
    r.language = lang;
    const auto words = Descriptors(rng, lang, 4);
    world.descriptors[r.sticker_id] = words;
    r.queries = {{words[0], "seed-a", QueryOrigin::kLabel},
                 {words[1], "seed-a", QueryOrigin::kLabel},
                 {words[2], "seed-b", QueryOrigin::kSuggestion}};
    world.setup.finalized.push_back(std::move(r));
  }
  return world;
}

SimulationResult RunSimulation(const SimulationOptions& options, EventSink* sink) {
  SyntheticWorld world = MakeSyntheticWorld(options);
  int64_t tick = 0;
  GameEngine engine(world.setup, sink, [&tick]() { return ++tick; });
  StableRng rng(MixSeed(options.seed, 0xb075));
  const Language lang = options.language;

  const std::vector<std::string> bots = {
      engine.StartSession("bot-a", lang).player_id,
      engine.StartSession("bot-b", lang).player_id,
  };

  auto label = [&](const std::string& bot, const TaskView& view) {
    if (rng.Bernoulli(options.skip_rate)) {
      engine.SkipTask(bot, view.task_id);
      return;
    }
    const auto& words = world.descriptors.at(view.sticker.sticker_id);
    auto draft = [&]() {
      std::vector<std::string> queries;
      std::set<std::string> used;
      const std::size_t want = 1 + rng.Below(3);
      for (std::size_t attempt = 0; queries.size() < want && attempt < 10; ++attempt) {
        std::vector<std::string> parts = {Pick(rng, words)};
        if (rng.Bernoulli(0.3)) {
          const std::string second = Pick(rng, words);
          if (second != parts[0]) parts.push_back(second);
        }
        std::string q = JoinWords(parts, lang);
        if (used.insert(FoldCase(q)).second) queries.push_back(std::move(q));
      }
      return queries;
    };
    std::vector<std::string> queries = draft();
    engine.PreviewRetrieval(bot, queries);
    if (rng.Bernoulli(options.revise_rate)) {
      queries = draft();
      engine.PreviewRetrieval(bot, queries);
    }
    engine.SubmitQueries(bot, view.task_id, queries);
  };

  auto retrieve = [&](const std::string& bot, const TaskView& view) {
    std::set<std::string> seen;
    for (const auto& q : view.queries) {
      for (auto& t : Tokenize(q, lang).tokens) seen.insert(std::move(t));
    }
    std::vector<std::pair<double, std::string>> scored;
    const bool confused = rng.Bernoulli(options.confusion_rate);
    for (const auto& id : view.grid) {
      double s = 0;
      if (confused) {
        s = 3 * rng.Uniform();
      } else {
        for (const auto& w : world.descriptors.at(id)) s += seen.contains(w) ? 1 : 0;
        s += 0.5 * rng.Uniform();
      }
      scored.emplace_back(s, id);
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t picks = std::min<std::size_t>(scored.size(), 1 + rng.Below(3));
    std::vector<std::string> ranking;
    for (std::size_t i = 0; i < picks; ++i) ranking.push_back(scored[i].second);

    std::vector<std::string> suggestions;
    if (rng.Bernoulli(options.suggest_rate)) {
      const std::size_t want = 1 + rng.Below(2);
      for (const auto& w : world.descriptors.at(ranking[0])) {
        if (!seen.contains(w) && suggestions.size() < want) {
          suggestions.push_back(w);
        }
      }
    }
    engine.SubmitRanking(bot, view.round_id, ranking, suggestions);
  };

  // Both bots starved in the same pass means nothing is left to do.
  for (std::size_t pass = 0; pass < options.tasks * 50 + 10; ++pass) {
    bool progressed = false;
    for (const auto& bot : bots) {
      const auto view = engine.AssignTask(bot);
      if (!view) continue;
      progressed = true;
      if (view->role == Role::kLabeler) {
        label(bot, *view);
      } else {
        retrieve(bot, *view);
      }
    }
    if (!progressed) break;
  }

  SimulationResult result;
  result.setup = engine.setup();
  result.events = engine.events();
  result.state = engine.state();
  result.finalized = FinalizeRecords(result.state, {});
  result.violations = CheckInvariants(result.setup, result.events, result.state);
  for (const auto& record : result.finalized.records) {
    if (Annotators(record).size() < 2) {
      result.violations.push_back("finalized record " + record.sticker_id +
                                  " has fewer than two annotators");
    }
  }
  return result;
}

std::vector<std::string> CheckInvariants(const EngineSetup& setup,
                                         std::span<const GameEvent> events,
                                         const EngineState& state) {
  std::vector<std::string> out;
  auto fail = [&](const GameEvent* e, const std::string& msg) {
    out.push_back(e ? "seq " + std::to_string(e->seq) + ": " + msg : msg);
  };

  std::map<std::string, std::string> gold;
  for (const auto& t : setup.tasks) gold[t.task_id] = t.sticker.sticker_id;
  std::map<std::string, std::string> labeler;              // task -> player
  std::map<std::string, std::vector<std::string>> grids;   // round -> grid
  std::map<std::string, std::string> last_outcome;         // task -> outcome
  std::map<std::string, std::vector<Role>> closed;         // player -> roles
  std::map<std::string, std::pair<int, int>> expected;     // round -> points
  int64_t expected_total = 0;
  int64_t awarded_total = 0;

  int64_t prev = 0;
  for (const auto& e : events) {
    if (e.seq != prev + 1) fail(&e, "seq gap after " + std::to_string(prev));
    prev = e.seq;
    const Json& p = e.payload;
    switch (e.kind) {
      case EventKind::kTaskAssigned:
        if (p.contains("round_id")) {
          grids[p["round_id"].get<std::string>()] = p["grid"].get<std::vector<std::string>>();
        }
        break;
      case EventKind::kQueriesSubmitted: {
        const auto queries = p["queries"].get<std::vector<std::string>>();
        if (queries.empty() || queries.size() > setup.config.max_queries) {
          fail(&e, "label round with " + std::to_string(queries.size()) + " queries");
        }
        std::set<std::string> folded;
        for (const auto& q : queries) {
          if (q.empty() || CodePointCount(q) > setup.config.max_query_chars ||
              !folded.insert(FoldCase(q)).second) {
            fail(&e, "invalid query '" + q + "'");
          }
        }
        labeler[p["task_id"].get<std::string>()] = p["player_id"].get<std::string>();
        closed[p["player_id"].get<std::string>()].push_back(Role::kLabeler);
        break;
      }
      case EventKind::kRankingSubmitted: {
        const std::string task = p["task_id"].get<std::string>();
        const std::string who = p["player_id"].get<std::string>();
        const std::string round = p["round_id"].get<std::string>();
        const auto ranking = p["ranking"].get<std::vector<std::string>>();
        if (labeler[task] == who) fail(&e, who + " retrieved their own task " + task);
        for (const auto& id : ranking) {
          const auto& grid = grids[round];
          if (std::find(grid.begin(), grid.end(), id) == grid.end()) {
            fail(&e, "ranked sticker " + id + " outside the grid");
          }
        }
        const Outcome outcome = OutcomeFor(gold[task], ranking);
        if (OutcomeName(outcome) != p["outcome"].get<std::string>()) {
          fail(&e, "outcome does not match gold position");
        }
        last_outcome[task] = OutcomeName(outcome);
        expected[round] = ComputeScore(outcome);
        expected_total += expected[round].first + expected[round].second;
        closed[who].push_back(Role::kRetriever);
        break;
      }
      case EventKind::kScoreAwarded: {
        const int points = p["points"].get<int>();
        const auto it = expected.find(p["round_id"].get<std::string>());
        if (it == expected.end()) {
          fail(&e, "award without a closed round");
        } else {
          const int want = p["role"].get<std::string>() == "RETRIEVER" ? it->second.first
                                                                        : it->second.second;
          if (points != want) fail(&e, "award differs from the scoring table");
        }
        awarded_total += points;
        break;
      }
      case EventKind::kTaskCompleted: {
        const std::string task = p["task_id"].get<std::string>();
        const auto it = last_outcome.find(task);
        if (it == last_outcome.end() || it->second == "MISS") {
          fail(&e, "task " + task + " completed without a successful retrieval");
        }
        break;
      }
      default:
        break;
    }
  }

  if (awarded_total != expected_total) {
    fail(nullptr, "points awarded " + std::to_string(awarded_total) + " != " +
                      std::to_string(expected_total) + " from closed rounds");
  }
  int64_t score_sum = 0;
  for (const auto& [id, player] : state.players) {
    score_sum += player.score;
    const auto& roles = closed[id];
    for (std::size_t i = 1; i < roles.size(); ++i) {
      if (roles[i] == roles[i - 1]) {
        fail(nullptr, "player " + id + " did not alternate roles at round " +
                          std::to_string(i + 1));
        break;
      }
    }
  }
  if (score_sum != awarded_total) {
    fail(nullptr, "player scores sum to " + std::to_string(score_sum) + ", log awards " +
                      std::to_string(awarded_total));
  }
  for (const auto& [id, ts] : state.tasks) {
    const TaskStatus s = ts.task.status;
    if (s != TaskStatus::kCompleted && s != TaskStatus::kReview) continue;
    const bool labeled = std::any_of(ts.queries.begin(), ts.queries.end(), [](const auto& q) {
      return q.origin == QueryOrigin::kLabel;
    });
    if (!labeled) fail(nullptr, "task " + id + " closed without labeler queries");
  }
  if (state.last_seq != static_cast<int64_t>(events.size())) {
    fail(nullptr, "state seq " + std::to_string(state.last_seq) + " but " +
                      std::to_string(events.size()) + " events");
  }
  return out;
}

}  // namespace sticktionary
