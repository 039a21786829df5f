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

#include "sticktionary/game.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <tuple>

#include "sticktionary/hash.h"
#include "sticktionary/status.h"

namespace sticktionary {

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::kSessionStart, "SESSION_START"},
    {EventKind::kTaskAssigned, "TASK_ASSIGNED"},
    {EventKind::kQueriesSubmitted, "QUERIES_SUBMITTED"},
    {EventKind::kPreviewServed, "PREVIEW_SERVED"},
    {EventKind::kRankingSubmitted, "RANKING_SUBMITTED"},
    {EventKind::kSuggestionAdded, "SUGGESTION_ADDED"},
    {EventKind::kTaskSkipped, "TASK_SKIPPED"},
    {EventKind::kScoreAwarded, "SCORE_AWARDED"},
    {EventKind::kTaskCompleted, "TASK_COMPLETED"},
    {EventKind::kTaskToReview, "TASK_TO_REVIEW"},
};

std::vector<std::string> StringList(const Json& j) {
  std::vector<std::string> out;
  for (const auto& x : j) out.push_back(x.get<std::string>());
  return out;
}

std::vector<std::string> FoldedSorted(std::span<const std::string> texts) {
  std::vector<std::string> out;
  for (const auto& t : texts) out.push_back(FoldCase(t));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view RoleName(Role role) {
  return role == Role::kLabeler ? "LABELER" : "RETRIEVER";
}

Role ParseRole(std::string_view name) {
  if (name == "LABELER") return Role::kLabeler;
  if (name == "RETRIEVER") return Role::kRetriever;
  throw ValidationError("unknown role '" + std::string(name) + "'", "role");
}

std::string_view OutcomeName(Outcome outcome) {
  switch (outcome) {
    case Outcome::kHit1:
      return "HIT1";
    case Outcome::kHit2:
      return "HIT2";
    case Outcome::kHit3:
      return "HIT3";
    case Outcome::kMiss:
      return "MISS";
  }
  return "MISS";
}

Outcome ParseOutcome(std::string_view name) {
  for (const auto o : {Outcome::kHit1, Outcome::kHit2, Outcome::kHit3, Outcome::kMiss}) {
    if (OutcomeName(o) == name) return o;
  }
  throw ValidationError("unknown outcome '" + std::string(name) + "'", "outcome");
}

std::string_view EventKindName(EventKind kind) {
  for (const auto& [k, name] : kEventNames) {
    if (k == kind) return name;
  }
  return "UNKNOWN";
}

EventKind ParseEventKind(std::string_view name) {
  for (const auto& [k, n] : kEventNames) {
    if (n == name) return k;
  }
  throw CorruptLogError("unknown event kind '" + std::string(name) + "'");
}

std::string EventToJsonLine(const GameEvent& event) {
  Json j;
  j["seq"] = event.seq;
  j["ts"] = event.timestamp_ms;
  j["kind"] = EventKindName(event.kind);
  j["payload"] = event.payload;
  return j.dump();
}

GameEvent EventFromJson(const Json& j) {
  try {
    GameEvent e;
    e.seq = j.at("seq").get<int64_t>();
    e.timestamp_ms = j.at("ts").get<int64_t>();
    e.kind = ParseEventKind(j.at("kind").get<std::string>());
    e.payload = j.at("payload");
    if (!e.payload.is_object()) throw CorruptLogError("payload must be an object");
    return e;
  } catch (const Json::exception& ex) {
    throw CorruptLogError(std::string("bad event record: ") + ex.what());
  }
}

std::pair<int, int> ComputeScore(Outcome outcome) {
  switch (outcome) {
    case Outcome::kHit1:
      return {3, 3};
    case Outcome::kHit2:
      return {2, 2};
    case Outcome::kHit3:
      return {1, 1};
    case Outcome::kMiss:
      return {0, 0};
  }
  return {0, 0};
}

Outcome OutcomeFor(std::string_view gold, std::span<const std::string> ranking) {
  constexpr Outcome kHits[] = {Outcome::kHit1, Outcome::kHit2, Outcome::kHit3};
  for (std::size_t i = 0; i < ranking.size() && i < 3; ++i) {
    if (ranking[i] == gold) return kHits[i];
  }
  return Outcome::kMiss;
}

Role InitialRole(uint64_t seed) {
  return (StableRng(seed).Next() >> 63) == 0 ? Role::kLabeler : Role::kRetriever;
}

std::vector<std::string> BuildCandidateGrid(std::string_view gold,
                                            std::span<const std::string> corpus,
                                            uint64_t seed, std::size_t grid_size) {
  std::vector<std::string> pool;
  for (const auto& id : corpus) {
    if (id != gold) pool.push_back(id);
  }
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  StableRng rng(seed);
  const std::size_t want = grid_size > 0 ? std::min(grid_size - 1, pool.size()) : 0;
  // Partial Fisher-Yates: the first `want` slots become the sample.
  for (std::size_t i = 0; i < want; ++i) {
    std::swap(pool[i], pool[i + rng.Below(pool.size() - i)]);
  }
  std::vector<std::string> grid(pool.begin(), pool.begin() + static_cast<long>(want));
  grid.emplace_back(gold);
  rng.Shuffle(grid);
  return grid;
}

FileEventLog::FileEventLog(const std::string& path, bool fsync)
    : path_(path), fsync_(fsync) {
  fd_ = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw IoError("cannot open event log " + path + ": " + std::strerror(errno));
  }
}

FileEventLog::~FileEventLog() {
  if (fd_ >= 0) {
    ::fsync(fd_);
    ::close(fd_);
  }
}

void FileEventLog::Append(const GameEvent& event) {
  const std::string line = EventToJsonLine(event) + "\n";
  std::size_t written = 0;
  while (written < line.size()) {
    const ssize_t n = ::write(fd_, line.data() + written, line.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw IoError("append to " + path_ + " failed: " + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
  if (fsync_ && ::fsync(fd_) != 0) {
    throw IoError("fsync of " + path_ + " failed: " + std::strerror(errno));
  }
}

std::vector<GameEvent> ReadEventLog(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open event log " + path);
  std::vector<GameEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      events.push_back(EventFromJson(Json::parse(line)));
    } catch (const Json::exception& e) {
      throw CorruptLogError(path + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw CorruptLogError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return events;
}

int64_t SystemClockMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

GameEngine::GameEngine(EngineSetup setup, EventSink* sink, Clock clock)
    : setup_(std::move(setup)), sink_(sink), clock_(std::move(clock)) {
  for (const auto& task : setup_.tasks) {
    if (task.status != TaskStatus::kPending) {
      throw InvalidArgumentError("task " + task.task_id + " is not PENDING");
    }
    TaskState ts;
    ts.task = task;
    if (!state_.tasks.emplace(task.task_id, std::move(ts)).second) {
      throw InvalidArgumentError("duplicate task_id '" + task.task_id + "'");
    }
  }
}

GameEngine GameEngine::Replay(EngineSetup setup, std::span<const GameEvent> events,
                              EventSink* sink, Clock clock) {
  GameEngine engine(std::move(setup), nullptr, std::move(clock));
  for (const auto& event : events) {
    engine.Apply(event);
    engine.events_.push_back(event);
  }
  engine.sink_ = sink;
  return engine;
}

const Player& GameEngine::player(const std::string& player_id) const {
  const auto it = state_.players.find(player_id);
  if (it == state_.players.end()) throw NotFoundError("unknown player '" + player_id + "'");
  return it->second;
}

Player& GameEngine::MutablePlayer(const std::string& player_id) {
  const auto it = state_.players.find(player_id);
  if (it == state_.players.end()) throw NotFoundError("unknown player '" + player_id + "'");
  return it->second;
}

const TaskState& GameEngine::task(const std::string& task_id) const {
  const auto it = state_.tasks.find(task_id);
  if (it == state_.tasks.end()) throw NotFoundError("unknown task '" + task_id + "'");
  return it->second;
}

std::vector<Player> GameEngine::Leaderboard() const {
  std::vector<Player> out;
  for (const auto& [id, p] : state_.players) out.push_back(p);
  std::stable_sort(out.begin(), out.end(), [](const Player& a, const Player& b) {
    return a.score > b.score;
  });
  return out;
}

std::vector<std::string> GameEngine::StickerCorpus(Language language) const {
  std::set<std::string> ids;
  for (const auto& [id, ts] : state_.tasks) {
    const TaskStatus s = ts.task.status;
    if (ts.task.language == language &&
        (s == TaskStatus::kLabeled || s == TaskStatus::kCompleted ||
         s == TaskStatus::kReview)) {
      ids.insert(ts.task.sticker.sticker_id);
    }
  }
  for (const auto& r : setup_.finalized) {
    if (r.language == language) ids.insert(r.sticker_id);
  }
  return {ids.begin(), ids.end()};
}

Index GameEngine::PreviewIndex(Language language) const {
  std::map<std::string, std::string> text_by_sticker;
  auto add = [&](const std::string& sticker, const std::string& text) {
    std::string& doc = text_by_sticker[sticker];
    if (!doc.empty()) doc += ' ';
    doc += text;
  };
  for (const auto& r : setup_.finalized) {
    if (r.language != language) continue;
    for (const auto& q : r.queries) add(r.sticker_id, q.text);
  }
  for (const auto& [id, ts] : state_.tasks) {
    const TaskStatus s = ts.task.status;
    if (ts.task.language != language ||
        (s != TaskStatus::kLabeled && s != TaskStatus::kCompleted)) {
      continue;
    }
    for (const auto& q : ts.queries) add(ts.task.sticker.sticker_id, q.text);
  }
  std::vector<Document> docs;
  for (auto& [sticker, text] : text_by_sticker) {
    docs.push_back({sticker, std::move(text), sticker, {}});
  }
  return Index::Build(std::move(docs), language);
}

std::vector<std::string> GameEngine::ValidateQueryList(std::span<const std::string> queries,
                                                       std::size_t max_count,
                                                       const char* what) const {
  if (queries.size() > max_count) {
    throw ValidationError("at most " + std::to_string(max_count) + " " + what +
                              " allowed, got " + std::to_string(queries.size()),
                          what);
  }
  std::vector<std::string> cleaned;
  std::set<std::string> folded;
  for (const auto& raw : queries) {
    std::string q = CollapseWhitespace(NormalizeNfc(raw));
    if (q.empty()) throw ValidationError(std::string("empty ") + what + " entry", raw);
    if (CodePointCount(q) > setup_.config.max_query_chars) {
      throw ValidationError("'" + q + "' exceeds " +
                                std::to_string(setup_.config.max_query_chars) +
                                " characters",
                            raw);
    }
    if (!folded.insert(FoldCase(q)).second) {
      throw ValidationError("duplicate entry '" + q + "'", raw);
    }
    cleaned.push_back(std::move(q));
  }
  return cleaned;
}

void GameEngine::Emit(EventKind kind, Json payload) {
  GameEvent event{state_.last_seq + 1, clock_(), kind, std::move(payload)};
  if (sink_ != nullptr) sink_->Append(event);
  Apply(event);
  events_.push_back(std::move(event));
}

Player GameEngine::StartSession(std::string_view display_name, Language language,
                                std::optional<uint64_t> seed) {
  const std::string name = CollapseWhitespace(display_name);
  if (name.empty()) throw ValidationError("display name must not be empty", "name");
  const std::size_t ordinal = state_.players.size() + 1;
  std::string id = std::to_string(ordinal);
  id = "p" + std::string(id.size() < 4 ? 4 - id.size() : 0, '0') + id;
  const Role role = InitialRole(seed ? *seed : MixSeed(setup_.seed, ordinal));

  Json payload;
  payload["player_id"] = id;
  payload["display_name"] = name;
  payload["language"] = LanguageName(language);
  payload["role"] = RoleName(role);
  Emit(EventKind::kSessionStart, std::move(payload));
  return player(id);
}

TaskView GameEngine::MakeView(const Player& p) const {
  const Assignment& a = *p.assignment;
  const TaskState& ts = task(a.task_id);
  TaskView view;
  view.task_id = a.task_id;
  view.role = a.role;
  view.language = ts.task.language;
  view.round_id = a.round_id;
  if (a.role == Role::kLabeler) {
    view.sticker = ts.task.sticker;
    view.context = ts.task.context;
  } else {
    for (const auto& q : ts.queries) {
      if (q.origin == QueryOrigin::kLabel) view.queries.push_back(q.text);
    }
    view.grid = a.grid;
  }
  return view;
}

std::optional<TaskView> GameEngine::CurrentView(const std::string& player_id) const {
  const Player& p = player(player_id);
  if (!p.assignment) return std::nullopt;
  return MakeView(p);
}

std::optional<TaskView> GameEngine::AssignTask(const std::string& player_id) {
  const Player& p = player(player_id);
  if (p.assignment) return MakeView(p);

  auto pick = [&](auto&& eligible) -> const TaskState* {
    const TaskState* best = nullptr;
    for (const auto& [id, ts] : state_.tasks) {
      if (ts.task.language != p.language || ts.assignee || !eligible(ts)) continue;
      if (best == nullptr || ts.task.skip_count < best->task.skip_count) best = &ts;
    }
    return best;
  };
  auto pending = [](const TaskState& ts) { return ts.task.status == TaskStatus::kPending; };
  auto retrievable = [&](const TaskState& ts) {
    return ts.task.status == TaskStatus::kLabeled && ts.labeler_id != p.player_id;
  };

  Role role = p.current_role;
  const TaskState* chosen =
      role == Role::kLabeler ? pick(pending) : pick(retrievable);
  // A retriever who has never closed a round has nothing to alternate
  // from; rather than starve on an empty pool they start by labeling.
  if (chosen == nullptr && role == Role::kRetriever && p.closed_rounds == 0) {
    chosen = pick(pending);
    role = Role::kLabeler;
  }
  if (chosen == nullptr) return std::nullopt;

  const int64_t seq = state_.last_seq + 1;
  Json payload;
  payload["player_id"] = player_id;
  payload["task_id"] = chosen->task.task_id;
  payload["role"] = RoleName(role);
  if (role == Role::kRetriever) {
    const std::vector<std::string> corpus = StickerCorpus(p.language);
    payload["round_id"] = "r" + std::to_string(seq);
    payload["grid"] = BuildCandidateGrid(chosen->task.sticker.sticker_id, corpus,
                                         MixSeed(setup_.seed, static_cast<uint64_t>(seq)),
                                         setup_.config.grid_size);
  }
  Emit(EventKind::kTaskAssigned, std::move(payload));
  return MakeView(player(player_id));
}

std::vector<ScoredDoc> GameEngine::PreviewRetrieval(const std::string& player_id,
                                                    std::span<const std::string> queries) {
  const Player& p = player(player_id);
  if (queries.empty()) throw ValidationError("preview needs at least one query", "q");
  std::string text;
  for (const auto& q : queries) {
    if (!text.empty()) text += ' ';
    text += q;
  }
  const Index index = PreviewIndex(p.language);
  const auto results = SearchTopK(index, text, setup_.config.preview_k);

  Json payload;
  payload["player_id"] = player_id;
  payload["task_id"] =
      p.assignment && p.assignment->role == Role::kLabeler ? p.assignment->task_id : "";
  payload["queries"] = std::vector<std::string>(queries.begin(), queries.end());
  Json served = Json::array();
  for (const auto& r : results) {
    Json item;
    item["doc_id"] = r.doc_id;
    item["score"] = r.score;
    served.push_back(std::move(item));
  }
  payload["results"] = std::move(served);
  Emit(EventKind::kPreviewServed, std::move(payload));
  return results;
}

LabelRound GameEngine::SubmitQueries(const std::string& player_id, const std::string& task_id,
                                     std::span<const std::string> queries,
                                     std::optional<std::string> round_id) {
  const Player& p = player(player_id);
  if (round_id) {
    if (round_id->empty()) throw ValidationError("empty round_id", "round_id");
    if (const auto it = state_.label_rounds.find(*round_id); it != state_.label_rounds.end()) {
      if (it->second.player_id != player_id || it->second.task_id != task_id) {
        throw ConflictError("round_id '" + *round_id + "' already used");
      }
      return it->second;
    }
    if (state_.retrieve_rounds.contains(*round_id)) {
      throw ConflictError("round_id '" + *round_id + "' already used");
    }
  }
  const TaskState& ts = task(task_id);
  if (p.current_role != Role::kLabeler) {
    throw ConflictError("player " + player_id + " is not the labeler this round");
  }
  if (!p.assignment || p.assignment->task_id != task_id ||
      p.assignment->role != Role::kLabeler) {
    throw ConflictError("task " + task_id + " is not assigned to " + player_id);
  }
  if (queries.empty()) throw ValidationError("at least one query required", "queries");
  std::vector<std::string> cleaned =
      ValidateQueryList(queries, setup_.config.max_queries, "queries");
  for (const auto& q : cleaned) {
    for (const auto& earlier : ts.queries) {
      if (earlier.annotator_id == player_id && FoldCase(earlier.text) == FoldCase(q)) {
        throw ValidationError("'" + q + "' repeats an earlier query on this task", q);
      }
    }
  }

  const Assignment& a = *p.assignment;
  const bool revised = !a.first_preview.empty() && a.first_preview != FoldedSorted(cleaned);
  const std::string id = round_id ? *round_id : "l" + std::to_string(state_.last_seq + 1);
  Json payload;
  payload["player_id"] = player_id;
  payload["task_id"] = task_id;
  payload["round_id"] = id;
  payload["queries"] = cleaned;
  payload["preview_shown"] = a.preview_shown;
  payload["revised"] = revised;
  Emit(EventKind::kQueriesSubmitted, std::move(payload));
  return state_.label_rounds.at(id);
}

RetrieveRound GameEngine::SubmitRanking(const std::string& player_id,
                                        const std::string& round_id,
                                        std::span<const std::string> ranking,
                                        std::span<const std::string> suggestions) {
  const Player& p = player(player_id);
  const auto rit = state_.retrieve_rounds.find(round_id);
  if (rit == state_.retrieve_rounds.end()) {
    throw NotFoundError("unknown round '" + round_id + "'");
  }
  const RetrieveRound& round = rit->second;
  if (round.player_id != player_id) {
    throw ConflictError("round " + round_id + " belongs to another player");
  }
  if (round.outcome) return round;
  if (round.abandoned || !p.assignment || p.assignment->round_id != round_id ||
      p.current_role != Role::kRetriever) {
    throw ConflictError("round " + round_id + " is not open for " + player_id);
  }

  if (ranking.empty() || ranking.size() > setup_.config.max_ranking) {
    throw ValidationError("ranking must list 1.." +
                              std::to_string(setup_.config.max_ranking) + " stickers",
                          "ranking");
  }
  std::set<std::string> distinct;
  for (const auto& id : ranking) {
    if (std::find(round.candidate_grid.begin(), round.candidate_grid.end(), id) ==
        round.candidate_grid.end()) {
      throw ValidationError("sticker '" + id + "' is not in the candidate grid", id);
    }
    if (!distinct.insert(id).second) {
      throw ValidationError("sticker '" + id + "' ranked twice", id);
    }
  }
  const std::vector<std::string> cleaned =
      ValidateQueryList(suggestions, setup_.config.max_suggestions, "suggestions");

  const TaskState& ts = task(round.task_id);
  const std::string task_id = ts.task.task_id;
  const std::string labeler_id = ts.labeler_id;
  const Outcome outcome = OutcomeFor(ts.task.sticker.sticker_id, ranking);
  const auto [retriever_points, labeler_points] = ComputeScore(outcome);

  Json ranked;
  ranked["player_id"] = player_id;
  ranked["task_id"] = task_id;
  ranked["round_id"] = round_id;
  ranked["ranking"] = std::vector<std::string>(ranking.begin(), ranking.end());
  ranked["outcome"] = OutcomeName(outcome);
  Emit(EventKind::kRankingSubmitted, std::move(ranked));

  for (const auto& text : cleaned) {
    Json s;
    s["player_id"] = player_id;
    s["task_id"] = task_id;
    s["round_id"] = round_id;
    s["text"] = text;
    Emit(EventKind::kSuggestionAdded, std::move(s));
  }
  for (const auto& [who, role, points] :
       {std::tuple{player_id, Role::kRetriever, retriever_points},
        std::tuple{labeler_id, Role::kLabeler, labeler_points}}) {
    Json award;
    award["player_id"] = who;
    award["round_id"] = round_id;
    award["role"] = RoleName(role);
    award["points"] = points;
    Emit(EventKind::kScoreAwarded, std::move(award));
  }
  Json closing;
  closing["task_id"] = task_id;
  if (outcome == Outcome::kMiss) {
    Emit(EventKind::kTaskToReview, std::move(closing));
  } else {
    closing["outcome"] = OutcomeName(outcome);
    Emit(EventKind::kTaskCompleted, std::move(closing));
  }
  return state_.retrieve_rounds.at(round_id);
}

void GameEngine::SkipTask(const std::string& player_id, const std::string& task_id) {
  const Player& p = player(player_id);
  const TaskState& ts = task(task_id);
  if (!p.assignment || p.assignment->task_id != task_id) {
    throw ConflictError("task " + task_id + " is not assigned to " + player_id);
  }
  const int skips = ts.task.skip_count + 1;
  Json payload;
  payload["player_id"] = player_id;
  payload["task_id"] = task_id;
  payload["skip_count"] = skips;
  payload["retired"] = skips >= setup_.config.skip_cap;
  Emit(EventKind::kTaskSkipped, std::move(payload));
}

void GameEngine::Apply(const GameEvent& event) {
  const std::string at = "seq " + std::to_string(event.seq) + ": ";
  if (event.seq != state_.last_seq + 1) {
    throw CorruptLogError(at + "expected seq " + std::to_string(state_.last_seq + 1));
  }
  const Json& pl = event.payload;
  auto corrupt = [&](const std::string& why) { return CorruptLogError(at + why); };
  auto player_ref = [&](const std::string& id) -> Player& {
    const auto it = state_.players.find(id);
    if (it == state_.players.end()) throw corrupt("unknown player " + id);
    return it->second;
  };
  auto task_ref = [&](const std::string& id) -> TaskState& {
    const auto it = state_.tasks.find(id);
    if (it == state_.tasks.end()) throw corrupt("unknown task " + id);
    return it->second;
  };
  auto transition = [&](TaskState& ts, TaskStatus to) {
    if (!IsValidTransition(ts.task.status, to)) {
      throw corrupt("task " + ts.task.task_id + " cannot go from " +
                    std::string(TaskStatusName(ts.task.status)) + " to " +
                    std::string(TaskStatusName(to)));
    }
    ts.task.status = to;
  };

  try {
    switch (event.kind) {
      case EventKind::kSessionStart: {
        Player p;
        p.player_id = pl.at("player_id").get<std::string>();
        p.display_name = pl.at("display_name").get<std::string>();
        p.language = ParseLanguage(pl.at("language").get<std::string>());
        p.current_role = ParseRole(pl.at("role").get<std::string>());
        if (!state_.players.emplace(p.player_id, p).second) {
          throw corrupt("duplicate player " + p.player_id);
        }
        break;
      }
      case EventKind::kTaskAssigned: {
        Player& p = player_ref(pl.at("player_id").get<std::string>());
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        if (p.assignment || ts.assignee) throw corrupt("double assignment");
        Assignment a;
        a.task_id = ts.task.task_id;
        a.role = ParseRole(pl.at("role").get<std::string>());
        if (a.role == Role::kLabeler) {
          if (ts.task.status != TaskStatus::kPending) throw corrupt("task not PENDING");
        } else {
          if (ts.task.status != TaskStatus::kLabeled || ts.labeler_id == p.player_id) {
            throw corrupt("task not retrievable by " + p.player_id);
          }
          a.round_id = pl.at("round_id").get<std::string>();
          a.grid = StringList(pl.at("grid"));
          RetrieveRound round;
          round.round_id = a.round_id;
          round.task_id = a.task_id;
          round.player_id = p.player_id;
          round.candidate_grid = a.grid;
          if (!state_.retrieve_rounds.emplace(round.round_id, round).second) {
            throw corrupt("duplicate round " + round.round_id);
          }
        }
        p.current_role = a.role;
        ts.assignee = p.player_id;
        p.assignment = std::move(a);
        break;
      }
      case EventKind::kPreviewServed: {
        Player& p = player_ref(pl.at("player_id").get<std::string>());
        const std::string task_id = pl.at("task_id").get<std::string>();
        if (task_id.empty() || !p.assignment || p.assignment->task_id != task_id) break;
        Assignment& a = *p.assignment;
        if (a.first_preview.empty()) a.first_preview = FoldedSorted(StringList(pl.at("queries")));
        for (const auto& r : pl.at("results")) {
          const std::string id = r.at("doc_id").get<std::string>();
          if (std::find(a.preview_shown.begin(), a.preview_shown.end(), id) ==
              a.preview_shown.end()) {
            a.preview_shown.push_back(id);
          }
        }
        break;
      }
      case EventKind::kQueriesSubmitted: {
        Player& p = player_ref(pl.at("player_id").get<std::string>());
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        if (!p.assignment || p.assignment->task_id != ts.task.task_id ||
            p.assignment->role != Role::kLabeler) {
          throw corrupt("queries from unassigned player");
        }
        transition(ts, TaskStatus::kLabeled);
        LabelRound round;
        round.round_id = pl.at("round_id").get<std::string>();
        round.task_id = ts.task.task_id;
        round.player_id = p.player_id;
        round.submitted_queries = StringList(pl.at("queries"));
        round.preview_shown = StringList(pl.at("preview_shown"));
        round.revised = pl.at("revised").get<bool>();
        for (const auto& q : round.submitted_queries) {
          ts.queries.push_back({q, p.player_id, QueryOrigin::kLabel});
        }
        ts.labeler_id = p.player_id;
        ts.assignee.reset();
        state_.retrieval_pool[ts.task.language].insert(ts.task.task_id);
        p.assignment.reset();
        p.current_role = Role::kRetriever;
        ++p.closed_rounds;
        if (!state_.label_rounds.emplace(round.round_id, std::move(round)).second) {
          throw corrupt("duplicate round");
        }
        break;
      }
      case EventKind::kRankingSubmitted: {
        Player& p = player_ref(pl.at("player_id").get<std::string>());
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        const auto rit = state_.retrieve_rounds.find(pl.at("round_id").get<std::string>());
        if (rit == state_.retrieve_rounds.end() || rit->second.outcome ||
            rit->second.player_id != p.player_id || !p.assignment ||
            p.assignment->round_id != rit->first) {
          throw corrupt("ranking for a round that is not open");
        }
        RetrieveRound& round = rit->second;
        round.ranking = StringList(pl.at("ranking"));
        const Outcome outcome = ParseOutcome(pl.at("outcome").get<std::string>());
        if (outcome != OutcomeFor(ts.task.sticker.sticker_id, round.ranking)) {
          throw corrupt("outcome inconsistent with ranking");
        }
        round.outcome = outcome;
        ts.outcome = outcome;
        ts.retriever_id = p.player_id;
        ts.assignee.reset();
        p.assignment.reset();
        p.current_role = Role::kLabeler;
        ++p.closed_rounds;
        Player& labeler = player_ref(ts.labeler_id);
        labeler.feedback.push_back(
            {ts.task.task_id, p.player_id, outcome, ComputeScore(outcome).second});
        break;
      }
      case EventKind::kSuggestionAdded: {
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        const std::string who = pl.at("player_id").get<std::string>();
        const std::string text = pl.at("text").get<std::string>();
        const auto rit = state_.retrieve_rounds.find(pl.at("round_id").get<std::string>());
        if (rit == state_.retrieve_rounds.end()) throw corrupt("suggestion for unknown round");
        rit->second.suggestions.push_back(text);
        ts.queries.push_back({text, who, QueryOrigin::kSuggestion});
        break;
      }
      case EventKind::kScoreAwarded: {
        Player& p = player_ref(pl.at("player_id").get<std::string>());
        const int points = pl.at("points").get<int>();
        if (points < 0) throw corrupt("negative award");
        p.score += points;
        state_.points_awarded += points;
        break;
      }
      case EventKind::kTaskCompleted: {
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        if (!ts.outcome || *ts.outcome == Outcome::kMiss) {
          throw corrupt("completion without a successful retrieval");
        }
        transition(ts, TaskStatus::kCompleted);
        state_.retrieval_pool[ts.task.language].erase(ts.task.task_id);
        break;
      }
      case EventKind::kTaskToReview: {
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        transition(ts, TaskStatus::kReview);
        state_.retrieval_pool[ts.task.language].erase(ts.task.task_id);
        break;
      }
      case EventKind::kTaskSkipped: {
        Player& p = player_ref(pl.at("player_id").get<std::string>());
        TaskState& ts = task_ref(pl.at("task_id").get<std::string>());
        if (!p.assignment || p.assignment->task_id != ts.task.task_id) {
          throw corrupt("skip by non-assignee");
        }
        if (!p.assignment->round_id.empty()) {
          state_.retrieve_rounds.at(p.assignment->round_id).abandoned = true;
        }
        p.assignment.reset();
        ts.assignee.reset();
        ts.task.skip_count = pl.at("skip_count").get<int>();
        if (pl.at("retired").get<bool>()) {
          transition(ts, TaskStatus::kRetired);
          state_.retrieval_pool[ts.task.language].erase(ts.task.task_id);
        }
        break;
      }
    }
  } catch (const Json::exception& e) {
    throw corrupt(std::string("malformed payload: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kCorruptLog) throw;
    throw corrupt(e.what());
  }
  state_.last_seq = event.seq;
}

}  // namespace sticktionary
