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

// The labeler/retriever annotation game. Every state change is an appended
// GameEvent; live play and replay share one apply path, so replaying a log
// rebuilds the exact engine state.

#ifndef STICKTIONARY_GAME_H_
#define STICKTIONARY_GAME_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sticktionary/curation.h"
#include "sticktionary/jsonl.h"
#include "sticktionary/records.h"
#include "sticktionary/retrieval.h"

namespace sticktionary {

enum class Role { kLabeler, kRetriever };
enum class Outcome { kHit1, kHit2, kHit3, kMiss };
enum class EventKind {
  kSessionStart,
  kTaskAssigned,
  kQueriesSubmitted,
  kPreviewServed,
  kRankingSubmitted,
  kSuggestionAdded,
  kTaskSkipped,
  kScoreAwarded,
  kTaskCompleted,
  kTaskToReview,
};

std::string_view RoleName(Role role);
Role ParseRole(std::string_view name);
std::string_view OutcomeName(Outcome outcome);
Outcome ParseOutcome(std::string_view name);
std::string_view EventKindName(EventKind kind);
// Unknown names throw CorruptLog.
EventKind ParseEventKind(std::string_view name);

struct GameEvent {
  int64_t seq = 0;
  int64_t timestamp_ms = 0;
  EventKind kind = EventKind::kSessionStart;
  Json payload;

  bool operator==(const GameEvent&) const = default;
};

std::string EventToJsonLine(const GameEvent& event);
GameEvent EventFromJson(const Json& j);

struct GameConfig {
  std::size_t grid_size = 9;
  int skip_cap = 3;
  std::size_t max_queries = 5;
  std::size_t max_query_chars = 64;
  std::size_t max_suggestions = 5;
  std::size_t max_ranking = 3;
  std::size_t preview_k = 8;
};

// Everything the engine starts from besides the log: the curated task pool
// and any already-finalized records (they feed previews and distractors).
struct EngineSetup {
  std::vector<AnnotationTask> tasks;
  std::vector<QueryRecord> finalized;
  uint64_t seed = 0;
  GameConfig config;
};

struct Feedback {
  std::string task_id;
  std::string retriever_id;
  Outcome outcome = Outcome::kMiss;
  int points = 0;

  bool operator==(const Feedback&) const = default;
};

struct Assignment {
  std::string task_id;
  Role role = Role::kLabeler;
  std::string round_id;             // retrieve rounds only
  std::vector<std::string> grid;    // retrieve rounds only
  std::vector<std::string> preview_shown;
  std::vector<std::string> first_preview;  // case-folded, sorted

  bool operator==(const Assignment&) const = default;
};

struct Player {
  std::string player_id;
  std::string display_name;
  Role current_role = Role::kLabeler;
  int64_t score = 0;
  Language language = Language::kEn;
  int closed_rounds = 0;
  std::optional<Assignment> assignment;
  std::vector<Feedback> feedback;

  bool operator==(const Player&) const = default;
};

struct TaskState {
  AnnotationTask task;
  std::string labeler_id;
  std::string retriever_id;
  std::optional<std::string> assignee;
  std::vector<QueryEntry> queries;
  std::optional<Outcome> outcome;

  bool operator==(const TaskState&) const = default;
};

struct LabelRound {
  std::string round_id;
  std::string task_id;
  std::string player_id;
  std::vector<std::string> submitted_queries;
  std::vector<std::string> preview_shown;
  bool revised = false;

  bool operator==(const LabelRound&) const = default;
};

struct RetrieveRound {
  std::string round_id;
  std::string task_id;
  std::string player_id;
  std::vector<std::string> candidate_grid;
  std::vector<std::string> ranking;
  std::vector<std::string> suggestions;
  std::optional<Outcome> outcome;  // empty while open
  bool abandoned = false;

  bool operator==(const RetrieveRound&) const = default;
};

struct EngineState {
  std::map<std::string, Player> players;
  std::map<std::string, TaskState> tasks;
  std::map<std::string, LabelRound> label_rounds;
  std::map<std::string, RetrieveRound> retrieve_rounds;
  std::map<Language, std::set<std::string>> retrieval_pool;
  int64_t last_seq = 0;
  int64_t points_awarded = 0;

  bool operator==(const EngineState&) const = default;
};

// What a player sees for their current assignment.
struct TaskView {
  std::string task_id;
  Role role = Role::kLabeler;
  Sticker sticker;  // retrievers get an empty sticker: they must find it
  std::vector<Utterance> context;
  Language language = Language::kEn;
  std::string round_id;
  std::vector<std::string> queries;  // the labeler's queries
  std::vector<std::string> grid;
};

// (retriever points, labeler points).
std::pair<int, int> ComputeScore(Outcome outcome);
Outcome OutcomeFor(std::string_view gold, std::span<const std::string> ranking);
Role InitialRole(uint64_t seed);

// Gold plus up to grid_size - 1 distractors sampled without replacement
// from `corpus` (gold entries ignored), shuffled. Deterministic in `seed`.
std::vector<std::string> BuildCandidateGrid(std::string_view gold,
                                            std::span<const std::string> corpus,
                                            uint64_t seed, std::size_t grid_size = 9);

class EventSink {
 public:
  virtual ~EventSink() = default;
  // Must be durable when it returns; throws Io on failure.
  virtual void Append(const GameEvent& event) = 0;
};

// Append-only JSONL event log; fsyncs every append unless disabled.
class FileEventLog : public EventSink {
 public:
  explicit FileEventLog(const std::string& path, bool fsync = true);
  ~FileEventLog() override;
  FileEventLog(const FileEventLog&) = delete;
  FileEventLog& operator=(const FileEventLog&) = delete;

  void Append(const GameEvent& event) override;

 private:
  std::string path_;
  int fd_ = -1;
  bool fsync_;
};

// Reads a log written by FileEventLog. Malformed lines throw CorruptLog.
std::vector<GameEvent> ReadEventLog(const std::string& path);

int64_t SystemClockMs();

class GameEngine {
 public:
  using Clock = std::function<int64_t()>;

  explicit GameEngine(EngineSetup setup, EventSink* sink = nullptr,
                      Clock clock = SystemClockMs);

  // Rebuilds an engine from its setup and log. Gaps, unknown kinds or
  // inconsistent events throw CorruptLog naming the seq. The returned
  // engine appends to `sink` from then on.
  static GameEngine Replay(EngineSetup setup, std::span<const GameEvent> events,
                           EventSink* sink = nullptr, Clock clock = SystemClockMs);

  // Role is drawn from `seed` when given, otherwise from the engine seed
  // and the player's ordinal.
  Player StartSession(std::string_view display_name, Language language,
                      std::optional<uint64_t> seed = std::nullopt);

  // Current assignment, or a new one. Labelers get the PENDING task with the
  // fewest skips (then lowest id); retrievers get a pooled task they did not
  // label. nullopt when starved.
  std::optional<TaskView> AssignTask(const std::string& player_id);

  // BM25 over the labeled and finalized query documents of the player's
  // language.
  std::vector<ScoredDoc> PreviewRetrieval(const std::string& player_id,
                                          std::span<const std::string> queries);

  // Idempotent per round_id.
  LabelRound SubmitQueries(const std::string& player_id, const std::string& task_id,
                           std::span<const std::string> queries,
                           std::optional<std::string> round_id = std::nullopt);

  // Idempotent per round_id once closed.
  RetrieveRound SubmitRanking(const std::string& player_id, const std::string& round_id,
                              std::span<const std::string> ranking,
                              std::span<const std::string> suggestions = {});

  void SkipTask(const std::string& player_id, const std::string& task_id);

  const EngineState& state() const { return state_; }
  const std::vector<GameEvent>& events() const { return events_; }
  const EngineSetup& setup() const { return setup_; }

  const Player& player(const std::string& player_id) const;
  const TaskState& task(const std::string& task_id) const;
  std::optional<TaskView> CurrentView(const std::string& player_id) const;
  // Players ordered by (score desc, player_id asc).
  std::vector<Player> Leaderboard() const;

  // Sticker ids usable as distractors, sorted.
  std::vector<std::string> StickerCorpus(Language language) const;
  Index PreviewIndex(Language language) const;

 private:
  Player& MutablePlayer(const std::string& player_id);
  std::vector<std::string> ValidateQueryList(std::span<const std::string> queries,
                                             std::size_t max_count, const char* what) const;
  void Emit(EventKind kind, Json payload);
  void Apply(const GameEvent& event);
  TaskView MakeView(const Player& player) const;

  EngineSetup setup_;
  EventSink* sink_;
  Clock clock_;
  EngineState state_;
  std::vector<GameEvent> events_;
};

}  // namespace sticktionary

#endif  // STICKTIONARY_GAME_H_
