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

#include "sticktionary/server.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

#include "httplib.h"
#include "sticktionary/hash.h"
#include "sticktionary/status.h"

namespace sticktionary {

namespace fs = std::filesystem;

namespace {

int64_t ParseInteger(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgumentError(std::string("invalid ") + what + " '" + text + "'");
  }
}

std::optional<Language> LanguageFromLocale(const std::string& value) {
  const std::string folded = FoldCase(value);
  if (folded.rfind("en", 0) == 0) return Language::kEn;
  if (folded.rfind("zh", 0) == 0) return Language::kZh;
  return std::nullopt;
}

std::vector<std::string> StringArray(const Json& body, const char* key, bool required) {
  const auto it = body.find(key);
  if (it == body.end() || it->is_null()) {
    if (required) throw ValidationError(std::string("missing '") + key + "'", key);
    return {};
  }
  if (!it->is_array()) throw ValidationError(std::string("'") + key + "' must be an array", key);
  std::vector<std::string> out;
  for (const auto& x : *it) {
    if (!x.is_string()) {
      throw ValidationError(std::string("'") + key + "' must contain strings", key);
    }
    out.push_back(x.get<std::string>());
  }
  return out;
}

void AppendLineDurably(const std::string& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open " + path + ": " + std::strerror(errno));
  const std::string data = line + "\n";
  const bool ok = ::write(fd, data.data(), data.size()) == static_cast<ssize_t>(data.size()) &&
                  ::fsync(fd) == 0;
  ::close(fd);
  if (!ok) throw IoError("append to " + path + " failed");
}

Json ViewToJson(const TaskView& v) {
  Json j;
  j["task_id"] = v.task_id;
  j["role"] = RoleName(v.role);
  j["language"] = LanguageName(v.language);
  if (v.role == Role::kLabeler) {
    Json sticker;
    sticker["sticker_id"] = v.sticker.sticker_id;
    sticker["image_ref"] = v.sticker.image_ref;
    j["sticker"] = std::move(sticker);
    Json context = Json::array();
    for (const auto& u : v.context) {
      Json utt;
      utt["speaker_id"] = u.speaker_id;
      utt["text"] = u.text;
      context.push_back(std::move(utt));
    }
    j["context"] = std::move(context);
  } else {
    j["round_id"] = v.round_id;
    j["queries"] = v.queries;
    j["grid"] = v.grid;
  }
  return j;
}

int HttpStatus(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kValidation:
      return 400;
    case ErrorCode::kUnauthorized:
      return 401;
    case ErrorCode::kNotFound:
      return 404;
    case ErrorCode::kConflict:
      return 409;
    default:
      return 500;
  }
}

}  // namespace

std::string NewSessionToken() {
  std::random_device device;
  uint64_t hi = (static_cast<uint64_t>(device()) << 32) | device();
  uint64_t lo = (static_cast<uint64_t>(device()) << 32) | device();
  return HexDigest(hi) + HexDigest(lo);
}

ServerConfig LoadServerConfig(const std::string& path,
                              const std::map<std::string, std::string>& env) {
  ServerConfig c;
  if (!path.empty()) {
    Json j;
    try {
      j = Json::parse(ReadFile(path));
    } catch (const Json::exception& e) {
      throw ValidationError(path + ": " + e.what());
    }
    try {
      c.host = j.value("host", c.host);
      c.port = j.value("port", c.port);
      c.data_dir = j.value("data_dir", c.data_dir);
      if (j.contains("language")) c.language = ParseLanguage(j["language"].get<std::string>());
      c.seed = j.value("seed", c.seed);
      c.admin_token = j.value("admin_token", c.admin_token);
      c.session_ttl_seconds = j.value("session_ttl_seconds", c.session_ttl_seconds);
      c.ui_dir = j.value("ui_dir", c.ui_dir);
      c.fsync = j.value("fsync", c.fsync);
    } catch (const Json::exception& e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  if (const auto it = env.find("PORT"); it != env.end() && !it->second.empty()) {
    c.port = static_cast<int>(ParseInteger(it->second, "PORT"));
  }
  if (const auto it = env.find("DATA_DIR"); it != env.end() && !it->second.empty()) {
    c.data_dir = it->second;
  }
  if (const auto it = env.find("LANG"); it != env.end()) {
    if (const auto lang = LanguageFromLocale(it->second)) c.language = *lang;
  }
  if (const auto it = env.find("SEED"); it != env.end() && !it->second.empty()) {
    c.seed = static_cast<uint64_t>(ParseInteger(it->second, "SEED"));
  }
  if (const auto it = env.find("ADMIN_TOKEN"); it != env.end() && !it->second.empty()) {
    c.admin_token = it->second;
  }
  if (c.port < 0 || c.port > 65535) {
    throw InvalidArgumentError("port out of range: " + std::to_string(c.port));
  }
  return c;
}

std::map<std::string, std::string> ProcessEnvironment() {
  std::map<std::string, std::string> env;
  for (const char* key : {"PORT", "DATA_DIR", "LANG", "SEED", "ADMIN_TOKEN"}) {
    if (const char* v = std::getenv(key)) env[key] = v;
  }
  return env;
}

DataDirLayout Layout(const std::string& data_dir) {
  const fs::path dir(data_dir);
  return {(dir / "pool.jsonl").string(), (dir / "finalized.jsonl").string(),
          (dir / "events.jsonl").string(), (dir / "reviews.jsonl").string(),
          (dir / "corrections.tsv").string()};
}

EngineSetup LoadSetup(const std::string& data_dir, uint64_t seed) {
  const DataDirLayout layout = Layout(data_dir);
  EngineSetup setup;
  setup.seed = seed;
  if (fs::exists(layout.pool)) setup.tasks = ReadTaskPool(layout.pool);
  if (fs::exists(layout.finalized)) setup.finalized = ImportJsonl(layout.finalized);
  return setup;
}

GameService::GameService(ServerConfig config, Clock clock)
    : config_(std::move(config)), clock_(std::move(clock)), layout_(Layout(config_.data_dir)) {
  std::error_code ec;
  fs::create_directories(config_.data_dir, ec);
  if (ec || !fs::is_directory(config_.data_dir)) {
    throw IoError("data dir " + config_.data_dir + " is not usable: " + ec.message());
  }
  EngineSetup setup = LoadSetup(config_.data_dir, config_.seed);
  std::vector<GameEvent> events;
  if (fs::exists(layout_.events)) events = ReadEventLog(layout_.events);
  log_ = std::make_unique<FileEventLog>(layout_.events, config_.fsync);
  engine_ = std::make_unique<GameEngine>(
      GameEngine::Replay(std::move(setup), events, log_.get()));
  if (fs::exists(layout_.reviews)) reviews_ = ReadReviewDecisions(layout_.reviews);
  if (fs::exists(layout_.corrections)) corrections_ = ReadCorrections(layout_.corrections);
}

EngineState GameService::Snapshot() {
  std::lock_guard lock(engine_mu_);
  return engine_->state();
}

Json GameService::PlayerSummary(const Player& p) const {
  Json j;
  j["player_id"] = p.player_id;
  j["display_name"] = p.display_name;
  j["role"] = RoleName(p.current_role);
  j["score"] = p.score;
  return j;
}

Json GameService::CreateSession(const Json& body) {
  if (!body.is_object()) throw ValidationError("expected a JSON object");
  const std::string name = RequireString(body, "name");
  Language language = config_.language;
  if (body.contains("language")) language = ParseLanguage(RequireString(body, "language"));

  Player player;
  {
    std::lock_guard lock(engine_mu_);
    player = engine_->StartSession(name, language);
  }
  const std::string token = NewSessionToken();
  const auto expiry = clock_() + std::chrono::seconds(config_.session_ttl_seconds);
  {
    std::lock_guard lock(sessions_mu_);
    sessions_[token] = {player.player_id, expiry};
  }
  Json j = PlayerSummary(player);
  j["token"] = token;
  j["expires_at"] =
      std::chrono::duration_cast<std::chrono::seconds>(expiry.time_since_epoch()).count();
  return j;
}

std::string GameService::Authenticate(const std::string& token) {
  std::lock_guard lock(sessions_mu_);
  const auto it = sessions_.find(token);
  if (token.empty() || it == sessions_.end()) throw UnauthorizedError("unknown session token");
  if (clock_() >= it->second.expiry) {
    sessions_.erase(it);
    throw UnauthorizedError("session expired");
  }
  return it->second.player_id;
}

Json GameService::GetTask(const std::string& player_id) {
  std::lock_guard lock(engine_mu_);
  const auto view = engine_->AssignTask(player_id);
  Json j = PlayerSummary(engine_->player(player_id));
  j["task"] = view ? ViewToJson(*view) : Json();
  return j;
}

Json GameService::TaskStatusView(const std::string& task_id) {
  std::lock_guard lock(engine_mu_);
  const TaskState& ts = engine_->task(task_id);
  Json j;
  j["task_id"] = task_id;
  j["status"] = TaskStatusName(ts.task.status);
  j["skip_count"] = ts.task.skip_count;
  j["outcome"] = ts.outcome ? Json(OutcomeName(*ts.outcome)) : Json();
  j["query_count"] = ts.queries.size();
  return j;
}

Json GameService::Label(const std::string& player_id, const Json& body) {
  if (!body.is_object()) throw ValidationError("expected a JSON object");
  const std::string task_id = RequireString(body, "task_id");
  const auto queries = StringArray(body, "queries", true);
  std::optional<std::string> round_id;
  if (body.contains("round_id") && !body["round_id"].is_null()) {
    round_id = RequireString(body, "round_id");
  }
  std::lock_guard lock(engine_mu_);
  const LabelRound round = engine_->SubmitQueries(player_id, task_id, queries, round_id);
  Json r;
  r["round_id"] = round.round_id;
  r["task_id"] = round.task_id;
  r["queries"] = round.submitted_queries;
  r["preview_shown"] = round.preview_shown;
  r["revised"] = round.revised;
  Json j = PlayerSummary(engine_->player(player_id));
  j["round"] = std::move(r);
  return j;
}

Json GameService::Preview(const std::string& player_id,
                          const std::vector<std::string>& queries) {
  std::lock_guard lock(engine_mu_);
  const auto results = engine_->PreviewRetrieval(player_id, queries);
  Json list = Json::array();
  for (const auto& r : results) {
    Json item;
    item["sticker_id"] = r.doc_id;
    item["score"] = r.score;
    list.push_back(std::move(item));
  }
  Json j;
  j["results"] = std::move(list);
  return j;
}

Json GameService::Retrieve(const std::string& player_id, const Json& body) {
  if (!body.is_object()) throw ValidationError("expected a JSON object");
  const std::string round_id = RequireString(body, "round_id");
  const auto ranking = StringArray(body, "ranking", true);
  const auto suggestions = StringArray(body, "suggestions", false);
  std::lock_guard lock(engine_mu_);
  const RetrieveRound round = engine_->SubmitRanking(player_id, round_id, ranking, suggestions);
  Json j = PlayerSummary(engine_->player(player_id));
  j["round_id"] = round.round_id;
  j["task_id"] = round.task_id;
  j["outcome"] = OutcomeName(*round.outcome);
  j["points"] = ComputeScore(*round.outcome).first;
  j["task_status"] = TaskStatusName(engine_->task(round.task_id).task.status);
  return j;
}

Json GameService::Skip(const std::string& player_id, const Json& body) {
  if (!body.is_object()) throw ValidationError("expected a JSON object");
  const std::string task_id = RequireString(body, "task_id");
  std::lock_guard lock(engine_mu_);
  engine_->SkipTask(player_id, task_id);
  const TaskState& ts = engine_->task(task_id);
  Json j = PlayerSummary(engine_->player(player_id));
  j["task_id"] = task_id;
  j["skip_count"] = ts.task.skip_count;
  j["task_status"] = TaskStatusName(ts.task.status);
  return j;
}

Json GameService::Score(const std::string& player_id) {
  std::lock_guard lock(engine_mu_);
  const Player& p = engine_->player(player_id);
  Json j = PlayerSummary(p);
  Json feedback = Json::array();
  for (const auto& f : p.feedback) {
    Json item;
    item["task_id"] = f.task_id;
    item["retriever_id"] = f.retriever_id;
    item["outcome"] = OutcomeName(f.outcome);
    item["points"] = f.points;
    feedback.push_back(std::move(item));
  }
  j["feedback"] = std::move(feedback);
  return j;
}

Json GameService::Leaderboard() {
  std::lock_guard lock(engine_mu_);
  Json players = Json::array();
  for (const auto& p : engine_->Leaderboard()) players.push_back(PlayerSummary(p));
  Json j;
  j["players"] = std::move(players);
  return j;
}

void GameService::RequireAdmin(const std::string& token) const {
  if (config_.admin_token.empty() || token != config_.admin_token) {
    throw UnauthorizedError("admin token required");
  }
}

Json GameService::Review(const std::string& admin_token, const Json& body) {
  RequireAdmin(admin_token);
  if (!body.is_object()) throw ValidationError("expected a JSON object");
  ReviewDecision d;
  d.task_id = RequireString(body, "task_id");
  const std::string decision = RequireString(body, "decision");
  if (decision != "approve" && decision != "reject") {
    throw ValidationError("decision must be approve or reject", "decision");
  }
  d.approve = decision == "approve";
  d.rejected_queries = StringArray(body, "rejected_queries", false);

  std::lock_guard lock(engine_mu_);
  const TaskState& ts = engine_->task(d.task_id);
  AppendLineDurably(layout_.reviews, ReviewDecisionToJsonLine(d));
  reviews_.push_back(d);
  Json j;
  j["task_id"] = d.task_id;
  j["decision"] = decision;
  j["task_status"] = TaskStatusName(ts.task.status);
  return j;
}

std::string GameService::Export(const std::string& admin_token) {
  RequireAdmin(admin_token);
  std::lock_guard lock(engine_mu_);
  const FinalizeResult result = FinalizeRecords(engine_->state(), reviews_, corrections_);
  std::string out;
  for (const auto& r : result.records) out += RecordToJsonLine(r) + "\n";
  return out;
}

HttpServer::HttpServer(GameService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  // SO_REUSEADDR only: a port held by another process must fail to bind.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto send_error = [](httplib::Response& res, int status, std::string_view code,
                       const std::string& message, const std::string& field) {
    Json j;
    j["code"] = code;
    j["message"] = message;
    if (!field.empty()) j["field"] = field;
    res.status = status;
    res.set_content(j.dump(), "application/json");
  };
  auto guarded = [send_error](auto fn) {
    return [fn, send_error](const httplib::Request& req, httplib::Response& res) {
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, HttpStatus(e.code()), ErrorCodeName(e.code()), e.what(), e.field());
      } catch (const Json::exception& e) {
        send_error(res, 400, "validation", e.what(), "");
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what(), "");
      }
    };
  };
  auto body_of = [](const httplib::Request& req) {
    try {
      return Json::parse(req.body.empty() ? "{}" : req.body);
    } catch (const Json::exception&) {
      throw ValidationError("malformed JSON body");
    }
  };
  auto token_of = [](const httplib::Request& req) {
    std::string auth = req.get_header_value("Authorization");
    if (auth.rfind("Bearer ", 0) == 0) return auth.substr(7);
    return req.get_header_value("X-Session-Token");
  };
  auto reply = [](httplib::Response& res, const Json& j) {
    res.set_content(j.dump(), "application/json");
  };
  GameService* svc = &service_;

  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(R"({"status":"ok"})", "application/json");
  });
  server_->Post("/api/session", guarded([=](const auto& req, auto& res) {
    reply(res, svc->CreateSession(body_of(req)));
  }));
  server_->Get("/api/task", guarded([=](const auto& req, auto& res) {
    const std::string player = svc->Authenticate(token_of(req));
    if (req.has_param("task_id")) {
      reply(res, svc->TaskStatusView(req.get_param_value("task_id")));
    } else {
      reply(res, svc->GetTask(player));
    }
  }));
  server_->Post("/api/label", guarded([=](const auto& req, auto& res) {
    const std::string player = svc->Authenticate(token_of(req));
    reply(res, svc->Label(player, body_of(req)));
  }));
  server_->Get("/api/preview", guarded([=](const auto& req, auto& res) {
    const std::string player = svc->Authenticate(token_of(req));
    std::vector<std::string> queries;
    const auto count = req.get_param_value_count("q");
    for (std::size_t i = 0; i < count; ++i) {
      std::string q = req.get_param_value("q", i);
      if (!CollapseWhitespace(q).empty()) queries.push_back(std::move(q));
    }
    reply(res, svc->Preview(player, queries));
  }));
  server_->Post("/api/retrieve", guarded([=](const auto& req, auto& res) {
    const std::string player = svc->Authenticate(token_of(req));
    reply(res, svc->Retrieve(player, body_of(req)));
  }));
  server_->Post("/api/skip", guarded([=](const auto& req, auto& res) {
    const std::string player = svc->Authenticate(token_of(req));
    reply(res, svc->Skip(player, body_of(req)));
  }));
  server_->Get("/api/score", guarded([=](const auto& req, auto& res) {
    reply(res, svc->Score(svc->Authenticate(token_of(req))));
  }));
  server_->Get("/api/leaderboard", guarded([=](const auto&, auto& res) {
    reply(res, svc->Leaderboard());
  }));
  server_->Post("/api/admin/review", guarded([=](const auto& req, auto& res) {
    reply(res, svc->Review(req.get_header_value("X-Admin-Token"), body_of(req)));
  }));
  server_->Get("/api/admin/export", guarded([=](const auto& req, auto& res) {
    res.set_content(svc->Export(req.get_header_value("X-Admin-Token")),
                    "application/x-ndjson");
  }));
  if (!service_.config().ui_dir.empty()) {
    server_->set_mount_point("/", service_.config().ui_dir);
  }
}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Bind() {
  const auto& c = service_.config();
  if (c.port == 0) {
    const int port = server_->bind_to_any_port(c.host);
    if (port < 0) throw IoError("cannot bind " + c.host);
    return port;
  }
  if (!server_->bind_to_port(c.host, c.port)) {
    throw IoError("cannot bind " + c.host + ":" + std::to_string(c.port) +
                  " (port busy?)");
  }
  return c.port;
}

void HttpServer::Listen() { server_->listen_after_bind(); }

void HttpServer::Stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace sticktionary
