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

// HTTP/JSON service around a single-writer game engine.

#ifndef STICKTIONARY_SERVER_H_
#define STICKTIONARY_SERVER_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "sticktionary/dataset.h"
#include "sticktionary/game.h"
#include "sticktionary/jsonl.h"

namespace httplib {
class Server;
}

namespace sticktionary {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir = "data";
  Language language = Language::kEn;
  uint64_t seed = 0;
  std::string admin_token;  // admin endpoints are disabled when empty
  int64_t session_ttl_seconds = 12 * 3600;
  std::string ui_dir;       // static bundle served at "/" when set
  bool fsync = true;
};

// JSON config file (keys as in ServerConfig; optional) overridden by
// PORT, DATA_DIR, LANG, SEED and ADMIN_TOKEN from `env`. LANG accepts
// "en"/"zh" and locale strings such as "zh_CN.UTF-8"; other values (for
// example "C.UTF-8") are ignored.
ServerConfig LoadServerConfig(const std::string& path,
                              const std::map<std::string, std::string>& env);
std::map<std::string, std::string> ProcessEnvironment();

// Files inside the data directory.
struct DataDirLayout {
  std::string pool;        // pool.jsonl, curated tasks
  std::string finalized;   // finalized.jsonl, optional prior records
  std::string events;      // events.jsonl, the durable log
  std::string reviews;     // reviews.jsonl, admin decisions
  std::string corrections; // corrections.tsv, optional
};
DataDirLayout Layout(const std::string& data_dir);

// Loads the pool and finalized records of a data directory.
EngineSetup LoadSetup(const std::string& data_dir, uint64_t seed);

// Request handling independent of the transport. Every method throws
// sticktionary::Error; the HTTP layer maps codes to statuses.
class GameService {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  // Opens (creating if needed) the data directory and replays its log.
  explicit GameService(ServerConfig config, Clock clock = std::chrono::system_clock::now);

  Json CreateSession(const Json& body);
  // Returns the player id behind a live token; throws Unauthorized.
  std::string Authenticate(const std::string& token);

  Json GetTask(const std::string& player_id);
  Json TaskStatusView(const std::string& task_id);
  Json Label(const std::string& player_id, const Json& body);
  Json Preview(const std::string& player_id, const std::vector<std::string>& queries);
  Json Retrieve(const std::string& player_id, const Json& body);
  Json Skip(const std::string& player_id, const Json& body);
  Json Score(const std::string& player_id);
  Json Leaderboard();
  Json Review(const std::string& admin_token, const Json& body);
  std::string Export(const std::string& admin_token);

  const ServerConfig& config() const { return config_; }
  EngineState Snapshot();

 private:
  void RequireAdmin(const std::string& token) const;
  Json PlayerSummary(const Player& p) const;

  ServerConfig config_;
  Clock clock_;
  DataDirLayout layout_;
  std::mutex engine_mu_;
  std::unique_ptr<FileEventLog> log_;
  std::unique_ptr<GameEngine> engine_;
  std::vector<ReviewDecision> reviews_;
  CorrectionMap corrections_;

  struct Session {
    std::string player_id;
    std::chrono::system_clock::time_point expiry;
  };
  std::mutex sessions_mu_;
  std::map<std::string, Session> sessions_;
};

// Binds routes for `service` onto an httplib server.
class HttpServer {
 public:
  explicit HttpServer(GameService& service);
  ~HttpServer();

  // Binds to config host/port (port 0 picks a free one) and returns the
  // bound port. Throws Io when the port is unavailable.
  int Bind();
  // Blocks until Stop().
  void Listen();
  void Stop();

 private:
  GameService& service_;
  std::unique_ptr<httplib::Server> server_;
};

// 128-bit random token, hex encoded.
std::string NewSessionToken();

}  // namespace sticktionary

#endif  // STICKTIONARY_SERVER_H_
