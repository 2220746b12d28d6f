// Copyright 2026 The INAUT Authors.
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


// Collaborative service: validation, contributions with trust levels and a
// moderation queue, zone queries and document generation over immutable KB
// snapshots. `Service` holds the logic; `HttpServer` maps it onto HTTP.
#ifndef INAUT_SERVICE_HPP_
#define INAUT_SERVICE_HPP_

#include <atomic>
#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "inaut/engine.hpp"
#include "json.hpp"

namespace httplib {
class Server;
}

namespace inaut::service {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string kb_path;
  std::string doc_path;
  std::string weights_path;       // empty: built-in defaults
  std::string closed_lists_path;  // empty: built-in defaults
  std::string state_dir;          // contribution log and snapshots; empty: in memory only
  int auto_merge_threshold = 2;
  size_t max_body_bytes = 64 * 1024;
  int snapshot_every = 10;  // merges between snapshot files
  int merge_retries = 3;
  std::map<std::string, int> authors;            // author id -> trust level 0-3
  std::map<std::string, std::string> moderators;  // bearer token -> moderator id

  // Relative paths are resolved against `base_dir`.
  static ServiceConfig from_json(const nlohmann::json &j, const std::string &base_dir = "");
  static ServiceConfig load_file(const std::string &path);
  // INAUT_LISTEN (host:port), INAUT_KB_PATH, INAUT_DOC_PATH, INAUT_WEIGHTS_PATH,
  // INAUT_STATE_DIR, INAUT_AUTO_MERGE_THRESHOLD, INAUT_MODERATOR_TOKEN.
  void apply_env();
  void validate() const;  // ConfigError
};

enum class Status { kPending, kMerged, kRejected };
std::string to_string(Status s);

struct Contribution {
  std::string id;
  std::string author;
  int trust_level = 0;
  std::string segment;
  std::optional<std::string> target;
  Status status = Status::kPending;
  std::string submitted_at;
  bool retroactive = false;
  std::optional<uint64_t> snapshot;  // version produced by the merge
  std::string reason;                // rejection reason
  std::vector<std::string> deltas;   // canonical forms recorded at merge

  nlohmann::json to_json() const;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

class Service {
 public:
  explicit Service(ServiceConfig config);
  // Replays the contribution log over the latest snapshot when state_dir
  // is set.
  Service(ServiceConfig config, std::shared_ptr<const kb::KnowledgeBase> kb,
          std::shared_ptr<const doc::DocTree> doc);

  Response validate(const std::string &body) const;
  Response contribute(const std::string &body);
  Response queue(const std::string &token) const;
  Response decide(const std::string &id, const std::string &body, const std::string &token);
  Response zone_query(const std::string &body) const;
  Response generate(const std::string &body) const;
  Response kb_snapshot() const;
  Response health() const;

  std::shared_ptr<const engine::Engine> snapshot() const;
  uint64_t version() const;
  std::optional<Contribution> contribution(const std::string &id) const;
  const ServiceConfig &config() const { return config_; }

  // Test hook: runs before each merge commit attempt.
  void set_before_commit(std::function<void()> hook) { before_commit_ = std::move(hook); }

 private:
  struct MergeResult {
    int status = 200;
    nlohmann::json error;
    std::vector<std::string> regenerated;
  };
  MergeResult merge(Contribution &c);
  void log(const nlohmann::json &record);
  void write_snapshot(uint64_t version, const kb::KnowledgeBase &kb);
  void replay();
  bool is_moderator(const std::string &token) const;

  ServiceConfig config_;
  nlg::WeightConfig weights_;
  grammar::ClosedLists lists_;
  std::shared_ptr<const doc::DocTree> doc_;

  mutable std::mutex snapshot_mu_;
  std::shared_ptr<const engine::Engine> engine_;
  uint64_t version_ = 0;

  std::mutex merge_mu_;  // single writer
  std::mutex decide_mu_;
  mutable std::mutex contrib_mu_;
  std::map<std::string, Contribution> contributions_;
  uint64_t next_id_ = 1;
  int merges_since_snapshot_ = 0;

  std::mutex log_mu_;
  std::ofstream log_;
  std::function<void()> before_commit_;
};

class HttpServer {
 public:
  explicit HttpServer(Service &service);
  ~HttpServer();
  // Port 0 picks a free port. Returns the bound port, -1 on failure.
  int bind(const std::string &host, int port);
  bool listen();  // blocks until stop()
  void stop();

 private:
  Service &service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace inaut::service

#endif  // INAUT_SERVICE_HPP_
