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


#include "inaut/service.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>

#include "httplib.h"

namespace inaut::service {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string resolve(const std::string &base, const std::string &p) {
  if (p.empty() || base.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).string();
}

void split_listen(const std::string &listen, std::string &host, int &port) {
  const size_t colon = listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError("listen must be host:port, got '" + listen + "'");
  host = listen.substr(0, colon);
  try {
    port = std::stoi(listen.substr(colon + 1));
  } catch (const std::exception &) {
    throw ConfigError("listen must be host:port, got '" + listen + "'");
  }
}

}  // namespace

ServiceConfig ServiceConfig::from_json(const json &j, const std::string &base_dir) {
  if (!j.is_object()) throw ConfigError("service config: expected an object");
  ServiceConfig c;
  try {
    if (j.contains("listen")) split_listen(j.at("listen").get<std::string>(), c.host, c.port);
    c.kb_path = resolve(base_dir, j.value("kb_path", ""));
    c.doc_path = resolve(base_dir, j.value("doc_path", ""));
    c.weights_path = resolve(base_dir, j.value("weights_path", ""));
    c.closed_lists_path = resolve(base_dir, j.value("closed_lists_path", ""));
    c.state_dir = resolve(base_dir, j.value("state_dir", ""));
    c.auto_merge_threshold = j.value("auto_merge_threshold", c.auto_merge_threshold);
    c.max_body_bytes = j.value("max_body_bytes", c.max_body_bytes);
    c.snapshot_every = j.value("snapshot_every", c.snapshot_every);
    c.merge_retries = j.value("merge_retries", c.merge_retries);
    if (j.contains("authors")) c.authors = j.at("authors").get<std::map<std::string, int>>();
    if (j.contains("moderators")) {
      c.moderators = j.at("moderators").get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("service config: ") + e.what());
  }
  return c;
}

ServiceConfig ServiceConfig::load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file not found: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("service config: " + std::string(e.what()));
  }
  return from_json(j, fs::path(path).parent_path().string());
}

void ServiceConfig::apply_env() {
  auto env = [](const char *name) -> std::optional<std::string> {
    const char *v = std::getenv(name);
    if (v == nullptr || *v == '\0') return std::nullopt;
    return std::string(v);
  };
  if (auto v = env("INAUT_LISTEN")) split_listen(*v, host, port);
  if (auto v = env("INAUT_KB_PATH")) kb_path = *v;
  if (auto v = env("INAUT_DOC_PATH")) doc_path = *v;
  if (auto v = env("INAUT_WEIGHTS_PATH")) weights_path = *v;
  if (auto v = env("INAUT_STATE_DIR")) state_dir = *v;
  if (auto v = env("INAUT_AUTO_MERGE_THRESHOLD")) {
    try {
      auto_merge_threshold = std::stoi(*v);
    } catch (const std::exception &) {
      throw ConfigError("INAUT_AUTO_MERGE_THRESHOLD must be an integer");
    }
  }
  if (auto v = env("INAUT_MODERATOR_TOKEN")) moderators[*v] = "moderator";
}

void ServiceConfig::validate() const {
  if (kb_path.empty()) throw ConfigError("service config: kb_path is required");
  if (port < 0 || port > 65535) throw ConfigError("service config: port out of range");
  if (auto_merge_threshold < 0 || auto_merge_threshold > 4) {
    throw ConfigError("service config: auto_merge_threshold must lie in 0-4");
  }
  for (const auto &[author, trust] : authors) {
    if (trust < 0 || trust > 3) throw ConfigError("service config: trust of '" + author + "' must lie in 0-3");
  }
  if (max_body_bytes == 0) throw ConfigError("service config: max_body_bytes must be positive");
  if (merge_retries < 1) throw ConfigError("service config: merge_retries must be >= 1");
}

// ---------------------------------------------------------------------------
// Contributions

std::string to_string(Status s) {
  switch (s) {
    case Status::kPending: return "pending";
    case Status::kMerged: return "merged";
    case Status::kRejected: return "rejected";
  }
  return "pending";
}

namespace {

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Response error(int status, const std::string &message) {
  return {status, {{"error", message}}};
}

std::optional<json> parse_body(const std::string &body, Response &err) {
  try {
    json j = json::parse(body);
    if (!j.is_object()) {
      err = error(400, "body must be a JSON object");
      return std::nullopt;
    }
    return j;
  } catch (const json::parse_error &e) {
    err = error(400, std::string("malformed JSON: ") + e.what());
    return std::nullopt;
  }
}

json diagnostics_json(const std::vector<grammar::Diagnostic> &diags) {
  json out = json::array();
  for (const auto &d : diags) out.push_back(grammar::to_json(d));
  return out;
}

}  // namespace

json Contribution::to_json() const {
  json j = {{"id", id},
            {"author", author},
            {"trust_level", trust_level},
            {"segment", segment},
            {"status", to_string(status)},
            {"submitted_at", submitted_at},
            {"retroactive", retroactive}};
  j["target"] = target ? json(*target) : json(nullptr);
  if (snapshot) j["snapshot"] = *snapshot;
  if (!reason.empty()) j["reason"] = reason;
  if (!deltas.empty()) j["deltas"] = deltas;
  return j;
}

// ---------------------------------------------------------------------------
// Service

namespace {

std::shared_ptr<const kb::KnowledgeBase> load_kb(const ServiceConfig &c) {
  c.validate();
  return std::make_shared<const kb::KnowledgeBase>(kb::load_file(c.kb_path));
}

std::shared_ptr<const doc::DocTree> load_doc(const ServiceConfig &c) {
  if (c.doc_path.empty()) return nullptr;
  return std::make_shared<const doc::DocTree>(doc::load_doc_file(c.doc_path));
}

std::optional<uint64_t> snapshot_version(const fs::path &p) {
  const std::string name = p.filename().string();
  if (name.rfind("kb-", 0) != 0 || p.extension() != ".json") return std::nullopt;
  try {
    return std::stoull(name.substr(3, name.size() - 8));
  } catch (const std::exception &) {
    return std::nullopt;
  }
}

}  // namespace

Service::Service(ServiceConfig config) : Service(config, load_kb(config), load_doc(config)) {}

Service::Service(ServiceConfig config, std::shared_ptr<const kb::KnowledgeBase> kb,
                 std::shared_ptr<const doc::DocTree> doc)
    : config_(std::move(config)), doc_(std::move(doc)) {
  weights_ = config_.weights_path.empty() ? nlg::WeightConfig::defaults()
                                          : nlg::WeightConfig::load_file(config_.weights_path);
  lists_ = grammar::ClosedLists::defaults();
  if (!config_.closed_lists_path.empty()) {
    std::ifstream in(config_.closed_lists_path);
    if (!in) throw ConfigError("file not found: " + config_.closed_lists_path);
    try {
      lists_ = grammar::ClosedLists::from_json(json::parse(in));
    } catch (const json::exception &e) {
      throw ConfigError("closed lists: " + std::string(e.what()));
    }
  }

  if (!config_.state_dir.empty()) {
    fs::create_directories(fs::path(config_.state_dir) / "snapshots");
    std::optional<uint64_t> latest;
    for (const auto &entry : fs::directory_iterator(fs::path(config_.state_dir) / "snapshots")) {
      const auto v = snapshot_version(entry.path());
      if (v && (!latest || *v > *latest)) latest = v;
    }
    if (latest) {
      kb = std::make_shared<const kb::KnowledgeBase>(kb::load_file(
          (fs::path(config_.state_dir) / "snapshots" / ("kb-" + std::to_string(*latest) + ".json"))
              .string()));
      version_ = *latest;
    }
  }
  engine_ = std::make_shared<const engine::Engine>(kb, doc_, weights_, lists_);
  if (!config_.state_dir.empty()) {
    replay();
    log_.open(fs::path(config_.state_dir) / "contributions.jsonl", std::ios::app);
    if (!log_) throw ConfigError("cannot open contribution log in " + config_.state_dir);
  }
}

std::shared_ptr<const engine::Engine> Service::snapshot() const {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  return engine_;
}

uint64_t Service::version() const {
  std::lock_guard<std::mutex> lock(snapshot_mu_);
  return version_;
}

std::optional<Contribution> Service::contribution(const std::string &id) const {
  std::lock_guard<std::mutex> lock(contrib_mu_);
  auto it = contributions_.find(id);
  if (it == contributions_.end()) return std::nullopt;
  return it->second;
}

void Service::log(const json &record) {
  std::lock_guard<std::mutex> lock(log_mu_);
  if (!log_.is_open()) return;
  log_ << record.dump() << "\n";
  log_.flush();
}

void Service::write_snapshot(uint64_t version, const kb::KnowledgeBase &kb) {
  if (config_.state_dir.empty()) return;
  const fs::path dir = fs::path(config_.state_dir) / "snapshots";
  const fs::path tmp = dir / ("kb-" + std::to_string(version) + ".json.tmp");
  {
    std::ofstream out(tmp);
    out << kb::persist(kb);
  }
  fs::rename(tmp, dir / ("kb-" + std::to_string(version) + ".json"));
}

void Service::replay() {
  std::ifstream in(fs::path(config_.state_dir) / "contributions.jsonl");
  if (!in) return;
  const uint64_t base = version_;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json r;
    try {
      r = json::parse(line);
    } catch (const json::parse_error &) {
      throw ConfigError("contribution log: malformed record at line " + std::to_string(lineno));
    }
    const std::string type = r.value("type", "");
    const std::string id = r.value("id", "");
    if (type == "submitted") {
      Contribution c;
      c.id = id;
      c.author = r.value("author", "");
      c.trust_level = r.value("trust_level", 0);
      c.segment = r.value("segment", "");
      if (r.contains("target") && r["target"].is_string()) c.target = r["target"].get<std::string>();
      c.submitted_at = r.value("submitted_at", "");
      c.retroactive = r.value("retroactive", false);
      contributions_[id] = c;
      if (id.rfind("c-", 0) == 0) {
        next_id_ = std::max<uint64_t>(next_id_, std::stoull(id.substr(2)) + 1);
      }
    } else if (type == "merged") {
      auto it = contributions_.find(id);
      if (it == contributions_.end()) continue;
      const uint64_t v = r.value("version", uint64_t{0});
      it->second.status = Status::kMerged;
      it->second.snapshot = v;
      it->second.deltas = r.value("deltas", std::vector<std::string>{});
      if (v <= base) continue;
      kb::KnowledgeBase next = engine_->kb();
      for (const auto &d : grammar::semantify_segment(it->second.segment, engine_->lexicon())) {
        next = grammar::apply_delta(next, d);
      }
      engine_ = std::make_shared<const engine::Engine>(
          std::make_shared<const kb::KnowledgeBase>(std::move(next)), doc_, weights_, lists_);
      version_ = v;
    } else if (type == "rejected") {
      auto it = contributions_.find(id);
      if (it == contributions_.end()) continue;
      it->second.status = Status::kRejected;
      it->second.reason = r.value("reason", "");
    }
  }
}

bool Service::is_moderator(const std::string &token) const {
  return !token.empty() && config_.moderators.count(token) > 0;
}

Service::MergeResult Service::merge(Contribution &c) {
  MergeResult res;
  for (int attempt = 0; attempt < config_.merge_retries; ++attempt) {
    uint64_t base_version;
    std::shared_ptr<const engine::Engine> base;
    {
      std::lock_guard<std::mutex> lock(snapshot_mu_);
      base = engine_;
      base_version = version_;
    }
    std::vector<grammar::Delta> deltas;
    try {
      deltas = grammar::semantify_segment(c.segment, base->lexicon());
    } catch (const grammar::DiagnosticError &e) {
      res.status = 422;
      res.error = {{"error", "segment no longer validates"},
                   {"diagnostics", json::array({grammar::to_json(e.diagnostic())})}};
      return res;
    }
    kb::KnowledgeBase next = base->kb();
    std::set<std::string> touched;
    std::vector<std::string> forms;
    try {
      for (const auto &d : deltas) {
        next = grammar::apply_delta(next, d);
        forms.push_back(grammar::canonical_form(d));
        for (const auto &[role, m] : d.relation.members) touched.insert(m);
        for (const auto &i : d.derived) {
          touched.insert(i.id);
          if (i.derived_from) touched.insert(i.derived_from->base);
        }
      }
    } catch (const KbConflict &e) {
      res.status = 409;
      res.error = {{"error", e.what()}};
      return res;
    }
    auto engine = std::make_shared<const engine::Engine>(
        std::make_shared<const kb::KnowledgeBase>(std::move(next)), doc_, weights_, lists_);
    if (before_commit_) before_commit_();

    std::lock_guard<std::mutex> writer(merge_mu_);
    uint64_t produced;
    {
      std::lock_guard<std::mutex> lock(snapshot_mu_);
      if (version_ != base_version) continue;
      engine_ = engine;
      produced = ++version_;
    }
    c.status = Status::kMerged;
    c.snapshot = produced;
    c.deltas = forms;
    log({{"type", "merged"}, {"id", c.id}, {"version", produced}, {"deltas", forms}});
    if (++merges_since_snapshot_ >= config_.snapshot_every) {
      merges_since_snapshot_ = 0;
      write_snapshot(produced, engine->kb());
    }
    if (c.retroactive) {
      res.regenerated = engine->leaves_mentioning(touched);
      for (const auto &leaf : res.regenerated) engine->generate_leaf(leaf);
    }
    return res;
  }
  res.status = 409;
  res.error = {{"error", "concurrent merges: retries exhausted"}};
  return res;
}

Response Service::validate(const std::string &body) const {
  if (body.size() > config_.max_body_bytes) return error(413, "body too large");
  Response err;
  auto j = parse_body(body, err);
  if (!j) return err;
  if (!j->contains("segment") || !(*j)["segment"].is_string()) {
    return error(400, "'segment' must be a string");
  }
  const auto engine = snapshot();
  return {200, {{"diagnostics", diagnostics_json(grammar::validate_segment(
                                   (*j)["segment"].get<std::string>(), engine->lexicon()))}}};
}

Response Service::contribute(const std::string &body) {
  if (body.size() > config_.max_body_bytes) return error(413, "body too large");
  Response err;
  auto j = parse_body(body, err);
  if (!j) return err;
  if (!j->contains("segment") || !(*j)["segment"].is_string()) {
    return error(400, "'segment' must be a string");
  }
  if (!j->contains("author") || !(*j)["author"].is_string() ||
      (*j)["author"].get<std::string>().empty()) {
    return error(400, "'author' must be a non-empty string");
  }
  Contribution c;
  c.segment = (*j)["segment"].get<std::string>();
  c.author = (*j)["author"].get<std::string>();
  if (j->contains("target") && (*j)["target"].is_string()) c.target = (*j)["target"].get<std::string>();
  c.retroactive = j->value("retroactive", false);
  auto trust = config_.authors.find(c.author);
  c.trust_level = trust == config_.authors.end() ? 0 : trust->second;

  const auto engine = snapshot();
  const auto diags = grammar::validate_segment(c.segment, engine->lexicon());
  if (!diags.empty()) return {422, {{"error", "invalid INAUT"}, {"diagnostics", diagnostics_json(diags)}}};
  if (grammar::split_sentences(c.segment).empty()) return error(400, "empty segment");

  c.submitted_at = now_utc();
  {
    std::lock_guard<std::mutex> lock(contrib_mu_);
    c.id = "c-" + std::to_string(next_id_++);
  }
  json rec = c.to_json();
  rec["type"] = "submitted";
  log(rec);

  json out = {{"contribution_id", c.id}};
  if (c.trust_level >= config_.auto_merge_threshold) {
    MergeResult m = merge(c);
    if (m.status != 200) {
      std::lock_guard<std::mutex> lock(contrib_mu_);
      contributions_[c.id] = c;
      m.error["contribution_id"] = c.id;
      m.error["status"] = to_string(c.status);
      return {m.status, m.error};
    }
    if (c.retroactive) out["regenerated"] = m.regenerated;
    out["snapshot"] = *c.snapshot;
  }
  out["status"] = to_string(c.status);
  std::lock_guard<std::mutex> lock(contrib_mu_);
  contributions_[c.id] = c;
  return {200, out};
}

Response Service::queue(const std::string &token) const {
  if (!is_moderator(token)) return error(403, "moderator role required");
  const auto engine = snapshot();
  json pending = json::array();
  std::lock_guard<std::mutex> lock(contrib_mu_);
  for (const auto &[id, c] : contributions_) {
    if (c.status != Status::kPending) continue;
    json jc = c.to_json();
    jc["diagnostics"] = diagnostics_json(grammar::validate_segment(c.segment, engine->lexicon()));
    pending.push_back(std::move(jc));
  }
  return {200, {{"pending", pending}}};
}

Response Service::decide(const std::string &id, const std::string &body, const std::string &token) {
  if (body.size() > config_.max_body_bytes) return error(413, "body too large");
  if (!is_moderator(token)) return error(403, "moderator role required");
  Response err;
  auto j = parse_body(body, err);
  if (!j) return err;
  const std::string decision = j->value("decision", "");
  if (decision != "approve" && decision != "reject") {
    return error(400, "'decision' must be approve or reject");
  }
  std::lock_guard<std::mutex> serial(decide_mu_);
  Contribution c;
  {
    std::lock_guard<std::mutex> lock(contrib_mu_);
    auto it = contributions_.find(id);
    if (it == contributions_.end()) return error(404, "unknown contribution '" + id + "'");
    if (it->second.status != Status::kPending) {
      return {409, {{"error", "already decided"}, {"status", to_string(it->second.status)}}};
    }
    c = it->second;
  }
  json out = {{"contribution_id", id}};
  if (decision == "reject") {
    c.status = Status::kRejected;
    c.reason = j->value("reason", "rejected by moderator");
    log({{"type", "rejected"}, {"id", id}, {"reason", c.reason}, {"by", config_.moderators.at(token)}});
  } else {
    c.retroactive = c.retroactive || j->value("retroactive", false);
    MergeResult m = merge(c);
    if (m.status != 200) return {m.status, m.error};
    out["snapshot"] = *c.snapshot;
    if (c.retroactive) out["regenerated"] = m.regenerated;
  }
  out["status"] = to_string(c.status);
  std::lock_guard<std::mutex> lock(contrib_mu_);
  contributions_[id] = c;
  return {200, out};
}

Response Service::zone_query(const std::string &body) const {
  if (body.size() > config_.max_body_bytes) return error(413, "body too large");
  Response err;
  auto j = parse_body(body, err);
  if (!j) return err;
  const auto engine = snapshot();
  try {
    const auto sections = engine->zone_query(engine::ZoneQuery::from_json(*j));
    json out = json::array();
    for (const auto &s : sections) {
      out.push_back({{"tag", s.tag}, {"litinaut_text", s.litinaut}, {"entity_links", s.entity_links}});
    }
    return {200, {{"sections", out}}};
  } catch (const InvalidQuery &e) {
    return error(400, e.what());
  }
}

Response Service::generate(const std::string &body) const {
  if (body.size() > config_.max_body_bytes) return error(413, "body too large");
  Response err;
  auto j = parse_body(body, err);
  if (!j) return err;
  const auto engine = snapshot();
  const std::string volume = j->value("volume", "");
  if (!engine->doc() || engine->doc()->meta().id != volume) {
    return error(404, "unknown volume '" + volume + "'");
  }
  engine::Format format;
  try {
    format = engine::parse_format(j->value("format", "text"));
  } catch (const ConfigError &e) {
    return error(400, e.what());
  }
  return {200, {{"volume", volume},
                {"format", j->value("format", "text")},
                {"document", engine->generate_document(format)}}};
}

Response Service::kb_snapshot() const {
  std::shared_ptr<const engine::Engine> engine;
  uint64_t v;
  {
    std::lock_guard<std::mutex> lock(snapshot_mu_);
    engine = engine_;
    v = version_;
  }
  return {200, {{"version", v}, {"kb", json::parse(kb::persist(engine->kb()))}}};
}

Response Service::health() const {
  const auto engine = snapshot();
  return {200, {{"status", "ok"}, {"version", version()}, {"instances", engine->kb().instances().size()}}};
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

std::string bearer(const httplib::Request &req) {
  const std::string h = req.get_header_value("Authorization");
  const std::string prefix = "Bearer ";
  return h.rfind(prefix, 0) == 0 ? h.substr(prefix.size()) : std::string();
}

void send(httplib::Response &res, const Response &r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json; charset=utf-8");
}

}  // namespace

HttpServer::HttpServer(Service &service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  auto &s = *server_;
  s.set_payload_max_length(service_.config().max_body_bytes);
  s.set_exception_handler([](const httplib::Request &, httplib::Response &res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception &e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error(500, what));
  });
  s.Post("/validate", [this](const httplib::Request &req, httplib::Response &res) {
    send(res, service_.validate(req.body));
  });
  s.Post("/contributions", [this](const httplib::Request &req, httplib::Response &res) {
    send(res, service_.contribute(req.body));
  });
  s.Get("/moderation/queue", [this](const httplib::Request &req, httplib::Response &res) {
    send(res, service_.queue(bearer(req)));
  });
  s.Post(R"(/moderation/([^/]+)/decision)", [this](const httplib::Request &req, httplib::Response &res) {
    send(res, service_.decide(req.matches[1], req.body, bearer(req)));
  });
  s.Post("/zone-query", [this](const httplib::Request &req, httplib::Response &res) {
    send(res, service_.zone_query(req.body));
  });
  s.Post("/generate", [this](const httplib::Request &req, httplib::Response &res) {
    send(res, service_.generate(req.body));
  });
  s.Get("/kb/snapshot", [this](const httplib::Request &, httplib::Response &res) {
    send(res, service_.kb_snapshot());
  });
  s.Get("/healthz", [this](const httplib::Request &, httplib::Response &res) {
    send(res, service_.health());
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string &host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_) server_->stop();
}

}  // namespace inaut::service
