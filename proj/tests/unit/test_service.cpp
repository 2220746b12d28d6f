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


#include <atomic>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "inaut/errors.hpp"
#include "inaut/service.hpp"

using namespace inaut;
using namespace inaut::service;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kFacts = {
    "Le port est bordé par la côte.",
    "Le port est dominé par l'agglomération.",
    "La plage est bordée par la côte.",
    "La plage est bordée par un rivage.",
    "La côte est dominée par le port.",
    "La côte est bordée par une plage.",
    "Le rivage est dominé par l'agglomération.",
    "Le rivage est bordé par la côte.",
    "L'agglomération est bordée par la côte.",
    "L'agglomération est dominée par le port.",
    "La [baie de Banyuls] est bordée par la côte.",
    "L'[île Grosse] est bordée par une plage.",
    "Le [cap d'Osne] est dominé par le phare.",
    "L'[île Grosse] est dominée par le phare.",
    "Le [cap Réderis] est bordé par la côte.",
};

const char *kBayFact = "La [baie de Banyuls] est limitée au S par le [cap Réderis].";
const char *kToken = "mod-secret";

ServiceConfig base_config() {
  ServiceConfig c;
  c.kb_path = "unused";
  c.auto_merge_threshold = 2;
  c.authors = {{"pilot", 3}, {"harbour", 2}, {"visitor", 0}};
  c.moderators = {{kToken, "alice"}};
  c.merge_retries = 64;
  return c;
}

Service make_service(ServiceConfig c = base_config()) {
  return Service(std::move(c), std::make_shared<kb::KnowledgeBase>(testing::banyuls_kb()),
                 std::make_shared<doc::DocTree>(testing::banyuls_doc()));
}

std::string contribution(const std::string &segment, const std::string &author, bool retroactive = false) {
  return json{{"segment", segment}, {"author", author}, {"retroactive", retroactive}}.dump();
}

std::string bay_query() {
  return json{{"polygon", geo::to_geojson(testing::banyuls_doc().areas().at("zone-2.2.4"))}}.dump();
}

bool zone_mentions(const Service &s, const std::string &needle) {
  const Response r = s.zone_query(bay_query());
  REQUIRE(r.status == 200);
  for (const auto &sec : r.body["sections"]) {
    if (sec["litinaut_text"].get<std::string>().find(needle) != std::string::npos) return true;
  }
  return false;
}

fs::path temp_dir(const std::string &name) {
  fs::path p = fs::temp_directory_path() / ("inaut-test-" + name + "-" + std::to_string(::getpid()));
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_CASE("validate endpoint") {
  Service s = make_service();
  Response ok = s.validate(json{{"segment", "Le port est bordé par la côte."}}.dump());
  CHECK(ok.status == 200);
  CHECK(ok.body["diagnostics"].empty());

  Response bad = s.validate(json{{"segment", "La [baie de Banyulz] est bordée par la côte."}}.dump());
  CHECK(bad.status == 200);
  REQUIRE(!bad.body["diagnostics"].empty());
  CHECK(bad.body.dump().find("baie de Banyuls") != std::string::npos);

  CHECK(s.validate("").status == 400);
  CHECK(s.validate("{not json").status == 400);
  CHECK(s.validate(json{{"text", 1}}.dump()).status == 400);
  CHECK(s.validate(std::string(70 * 1024, ' ')).status == 413);
}

TEST_CASE("trusted contribution merges and is visible") {
  Service s = make_service();
  CHECK_FALSE(zone_mentions(s, "cap Réderis"));
  const uint64_t v0 = s.version();
  Response r = s.contribute(contribution(kBayFact, "pilot"));
  REQUIRE(r.status == 200);
  CHECK(r.body["status"] == "merged");
  CHECK(r.body["snapshot"] == v0 + 1);
  CHECK(s.version() == v0 + 1);
  CHECK(zone_mentions(s, "au S par le [cap Réderis]"));
  const auto c = s.contribution(r.body["contribution_id"]);
  REQUIRE(c);
  CHECK(c->trust_level == 3);
  CHECK(c->deltas.size() == 1);
}

TEST_CASE("untrusted contribution waits for moderation") {
  Service s = make_service();
  const size_t n0 = s.snapshot()->kb().relations().size();
  Response r = s.contribute(contribution(kBayFact, "visitor"));
  REQUIRE(r.status == 200);
  CHECK(r.body["status"] == "pending");
  CHECK_FALSE(r.body.contains("snapshot"));
  CHECK(s.snapshot()->kb().relations().size() == n0);
  CHECK_FALSE(zone_mentions(s, "cap Réderis"));

  CHECK(s.queue("").status == 403);
  CHECK(s.queue("wrong").status == 403);
  Response q = s.queue(kToken);
  REQUIRE(q.status == 200);
  REQUIRE(q.body["pending"].size() == 1);
  const std::string id = q.body["pending"][0]["id"];
  CHECK(id == r.body["contribution_id"]);

  CHECK(s.decide(id, json{{"decision", "approve"}}.dump(), "").status == 403);
  CHECK(s.decide(id, json{{"decision", "maybe"}}.dump(), kToken).status == 400);
  CHECK(s.decide("c-999", json{{"decision", "approve"}}.dump(), kToken).status == 404);

  Response d = s.decide(id, json{{"decision", "approve"}, {"retroactive", true}}.dump(), kToken);
  REQUIRE(d.status == 200);
  CHECK(d.body["status"] == "merged");
  REQUIRE(d.body.contains("regenerated"));
  CHECK(!d.body["regenerated"].empty());
  CHECK(s.snapshot()->kb().relations().size() == n0 + 1);
  CHECK(zone_mentions(s, "au S par le [cap Réderis]"));
  CHECK(s.queue(kToken).body["pending"].empty());

  Response again = s.decide(id, json{{"decision", "reject"}}.dump(), kToken);
  CHECK(again.status == 409);
}

TEST_CASE("rejection leaves the knowledge base unchanged") {
  Service s = make_service();
  const std::string before = s.kb_snapshot().body.dump();
  Response r = s.contribute(contribution(kBayFact, "visitor"));
  REQUIRE(r.status == 200);
  const std::string id = r.body["contribution_id"];
  Response d = s.decide(id, json{{"decision", "reject"}, {"reason", "duplicate"}}.dump(), kToken);
  REQUIRE(d.status == 200);
  CHECK(d.body["status"] == "rejected");
  CHECK(s.kb_snapshot().body.dump() == before);
  CHECK(s.contribution(id)->reason == "duplicate");
  CHECK(s.decide(id, json{{"decision", "approve"}}.dump(), kToken).status == 409);
}

TEST_CASE("contribution request errors") {
  Service s = make_service();
  CHECK(s.contribute("").status == 400);
  CHECK(s.contribute(json{{"segment", "Le port est bordé par la côte."}}.dump()).status == 400);
  CHECK(s.contribute(json{{"segment", 3}, {"author", "pilot"}}.dump()).status == 400);
  Response bad = s.contribute(contribution("Le portt est bordé par la côte.", "pilot"));
  CHECK(bad.status == 422);
  CHECK(!bad.body["diagnostics"].empty());
  CHECK(s.contribute(contribution("", "pilot")).status == 400);
  // Unknown authors default to trust 0.
  CHECK(s.contribute(contribution(kFacts[0], "stranger")).body["status"] == "pending");
}

TEST_CASE("retroactive merge reports regenerated leaves") {
  Service s = make_service();
  Response r = s.contribute(contribution(kBayFact, "harbour", true));
  REQUIRE(r.status == 200);
  REQUIRE(r.body.contains("regenerated"));
  const auto leaves = r.body["regenerated"].get<std::vector<std::string>>();
  CHECK(std::find(leaves.begin(), leaves.end(), "2.2.4.1") != leaves.end());
  Response plain = s.contribute(contribution(kFacts[0], "harbour"));
  CHECK_FALSE(plain.body.contains("regenerated"));
}

TEST_CASE("snapshots are isolated from later merges") {
  Service s = make_service();
  const auto old = s.snapshot();
  const size_t n0 = old->kb().relations().size();
  const std::string text0 = old->generate_leaf("2.2.4.1").litinaut;
  REQUIRE(s.contribute(contribution(kBayFact, "pilot")).status == 200);
  CHECK(old->kb().relations().size() == n0);
  CHECK(old->generate_leaf("2.2.4.1").litinaut == text0);
  CHECK(s.snapshot()->generate_leaf("2.2.4.1").litinaut != text0);
}

TEST_CASE("contended commit is retried then reported as conflict") {
  ServiceConfig cfg = base_config();
  cfg.merge_retries = 2;
  Service s = make_service(cfg);
  size_t next = 0;
  bool inside = false;
  s.set_before_commit([&] {
    if (inside || next >= kFacts.size()) return;
    inside = true;
    Response r = s.contribute(contribution(kFacts[next++], "pilot"));
    CHECK(r.status == 200);
    inside = false;
  });
  const uint64_t v0 = s.version();
  Response r = s.contribute(contribution(kBayFact, "pilot"));
  CHECK(r.status == 409);
  CHECK(r.body["status"] == "pending");
  CHECK(s.version() == v0 + 2);
  CHECK_FALSE(zone_mentions(s, "cap Réderis"));
}

TEST_CASE("concurrent merges never lose a fact") {
  Service s = make_service();
  const size_t n0 = s.snapshot()->kb().relations().size();
  std::atomic<size_t> next{0};
  std::atomic<int> merged{0};
  std::atomic<int> failures{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&] {
      for (size_t i = next++; i < kFacts.size(); i = next++) {
        Response r = s.contribute(contribution(kFacts[i], "pilot"));
        if (r.status == 200 && r.body["status"] == "merged") {
          ++merged;
        } else {
          ++failures;
        }
      }
    });
  }
  for (auto &t : pool) t.join();
  CHECK(failures == 0);
  CHECK(merged == static_cast<int>(kFacts.size()));
  CHECK(s.version() == kFacts.size());
  CHECK(s.snapshot()->kb().relations().size() == n0 + kFacts.size());
  CHECK(kb::validate_kb(s.snapshot()->kb()).empty());
}

TEST_CASE("stored segments re-derive their recorded deltas") {
  Service s = make_service();
  const auto base = s.snapshot();
  Response r = s.contribute(contribution(std::string(kFacts[0]) + " " + kFacts[1], "pilot"));
  REQUIRE(r.status == 200);
  const auto c = s.contribution(r.body["contribution_id"]);
  REQUIRE(c);
  std::vector<std::string> forms;
  for (const auto &d : grammar::semantify_segment(c->segment, base->lexicon())) {
    forms.push_back(grammar::canonical_form(d));
  }
  CHECK(forms == c->deltas);
  CHECK(forms.size() == 2);
}

TEST_CASE("state survives a restart") {
  const fs::path dir = temp_dir("state");
  ServiceConfig cfg = base_config();
  cfg.state_dir = dir.string();
  cfg.snapshot_every = 2;
  std::string pending_id;
  std::string kb_after;
  {
    Service s = make_service(cfg);
    for (size_t i = 0; i < 3; ++i) REQUIRE(s.contribute(contribution(kFacts[i], "pilot")).status == 200);
    pending_id = s.contribute(contribution(kBayFact, "visitor")).body["contribution_id"];
    kb_after = s.kb_snapshot().body.dump();
  }
  Service s = make_service(cfg);
  CHECK(s.version() == 3);
  CHECK(s.kb_snapshot().body.dump() == kb_after);
  REQUIRE(s.contribution(pending_id));
  CHECK(s.contribution(pending_id)->status == Status::kPending);
  Response d = s.decide(pending_id, json{{"decision", "approve"}}.dump(), kToken);
  CHECK(d.status == 200);
  CHECK(zone_mentions(s, "cap Réderis"));
  Response fresh = s.contribute(contribution(kFacts[5], "pilot"));
  CHECK(fresh.body["contribution_id"] != pending_id);
  fs::remove_all(dir);
}

TEST_CASE("generate, snapshot and health") {
  Service s = make_service();
  CHECK(s.generate(json{{"volume", "nope"}}.dump()).status == 404);
  const std::string volume = s.snapshot()->doc()->meta().id;
  Response text = s.generate(json{{"volume", volume}, {"format", "text"}}.dump());
  REQUIRE(text.status == 200);
  CHECK(text.body["document"].get<std::string>().find(testing::kGoldenParagraph) != std::string::npos);
  Response plan = s.generate(json{{"volume", volume}, {"format", "json-plan"}}.dump());
  CHECK(plan.status == 200);
  CHECK(s.generate(json{{"volume", volume}, {"format", "pdf"}}.dump()).status == 400);
  Response h = s.health();
  CHECK(h.status == 200);
  CHECK(h.body["status"] == "ok");
  CHECK(h.body["instances"] == testing::banyuls_kb().instances().size());
  CHECK(s.kb_snapshot().status == 200);
}

TEST_CASE("zone query errors map to 400") {
  Service s = make_service();
  CHECK(s.zone_query(json{{"filters", json::array()}}.dump()).status == 400);
  json q = json::parse(bay_query());
  q["filters"] = {"NoSuchFilter"};
  CHECK(s.zone_query(q.dump()).status == 400);
  CHECK(s.zone_query("[]").status == 400);
}

TEST_CASE("service configuration") {
  ServiceConfig c = base_config();
  CHECK_NOTHROW(c.validate());
  c.auto_merge_threshold = 5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base_config();
  c.authors["x"] = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = base_config();
  c.kb_path.clear();
  CHECK_THROWS_AS(c.validate(), ConfigError);

  ServiceConfig j = ServiceConfig::from_json({{"kb_path", "kb.json"}, {"auto_merge_threshold", 1}}, "/srv/data");
  CHECK(fs::path(j.kb_path) == fs::path("/srv/data/kb.json"));
  CHECK(j.auto_merge_threshold == 1);

  ::setenv("INAUT_LISTEN", "0.0.0.0:9123", 1);
  ::setenv("INAUT_AUTO_MERGE_THRESHOLD", "3", 1);
  ServiceConfig e = base_config();
  e.apply_env();
  CHECK(e.host == "0.0.0.0");
  CHECK(e.port == 9123);
  CHECK(e.auto_merge_threshold == 3);
  ::setenv("INAUT_AUTO_MERGE_THRESHOLD", "three", 1);
  CHECK_THROWS_AS(e.apply_env(), ConfigError);
  ::unsetenv("INAUT_LISTEN");
  ::unsetenv("INAUT_AUTO_MERGE_THRESHOLD");
}

TEST_CASE("HTTP contract") {
  Service s = make_service();
  HttpServer server(s);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen(); });
  httplib::Client cli("127.0.0.1", port);
  cli.set_connection_timeout(5);
  for (int i = 0; i < 100 && !cli.Get("/healthz"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(10));

  auto health = cli.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["status"] == "ok");

  auto v = cli.Post("/validate", json{{"segment", "Le portt est bordé."}}.dump(), "application/json");
  REQUIRE(v);
  CHECK(v->status == 200);
  CHECK(!json::parse(v->body)["diagnostics"].empty());

  auto big = cli.Post("/validate", std::string(70 * 1024, 'x'), "application/json");
  REQUIRE(big);
  CHECK(big->status == 413);

  auto pending = cli.Post("/contributions", contribution(kBayFact, "visitor"), "application/json");
  REQUIRE(pending);
  CHECK(pending->status == 200);
  const std::string id = json::parse(pending->body)["contribution_id"];
  auto zone = cli.Post("/zone-query", bay_query(), "application/json");
  REQUIRE(zone);
  CHECK(zone->body.find("cap Réderis") == std::string::npos);

  CHECK(cli.Get("/moderation/queue")->status == 403);
  httplib::Headers auth = {{"Authorization", std::string("Bearer ") + kToken}};
  auto queue = cli.Get("/moderation/queue", auth);
  REQUIRE(queue);
  CHECK(queue->status == 200);
  CHECK(json::parse(queue->body)["pending"].size() == 1);

  auto decision = cli.Post("/moderation/" + id + "/decision", auth, json{{"decision", "approve"}}.dump(),
                           "application/json");
  REQUIRE(decision);
  CHECK(decision->status == 200);
  zone = cli.Post("/zone-query", bay_query(), "application/json");
  REQUIRE(zone);
  CHECK(zone->status == 200);
  CHECK(zone->body.find("cap Réderis") != std::string::npos);

  auto merged = cli.Post("/contributions", contribution(kFacts[0], "pilot"), "application/json");
  REQUIRE(merged);
  CHECK(json::parse(merged->body)["status"] == "merged");

  auto missing = cli.Post("/generate", json{{"volume", "nope"}}.dump(), "application/json");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto snap = cli.Get("/kb/snapshot");
  REQUIRE(snap);
  CHECK(snap->status == 200);

  server.stop();
  loop.join();
}
