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


#include <chrono>

#include "doctest.h"
#include "fixtures.hpp"
#include "inaut/engine.hpp"
#include "inaut/errors.hpp"

using namespace inaut;
using namespace inaut::engine;
using nlohmann::json;

namespace {

std::shared_ptr<const kb::KnowledgeBase> fixture_kb() {
  return std::make_shared<kb::KnowledgeBase>(testing::banyuls_kb());
}

std::shared_ptr<const doc::DocTree> fixture_doc() {
  return std::make_shared<doc::DocTree>(testing::banyuls_doc());
}

json rect(double x0, double y0, double x1, double y1) {
  return geo::to_geojson(geo::GeoPolygon::Rectangle(x0, y0, x1, y1));
}

json bay_query() { return {{"polygon", geo::to_geojson(testing::banyuls_doc().areas().at("zone-2.2.4"))}}; }

}  // namespace

TEST_CASE("golden leaf paragraph") {
  const auto t0 = std::chrono::steady_clock::now();
  const Engine e(fixture_kb(), fixture_doc());
  const LeafText t = e.generate_leaf("2.2.4.1");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(t.litinaut == testing::kGoldenParagraph);
  CHECK(t.leaf_type == "Généralités");
  CHECK(t.inaut.size() == 8);
  CHECK(secs < 1.0);
}

TEST_CASE("kappa is cached and deterministic") {
  const Engine e(fixture_kb(), fixture_doc());
  const kb::KbGraph a = e.kappa("2.2.4.1");
  CHECK(e.kappa("2.2.4.1") == a);
  CHECK(a.has_node(kb::instance_node("baie-banyuls")));
  const Engine other(fixture_kb(), fixture_doc());
  CHECK(other.kappa("2.2.4.1") == a);
  CHECK_THROWS(e.kappa("2.2"));
  CHECK(e.kappa("2.2.3.1").has_node(kb::instance_node("cap-rederis")));
}

TEST_CASE("leaf over empty sea") {
  json j = json::parse(doc::persist_doc(testing::banyuls_doc()));
  j["areas"]["features"][0]["geometry"] = rect(10, 10, 10.1, 10.1);
  j["areas"]["features"][0]["id"] = "open-sea";
  j["root"]["children"][0]["children"][0]["children"][0]["geo_link"] = "open-sea";
  j["root"]["children"][0]["children"][0]["children"][0]["children"] =
      json::array({{{"id", "2.2.1.1"}, {"title", "Généralités"}, {"kappa", true}}});
  const Engine e(fixture_kb(), std::make_shared<doc::DocTree>(doc::load_doc_tree(j.dump())));
  CHECK(e.kappa("2.2.1.1").empty());
  CHECK(e.generate_leaf("2.2.1.1").litinaut.empty());
}

TEST_CASE("documents are deterministic in every format") {
  const Engine e(fixture_kb(), fixture_doc());
  const Engine f(fixture_kb(), fixture_doc());
  for (Format fmt : {Format::kText, Format::kHtml, Format::kJsonPlan}) {
    CHECK(e.generate_document(fmt) == f.generate_document(fmt));
    CHECK(e.generate_document(fmt) == e.generate_document(fmt));
  }
  const std::string text = e.generate_document(Format::kText);
  CHECK(text.find(testing::kGoldenParagraph) != std::string::npos);
  CHECK(text.rfind("Instructions nautiques D2.1", 0) == 0);
  CHECK(text.find("2.2.4.1 Généralités") < text.find(testing::kGoldenParagraph));
  CHECK(e.generate_document(Format::kHtml).find("<a class=\"entity\" href=\"#baie-banyuls\"") != std::string::npos);
  const json plan = json::parse(e.generate_document(Format::kJsonPlan));
  CHECK(plan["volume"] == "D2.1");
  CHECK(plan["leaves"].size() == 2);
  CHECK(parse_format("html") == Format::kHtml);
  CHECK_THROWS_AS(parse_format("pdf"), ConfigError);
}

TEST_CASE("zone queries") {
  const Engine e(fixture_kb(), fixture_doc());
  const auto sections = e.zone_query(ZoneQuery::from_json(bay_query()));
  REQUIRE(sections.size() == 1);
  CHECK(sections[0].tag == "Généralités");
  CHECK(sections[0].litinaut.find("La [baie de Banyuls] est limitée au NW par le [cap d'Osne] et à l'Est par l'[île Grosse].") !=
        std::string::npos);
  CHECK(sections[0].entity_links.size() >= 5);

  json filtered = bay_query();
  filtered["filters"] = {"Mouillages"};
  CHECK(e.zone_query(ZoneQuery::from_json(filtered)).empty());
  CHECK(e.zone_query(ZoneQuery::from_json({{"polygon", rect(-30, 30, -29, 31)}})).empty());

  json unknown = bay_query();
  unknown["filters"] = {"Pêche"};
  CHECK_THROWS_AS(e.zone_query(ZoneQuery::from_json(unknown)), InvalidQuery);
  CHECK_THROWS_AS(ZoneQuery::from_json({{"filters", json::array()}}), InvalidQuery);
  CHECK_THROWS_AS(ZoneQuery::from_json({{"polygon", {{"type", "Polygon"}, {"coordinates", {{{0, 0}, {1, 1}, {0, 0}}}}}}}),
                  InvalidQuery);
  CHECK_THROWS_AS(ZoneQuery::from_json({{"polygon", rect(0, 0, 1, 1)}, {"context", {{"hour", 30}}}}), InvalidQuery);
}

TEST_CASE("context conditions") {
  kb::RelationInstance ri{"r", "est_autorisé", {}, {{"valid_from", "8"}, {"valid_to", "20"}, {"min_depth", "3"}}};
  CHECK(conditions_hold(ri, {}));
  CHECK(conditions_hold(ri, {10.0, std::nullopt}));
  CHECK_FALSE(conditions_hold(ri, {20.0, std::nullopt}));
  CHECK_FALSE(conditions_hold(ri, {7.5, std::nullopt}));
  CHECK(conditions_hold(ri, {std::nullopt, 3.0}));
  CHECK_FALSE(conditions_hold(ri, {std::nullopt, 3.5}));
  kb::RelationInstance night{"n", "est_autorisé", {}, {{"valid_from", "22"}, {"valid_to", "6"}}};
  CHECK(conditions_hold(night, {23.0, std::nullopt}));
  CHECK(conditions_hold(night, {2.0, std::nullopt}));
  CHECK_FALSE(conditions_hold(night, {12.0, std::nullopt}));

  kb::KnowledgeBase kb = testing::banyuls_kb();
  kb = kb::add_relation_instance(kb, {"ri-m", "est_autorisé", {{"activité", "mouillage"}, {"lieu", "anse-fontaule"}},
                                      {{"valid_from", "8"}, {"valid_to", "20"}, {"min_depth", "3"}}});
  const Engine e(std::make_shared<kb::KnowledgeBase>(kb), fixture_doc());
  json q = bay_query();
  q["filters"] = {"Mouillages"};
  const auto sections = e.zone_query(ZoneQuery::from_json(q));
  REQUIRE(sections.size() == 1);
  CHECK(sections[0].tag == "Mouillages");
  const std::string tail = "À l'[anse du Fontaulé].";
  REQUIRE(sections[0].litinaut.size() > tail.size());
  CHECK(sections[0].litinaut.substr(sections[0].litinaut.size() - tail.size()) == tail);
  q["context"] = {{"hour", 10}, {"draught", 2}};
  CHECK(e.zone_query(ZoneQuery::from_json(q)).size() == 1);
  q["context"] = {{"hour", 21}};
  CHECK(e.zone_query(ZoneQuery::from_json(q)).empty());
  q["context"] = {{"draught", 4.5}};
  CHECK(e.zone_query(ZoneQuery::from_json(q)).empty());
}

TEST_CASE("leaves mentioning instances") {
  const Engine e(fixture_kb(), fixture_doc());
  CHECK(e.leaves_mentioning({"plage"}) == std::vector<std::string>{"2.2.4.1"});
  CHECK(e.leaves_mentioning({"cap-rederis"}) == std::vector<std::string>{"2.2.3.1"});
  CHECK(e.leaves_mentioning({"nobody"}).empty());
  CHECK(e.known_tags().count("Mouillages") == 1);
}
