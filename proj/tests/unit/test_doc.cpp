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


#include "doctest.h"
#include "fixtures.hpp"
#include "inaut/doc.hpp"
#include "inaut/errors.hpp"

using namespace inaut;
using namespace inaut::doc;
using nlohmann::json;

namespace {

json node(const std::string &id, json children = json::array()) {
  return {{"id", id}, {"title", id}, {"children", children}};
}

json wrap(const json &root) { return {{"schema_version", 1}, {"root", root}}; }

}  // namespace

TEST_CASE("fixture document tree") {
  const DocTree &doc = testing::banyuls_doc();
  CHECK(doc.root() == "D2.1");
  const DocNode &sec = doc.node("2.2");
  CHECK(sec.children == std::vector<std::string>{"2.2.1", "2.2.2", "2.2.3", "2.2.4", "2.2.5"});
  CHECK(doc.node("2.2.4").title == "Port de Banyuls-sur-Mer");
  CHECK(doc.node("2.2.4").geo_link == "zone-2.2.4");
  const DocNode &leaf = doc.node("2.2.4.1");
  CHECK(leaf.kappa);
  CHECK(leaf.leaf_type == "Généralités");
  CHECK(doc.effective_geo_node("2.2.4.1") == "2.2.4");
  CHECK(doc.kappa_leaves() == std::vector<std::string>{"2.2.3.1", "2.2.4.1"});
  CHECK(doc.meta().extremities.first != doc.meta().extremities.second);
}

TEST_CASE("levels increase by one along every edge") {
  const DocTree &doc = testing::banyuls_doc();
  for (const auto &[id, n] : doc.nodes()) {
    for (const auto &c : n.children) CHECK(doc.node(c).level == n.level + 1);
    if (n.geo_link) CHECK(doc.areas().count(*n.geo_link) == 1);
  }
}

TEST_CASE("pre-order is stable across persistence") {
  const DocTree &doc = testing::banyuls_doc();
  const DocTree back = load_doc_tree(persist_doc(doc));
  CHECK(back == doc);
  CHECK(back.preorder() == doc.preorder());
  CHECK(doc.preorder().front() == "D2.1");
  const auto order = doc.preorder();
  CHECK(std::find(order.begin(), order.end(), "2.2.3.1") < std::find(order.begin(), order.end(), "2.2.4"));
}

TEST_CASE("single root document") {
  const DocTree doc = load_doc_tree(wrap(node("V")).dump());
  CHECK(doc.nodes().size() == 1);
  CHECK(doc.is_leaf("V"));
}

TEST_CASE("structural invariants are enforced") {
  json deep = node("5");
  for (int level = 4; level >= 0; --level) deep = node(std::to_string(level), json::array({deep}));
  CHECK_THROWS_AS(load_doc_tree(wrap(deep).dump()), InvariantViolation);

  json deep_ok = node("5");
  deep_ok["kind"] = "paragraph";
  for (int level = 4; level >= 0; --level) deep_ok = node(std::to_string(level), json::array({deep_ok}));
  CHECK(load_doc_tree(wrap(deep_ok).dump()).nodes().size() == 6);

  json kappa_inner = node("V", json::array({node("1")}));
  kappa_inner["kappa"] = true;
  CHECK_THROWS_AS(load_doc_tree(wrap(kappa_inner).dump()), InvariantViolation);

  json dup = node("V", json::array({node("1"), node("1")}));
  CHECK_THROWS_AS(load_doc_tree(wrap(dup).dump()), InvariantViolation);

  json gap = node("V", json::array({node("1")}));
  gap["children"][0]["level"] = 2;
  CHECK_THROWS_AS(load_doc_tree(wrap(gap).dump()), InvariantViolation);
}

TEST_CASE("document parse errors") {
  CHECK_THROWS_AS(load_doc_tree("{\"root\": "), ParseError);
  CHECK_THROWS_AS(load_doc_tree("{}"), ParseError);
  json v = wrap(node("V"));
  v["schema_version"] = 7;
  CHECK_THROWS_AS(load_doc_tree(v.dump()), SchemaVersionMismatch);
  CHECK_THROWS_AS(testing::banyuls_doc().node("9.9"), InvariantViolation);
}
