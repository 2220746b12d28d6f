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


// One immutable KB snapshot plus a document tree, with everything needed
// to generate leaves, whole volumes and zone-query answers.
#ifndef INAUT_ENGINE_HPP_
#define INAUT_ENGINE_HPP_

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inaut/doc.hpp"
#include "inaut/geo.hpp"
#include "inaut/grammar.hpp"
#include "inaut/guiding_path.hpp"
#include "inaut/kb.hpp"
#include "inaut/kb_graph.hpp"
#include "inaut/litinaut.hpp"
#include "inaut/nlg.hpp"
#include "json.hpp"

namespace inaut::engine {

// Situation of the navigator; absent fields do not filter.
struct QueryContext {
  std::optional<double> hour;     // 0-24, against valid_from / valid_to
  std::optional<double> draught;  // metres, against min_depth

  static QueryContext from_json(const nlohmann::json &j);  // InvalidQuery
};

// Whether a relation's condition attributes hold in `ctx`.
bool conditions_hold(const kb::RelationInstance &ri, const QueryContext &ctx);

// `g` without the relations rejected by `keep`.
kb::KbGraph filter_relations(const kb::KbGraph &g,
                             const std::function<bool(const std::string &)> &keep);

struct LeafText {
  std::string leaf;
  std::string title;
  std::string leaf_type;
  nlg::GenerationPlan plan;
  std::vector<std::string> inaut;
  std::string litinaut;
};

struct ZoneSection {
  std::string tag;
  std::string litinaut;
  nlohmann::json entity_links;
};

struct ZoneQuery {
  geo::GeoPolygon polygon;
  std::set<std::string> filters;
  QueryContext context;

  static ZoneQuery from_json(const nlohmann::json &j);  // InvalidQuery
};

enum class Format { kText, kHtml, kJsonPlan };
Format parse_format(const std::string &s);  // ConfigError

class Engine {
 public:
  Engine(std::shared_ptr<const kb::KnowledgeBase> kb, std::shared_ptr<const doc::DocTree> doc,
         nlg::WeightConfig weights = nlg::WeightConfig::defaults(),
         grammar::ClosedLists lists = grammar::ClosedLists::defaults());

  const kb::KnowledgeBase &kb() const { return *kb_; }
  std::shared_ptr<const kb::KnowledgeBase> kb_ptr() const { return kb_; }
  const doc::DocTree *doc() const { return doc_.get(); }
  std::shared_ptr<const doc::DocTree> doc_ptr() const { return doc_; }
  const grammar::Lexicon &lexicon() const { return *lexicon_; }
  const geo::AreaGraph &areas() const { return areas_; }
  const geo::GuidingPath &path() const { return path_; }
  const nlg::WeightConfig &weights() const { return weights_; }
  const kb::KbGraph &graph() const { return graph_; }

  // Content determination for a leaf; cached. NoGeoArea, NotFound.
  kb::KbGraph kappa(const std::string &leaf) const;
  // Cached per leaf.
  LeafText generate_leaf(const std::string &leaf) const;
  std::string generate_document(Format format) const;
  std::vector<ZoneSection> zone_query(const ZoneQuery &q) const;
  // Known section tags: rule tags, leaf types and the default.
  std::set<std::string> known_tags() const;
  // Leaves whose selected subgraph contains one of `instances`.
  std::vector<std::string> leaves_mentioning(const std::set<std::string> &instances) const;

 private:
  nlg::StartContext start_context(const std::string &leaf) const;

  std::shared_ptr<const kb::KnowledgeBase> kb_;
  std::shared_ptr<const doc::DocTree> doc_;
  nlg::WeightConfig weights_;
  std::unique_ptr<grammar::Lexicon> lexicon_;
  geo::AreaGraph areas_;
  geo::GuidingPath path_;
  kb::KbGraph graph_;

  mutable std::mutex mu_;
  mutable std::map<std::string, kb::KbGraph> kappa_cache_;
  mutable std::map<std::string, LeafText> leaf_cache_;
};

}  // namespace inaut::engine

#endif  // INAUT_ENGINE_HPP_
