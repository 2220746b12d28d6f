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


#include "inaut/engine.hpp"

#include <sstream>

namespace inaut::engine {

using nlohmann::json;

QueryContext QueryContext::from_json(const json &j) {
  QueryContext c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw InvalidQuery("context must be an object");
  auto num = [&](const char *key) -> std::optional<double> {
    if (!j.contains(key) || j[key].is_null()) return std::nullopt;
    if (!j[key].is_number()) throw InvalidQuery(std::string("context.") + key + " must be a number");
    return j[key].get<double>();
  };
  c.hour = num("hour");
  c.draught = num("draught");
  if (c.hour && (*c.hour < 0 || *c.hour > 24)) throw InvalidQuery("context.hour must lie in [0, 24]");
  return c;
}

bool conditions_hold(const kb::RelationInstance &ri, const QueryContext &ctx) {
  auto num = [&](const char *role) -> std::optional<double> {
    auto it = ri.attributes.find(role);
    if (it == ri.attributes.end()) return std::nullopt;
    try {
      return std::stod(it->second);
    } catch (const std::exception &) {
      return std::nullopt;
    }
  };
  if (ctx.hour) {
    const auto from = num("valid_from"), to = num("valid_to");
    if (from && to) {
      const bool in = *from <= *to ? (*ctx.hour >= *from && *ctx.hour < *to)
                                   : (*ctx.hour >= *from || *ctx.hour < *to);
      if (!in) return false;
    } else if (from && *ctx.hour < *from) {
      return false;
    } else if (to && *ctx.hour >= *to) {
      return false;
    }
  }
  if (ctx.draught) {
    if (const auto depth = num("min_depth"); depth && *ctx.draught > *depth) return false;
  }
  return true;
}

kb::KbGraph filter_relations(const kb::KbGraph &g,
                             const std::function<bool(const std::string &)> &keep) {
  kb::KbGraph out;
  for (const auto &[id, n] : g.nodes()) {
    // Values come back with their surviving edges.
    if (n.kind == kb::NodeKind::kValue) continue;
    if (n.kind == kb::NodeKind::kRelation && !keep(n.ref)) continue;
    out.add_node(n);
  }
  for (const auto &[id, e] : g.edges()) {
    if (!e.relation.empty() && !keep(e.relation)) continue;
    for (const std::string *end : {&e.from, &e.to}) {
      if (!out.has_node(*end)) out.add_node(g.node(*end));
    }
    out.add_edge(e);
  }
  return out;
}

ZoneQuery ZoneQuery::from_json(const json &j) {
  if (!j.is_object() || !j.contains("polygon")) throw InvalidQuery("missing 'polygon'");
  std::optional<geo::GeoPolygon> poly;
  try {
    poly = geo::polygon_from_geojson(j["polygon"], "U");
    if (geo::polygon_area(*poly) <= 0) throw InvalidQuery("polygon has no area");
  } catch (const InvalidQuery &) {
    throw;
  } catch (const std::exception &e) {
    throw InvalidQuery(std::string("invalid polygon: ") + e.what());
  }
  ZoneQuery q{*poly, {}, {}};
  if (j.contains("filters") && !j["filters"].is_null()) {
    if (!j["filters"].is_array()) throw InvalidQuery("filters must be an array of tags");
    for (const auto &f : j["filters"]) {
      if (!f.is_string()) throw InvalidQuery("filters must be an array of tags");
      q.filters.insert(f.get<std::string>());
    }
  }
  if (j.contains("context")) q.context = QueryContext::from_json(j["context"]);
  return q;
}

Format parse_format(const std::string &s) {
  if (s == "text") return Format::kText;
  if (s == "html") return Format::kHtml;
  if (s == "json-plan") return Format::kJsonPlan;
  throw ConfigError("unknown output format '" + s + "' (text, html, json-plan)");
}

Engine::Engine(std::shared_ptr<const kb::KnowledgeBase> kb, std::shared_ptr<const doc::DocTree> doc,
               nlg::WeightConfig weights, grammar::ClosedLists lists)
    : kb_(std::move(kb)), doc_(std::move(doc)), weights_(std::move(weights)) {
  lexicon_ = std::make_unique<grammar::Lexicon>(*kb_, std::move(lists));
  std::map<std::string, geo::GeoPolygon> all = kb_->areas();
  if (doc_) {
    for (const auto &[id, a] : doc_->areas()) all.insert_or_assign(id, a);
  }
  areas_ = geo::build_area_graph(std::move(all));
  if (doc_) {
    try {
      path_ = geo::guiding_path(*doc_, areas_);
    } catch (const NoGeoreferencedNodes &) {
      path_ = {};
    }
  }
  graph_ = kb::build_kb_graph(*kb_);
}

kb::KbGraph Engine::kappa(const std::string &leaf) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = kappa_cache_.find(leaf);
    if (it != kappa_cache_.end()) return it->second;
  }
  if (!doc_ || !doc_->find(leaf)) throw NotFound("unknown section '" + leaf + "'");
  const auto geo_node = doc_->effective_geo_node(leaf);
  if (!geo_node) throw NoGeoArea("section '" + leaf + "' has no geographic area");
  const std::string area = *doc_->node(*geo_node).geo_link;
  kb::KbGraph g = nlg::content_determination(*kb_, graph_, areas_, area);
  std::lock_guard<std::mutex> lock(mu_);
  return kappa_cache_.emplace(leaf, std::move(g)).first->second;
}

nlg::StartContext Engine::start_context(const std::string &leaf) const {
  nlg::StartContext ctx;
  const doc::DocNode &n = doc_->node(leaf);
  const doc::DocNode &parent = n.parent ? doc_->node(*n.parent) : n;
  ctx.parent_title = parent.title;
  if (const auto g = doc_->effective_geo_node(parent.id)) {
    const std::string &area = *doc_->node(*g).geo_link;
    if (areas_.contains(area)) ctx.parent_area = areas_.area_of(area);
  }
  return ctx;
}

LeafText Engine::generate_leaf(const std::string &leaf) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = leaf_cache_.find(leaf);
    if (it != leaf_cache_.end()) return it->second;
  }
  const kb::KbGraph selected = kappa(leaf);
  const doc::DocNode &node = doc_->node(leaf);
  LeafText out;
  out.leaf = leaf;
  out.title = node.title;
  out.leaf_type = node.leaf_type.value_or(doc::kDefaultLeafType);
  nlg::GenerationPlan all = nlg::make_plan(*kb_, selected, path_, start_context(leaf), weights_);
  out.plan.leaf = leaf;
  out.plan.leaf_type = out.leaf_type;
  for (auto &c : all.components) {
    if (c.tag == out.leaf_type) out.plan.components.push_back(std::move(c));
  }
  out.inaut = out.plan.inaut_sentences();
  out.litinaut = lit::to_litinaut(out.plan, weights_);
  std::lock_guard<std::mutex> lock(mu_);
  return leaf_cache_.emplace(leaf, std::move(out)).first->second;
}

std::string Engine::generate_document(Format format) const {
  if (!doc_) throw NotFound("no document tree loaded");
  std::vector<std::string> kappa_leaves = doc_->kappa_leaves();
  const std::set<std::string> is_kappa(kappa_leaves.begin(), kappa_leaves.end());
  if (format == Format::kJsonPlan) {
    json leaves = json::array();
    for (const auto &id : doc_->preorder()) {
      if (!is_kappa.count(id)) continue;
      const LeafText t = generate_leaf(id);
      leaves.push_back({{"leaf", id}, {"title", t.title}, {"plan", t.plan.to_json()},
                        {"inaut", t.inaut}, {"litinaut", t.litinaut}});
    }
    return json{{"volume", doc_->meta().id}, {"leaves", leaves}}.dump(2) + "\n";
  }
  std::ostringstream os;
  const bool html = format == Format::kHtml;
  if (html) os << "<!DOCTYPE html>\n<html lang=\"fr\">\n<meta charset=\"utf-8\">\n<body>\n";
  for (const auto &id : doc_->preorder()) {
    const doc::DocNode &n = doc_->node(id);
    const std::string heading = n.level == 0 ? n.title : n.id + " " + n.title;
    if (html) {
      std::string esc = lit::to_html(heading, *kb_);
      esc = esc.substr(3, esc.size() - 7);
      const int h = std::min(n.level + 1, 6);
      os << "<h" << h << " id=\"s-" << n.id << "\">" << esc << "</h" << h << ">\n";
    } else {
      if (n.level > 0) os << "\n";
      os << heading << "\n";
    }
    if (!is_kappa.count(id)) continue;
    const std::string text = generate_leaf(id).litinaut;
    if (text.empty()) continue;
    if (html) {
      os << lit::to_html(text, *kb_) << "\n";
    } else {
      os << "\n" << text << "\n";
    }
  }
  if (html) os << "</body>\n</html>\n";
  return os.str();
}

std::set<std::string> Engine::known_tags() const {
  std::set<std::string> out{nlg::kDefaultTag};
  for (const auto &r : weights_.tag_rules) out.insert(r.tag);
  if (doc_) {
    for (const auto &[id, n] : doc_->nodes()) {
      if (n.leaf_type) out.insert(*n.leaf_type);
    }
  }
  return out;
}

std::vector<ZoneSection> Engine::zone_query(const ZoneQuery &q) const {
  const auto known = known_tags();
  for (const auto &f : q.filters) {
    if (!known.count(f)) throw InvalidQuery("unknown filter tag '" + f + "'");
  }
  const kb::KbGraph usable = filter_relations(graph_, [&](const std::string &rid) {
    const kb::RelationInstance *ri = kb_->find_relation(rid);
    return ri == nullptr || conditions_hold(*ri, q.context);
  });
  const kb::KbGraph selected = nlg::content_determination(*kb_, usable, q.polygon);
  nlg::StartContext start;
  start.parent_area = q.polygon;
  const nlg::GenerationPlan plan = nlg::make_plan(*kb_, selected, path_, start, weights_);

  std::vector<std::string> order;
  std::map<std::string, nlg::GenerationPlan> by_tag;
  for (const auto &c : plan.components) {
    if (!by_tag.count(c.tag)) {
      order.push_back(c.tag);
      by_tag[c.tag].leaf_type = c.tag;
    }
    by_tag[c.tag].components.push_back(c);
  }
  std::vector<ZoneSection> out;
  for (const auto &tag : order) {
    if (!q.filters.empty() && !q.filters.count(tag)) continue;
    const std::string text = lit::to_litinaut(by_tag[tag], weights_);
    if (text.empty()) continue;
    out.push_back({tag, text, lit::entity_links_json(text, *kb_)});
  }
  return out;
}

std::vector<std::string> Engine::leaves_mentioning(const std::set<std::string> &instances) const {
  std::vector<std::string> out;
  if (!doc_) return out;
  for (const auto &leaf : doc_->kappa_leaves()) {
    try {
      const auto ids = kappa(leaf).instance_ids();
      for (const auto &i : instances) {
        if (ids.count(i)) {
          out.push_back(leaf);
          break;
        }
      }
    } catch (const NoGeoArea &) {
    }
  }
  return out;
}

}  // namespace inaut::engine
