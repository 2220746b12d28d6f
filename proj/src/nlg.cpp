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


#include "inaut/nlg.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numeric>
#include <sstream>

#include "inaut/french.hpp"

namespace inaut::nlg {

using nlohmann::json;

// ---------------------------------------------------------------------------
// WeightConfig

WeightConfig WeightConfig::defaults() {
  WeightConfig w;
  w.semantic_weight = {{"port", 10.0}, {"mouillage", 8.0}, {"baie", 5.0}, {"plage", 2.0}};
  w.relation_weight = {{"est_limité_par", 3.0}, {"est_divisé_par", 2.0}};
  w.tag_rules = {{"Mouillages", 10, "mouillage", "", ""}};
  w.omission_prefixes = {{"Mouillages", "Le mouillage est autorisé"}};
  return w;
}

namespace {

double number(const json &j, const char *key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("weights: '") + key + "' must be a number");
  return j[key].get<double>();
}

std::map<std::string, double> number_map(const json &j, const char *key,
                                         std::map<std::string, double> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_object()) throw ConfigError(std::string("weights: '") + key + "' must be an object");
  std::map<std::string, double> out;
  for (const auto &[k, v] : j[key].items()) {
    if (!v.is_number()) throw ConfigError("weights: '" + std::string(key) + "." + k + "' must be a number");
    out[k] = v.get<double>();
  }
  return out;
}

}  // namespace

WeightConfig WeightConfig::from_json(const json &j) {
  if (!j.is_object()) throw ConfigError("weights: expected an object");
  WeightConfig w = defaults();
  w.semantic_weight = number_map(j, "semantic_weight", w.semantic_weight);
  w.relation_weight = number_map(j, "relation_weight", w.relation_weight);
  w.neighbor_inheritance_factor =
      number(j, "neighbor_inheritance_factor", w.neighbor_inheritance_factor);
  w.title_match_weight = number(j, "title_match_weight", w.title_match_weight);
  w.lattice_weight = number(j, "lattice_weight", w.lattice_weight);
  w.local_maximum_credit = number(j, "local_maximum_credit", w.local_maximum_credit);
  w.size_difference_ratio = number(j, "size_difference_ratio", w.size_difference_ratio);
  w.default_relation_weight = number(j, "default_relation_weight", w.default_relation_weight);
  if (j.contains("pp_order")) {
    const std::string o = j["pp_order"].is_string() ? j["pp_order"].get<std::string>() : "";
    if (o == "attributes_first") {
      w.pp_order = PpOrder::kAttributesFirst;
    } else if (o == "members_first") {
      w.pp_order = PpOrder::kMembersFirst;
    } else {
      throw ConfigError("weights: pp_order must be attributes_first or members_first");
    }
  }
  try {
    if (j.contains("tag_rules")) {
      w.tag_rules.clear();
      for (const auto &r : j.at("tag_rules")) {
        TagRule t;
        t.tag = r.at("tag").get<std::string>();
        t.priority = r.value("priority", 0);
        t.contains_instance = r.value("contains_instance", "");
        t.contains_concept = r.value("contains_concept", "");
        t.contains_schema = r.value("contains_schema", "");
        w.tag_rules.push_back(std::move(t));
      }
    }
    if (j.contains("omission_prefixes")) {
      w.omission_prefixes = j.at("omission_prefixes").get<std::map<std::string, std::string>>();
    }
    if (j.contains("litinaut_rules")) {
      w.litinaut_rules = j.at("litinaut_rules").get<std::vector<std::string>>();
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
  w.validate();
  return w;
}

WeightConfig WeightConfig::load_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file not found: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("weights: " + std::string(e.what()));
  }
  return from_json(j);
}

json WeightConfig::to_json() const {
  json rules = json::array();
  for (const auto &r : tag_rules) {
    json jr = {{"tag", r.tag}, {"priority", r.priority}};
    if (!r.contains_instance.empty()) jr["contains_instance"] = r.contains_instance;
    if (!r.contains_concept.empty()) jr["contains_concept"] = r.contains_concept;
    if (!r.contains_schema.empty()) jr["contains_schema"] = r.contains_schema;
    rules.push_back(std::move(jr));
  }
  return {{"semantic_weight", semantic_weight},
          {"neighbor_inheritance_factor", neighbor_inheritance_factor},
          {"title_match_weight", title_match_weight},
          {"lattice_weight", lattice_weight},
          {"local_maximum_credit", local_maximum_credit},
          {"size_difference_ratio", size_difference_ratio},
          {"relation_weight", relation_weight},
          {"default_relation_weight", default_relation_weight},
          {"pp_order", pp_order == PpOrder::kAttributesFirst ? "attributes_first" : "members_first"},
          {"tag_rules", rules},
          {"omission_prefixes", omission_prefixes},
          {"litinaut_rules", litinaut_rules}};
}

void WeightConfig::validate() const {
  auto check = [](const std::string &name, double v) {
    if (!std::isfinite(v) || v < 0) throw ConfigError("weights: '" + name + "' must be finite and >= 0");
  };
  for (const auto &[k, v] : semantic_weight) check("semantic_weight." + k, v);
  for (const auto &[k, v] : relation_weight) check("relation_weight." + k, v);
  check("title_match_weight", title_match_weight);
  check("lattice_weight", lattice_weight);
  check("local_maximum_credit", local_maximum_credit);
  check("default_relation_weight", default_relation_weight);
  if (!(neighbor_inheritance_factor > 0 && neighbor_inheritance_factor < 1)) {
    throw ConfigError("weights: neighbor_inheritance_factor must lie in (0, 1)");
  }
  if (!(size_difference_ratio > 1) || !std::isfinite(size_difference_ratio)) {
    throw ConfigError("weights: size_difference_ratio must be > 1");
  }
  static const std::set<std::string> known = {"conjunction", "relative", "pronoun", "omission"};
  for (const auto &r : litinaut_rules) {
    if (!known.count(r)) throw ConfigError("weights: unknown LitINAUT rule '" + r + "'");
  }
}

double WeightConfig::relation_weight_of(const std::string &schema) const {
  auto it = relation_weight.find(schema);
  return it == relation_weight.end() ? default_relation_weight : it->second;
}

double WeightConfig::concept_weight(const kb::KnowledgeBase &kb, const kb::Instance &inst) const {
  double best = 0.0;
  for (const auto &c : inst.concepts) {
    for (const auto &a : kb.ancestors(c)) {
      auto it = semantic_weight.find(a);
      if (it != semantic_weight.end()) best = std::max(best, it->second);
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Content determination

namespace {

const geo::GeoPolygon *area_of(const kb::KnowledgeBase &kb, const kb::Instance &inst) {
  if (!inst.georeferenced || !inst.geo_ref) return nullptr;
  auto it = kb.areas().find(*inst.geo_ref);
  return it == kb.areas().end() ? nullptr : &it->second;
}

bool georeferenced(const kb::KnowledgeBase &kb, const std::string &instance) {
  const kb::Instance *inst = kb.find_instance(instance);
  return inst && area_of(kb, *inst);
}

}  // namespace

kb::KbGraph content_determination(const kb::KnowledgeBase &kb, const kb::KbGraph &full,
                                  const std::function<bool(const std::string &)> &inside) {
  std::map<std::string, bool> memo;
  auto in_gs = [&](const std::string &instance) {
    auto it = memo.find(instance);
    if (it != memo.end()) return it->second;
    const bool v = georeferenced(kb, instance) && inside(instance);
    memo.emplace(instance, v);
    return v;
  };
  auto joins = [&](const kb::GraphNode &n) {
    switch (n.kind) {
      case kb::NodeKind::kValue:
        return true;
      case kb::NodeKind::kInstance:
        return !georeferenced(kb, n.ref) || in_gs(n.ref);
      case kb::NodeKind::kRelation:
        return false;
    }
    return false;
  };

  kb::KbGraph out;
  std::deque<std::string> work;
  auto add_node = [&](const std::string &id) {
    if (out.has_node(id)) return;
    out.add_node(full.node(id));
    work.push_back(id);
  };
  for (const auto &[id, n] : full.nodes()) {
    if (n.kind == kb::NodeKind::kInstance && in_gs(n.ref)) add_node(id);
  }
  while (!work.empty()) {
    const std::string k = work.front();
    work.pop_front();
    for (const kb::GraphEdge *e : full.incident(k)) {
      if (out.has_edge(e->id)) continue;
      const std::string &other = e->from == k ? e->to : e->from;
      const kb::GraphNode &n = full.node(other);
      if (n.kind == kb::NodeKind::kRelation) {
        bool member_inside = false;
        for (const kb::GraphEdge *m : full.incident(other)) {
          const kb::GraphNode &mn = full.node(m->from == other ? m->to : m->from);
          if (mn.kind == kb::NodeKind::kInstance && in_gs(mn.ref)) member_inside = true;
        }
        if (!member_inside) continue;
        add_node(other);
        out.add_edge(*e);
        for (const kb::GraphEdge *m : full.incident(other)) {
          const std::string &mid = m->from == other ? m->to : m->from;
          if (full.node(mid).kind != kb::NodeKind::kInstance) continue;
          add_node(mid);
          if (!out.has_edge(m->id)) out.add_edge(*m);
        }
        continue;
      }
      if (!joins(n)) continue;
      add_node(other);
      out.add_edge(*e);
    }
  }
  return out;
}

kb::KbGraph content_determination(const kb::KnowledgeBase &kb, const kb::KbGraph &full,
                                  const geo::AreaGraph &areas, const std::string &area_node) {
  if (!areas.contains(area_node)) throw NoGeoArea("no area node '" + area_node + "'");
  return content_determination(kb, full, [&](const std::string &instance) {
    const kb::Instance *inst = kb.find_instance(instance);
    return inst && inst->geo_ref && areas.contains(*inst->geo_ref) &&
           areas.included_in(*inst->geo_ref, area_node);
  });
}

kb::KbGraph content_determination(const kb::KnowledgeBase &kb, const kb::KbGraph &full,
                                  const geo::GeoPolygon &gs) {
  return content_determination(kb, full, [&](const std::string &instance) {
    const kb::Instance *inst = kb.find_instance(instance);
    const geo::GeoPolygon *a = inst ? area_of(kb, *inst) : nullptr;
    return a && geo::partial_inclusion(*a, gs);
  });
}

// ---------------------------------------------------------------------------
// Tagging

std::string tag_component(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                          const std::vector<TagRule> &rules) {
  const TagRule *best = nullptr;
  const auto instances = component.instance_ids();
  const auto relations = component.relation_ids();
  for (const auto &rule : rules) {
    if (best && rule.priority <= best->priority) continue;
    bool fires = false;
    for (const auto &id : instances) {
      const kb::Instance *inst = kb.find_instance(id);
      if (!inst) continue;
      if (!rule.contains_instance.empty() &&
          (id == rule.contains_instance || fr::fold(inst->name) == fr::fold(rule.contains_instance))) {
        fires = true;
      }
      if (!rule.contains_concept.empty() && kb.instance_of(*inst, rule.contains_concept)) {
        fires = true;
      }
    }
    if (!rule.contains_schema.empty()) {
      for (const auto &rid : relations) {
        const kb::RelationInstance *ri = kb.find_relation(rid);
        if (ri && ri->schema == rule.contains_schema) fires = true;
      }
    }
    if (fires) best = &rule;
  }
  return best ? best->tag : kDefaultTag;
}

std::vector<std::string> tag_components(const std::vector<kb::KbGraph> &components,
                                        const kb::KnowledgeBase &kb,
                                        const std::vector<TagRule> &rules) {
  std::vector<std::string> out;
  for (const auto &c : components) out.push_back(tag_component(c, kb, rules));
  return out;
}

// ---------------------------------------------------------------------------
// Sorting

std::vector<geo::GeoPolygon> component_areas(const kb::KbGraph &component,
                                             const kb::KnowledgeBase &kb) {
  std::vector<geo::GeoPolygon> out;
  for (const auto &id : component.instance_ids()) {
    const kb::Instance *inst = kb.find_instance(id);
    if (const geo::GeoPolygon *a = inst ? area_of(kb, *inst) : nullptr) out.push_back(*a);
  }
  return out;
}

namespace {

struct Placed {
  size_t index;
  double area;
  geo::Point center;
  double along;
  std::string key;  // smallest node id, for ties
};

geo::Point unit(geo::Point v) {
  const double n = std::hypot(v.lon, v.lat);
  if (n == 0) return {0, 0};
  return {v.lon / n, v.lat / n};
}

double correlation(const std::vector<const Placed *> &seq, const geo::GuidingPath &path) {
  double s = 0;
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    const geo::Point a = seq[i]->center, b = seq[i + 1]->center;
    const geo::Point d = unit({b.lon - a.lon, b.lat - a.lat});
    const geo::Point t = path.direction_at({(a.lon + b.lon) / 2, (a.lat + b.lat) / 2});
    s += d.lon * t.lon + d.lat * t.lat;
  }
  return s;
}

void order_tier(std::vector<const Placed *> &tier, const geo::GuidingPath &path) {
  auto by_projection = [](const Placed *a, const Placed *b) {
    if (a->along != b->along) return a->along < b->along;
    return a->key < b->key;
  };
  std::sort(tier.begin(), tier.end(), by_projection);
  if (tier.size() < 3 || tier.size() > 7 || path.waypoints.size() < 2) return;
  std::vector<size_t> perm(tier.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<size_t> best = perm;
  double best_score = -1e300;
  std::vector<const Placed *> seq(tier.size());
  do {
    for (size_t i = 0; i < perm.size(); ++i) seq[i] = tier[perm[i]];
    const double s = correlation(seq, path);
    // Permutations come in lexicographic order of projection rank, so a
    // strict improvement is needed to displace an earlier one.
    if (s > best_score + 1e-12) {
      best_score = s;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::vector<const Placed *> out;
  for (size_t i : best) out.push_back(tier[i]);
  tier = std::move(out);
}

}  // namespace

std::vector<size_t> sort_components(const std::vector<kb::KbGraph> &components,
                                    const kb::KnowledgeBase &kb, const geo::GuidingPath &path,
                                    const WeightConfig &weights) {
  std::vector<Placed> placed;
  std::vector<size_t> unplaced;
  for (size_t i = 0; i < components.size(); ++i) {
    const auto areas = component_areas(components[i], kb);
    double total = 0;
    for (const auto &a : areas) total += geo::polygon_area(a);
    if (total <= 0) {
      unplaced.push_back(i);
      continue;
    }
    Placed p{i, total, geo::barycenter(std::span<const geo::GeoPolygon>(areas)), 0.0,
             components[i].nodes().begin()->first};
    p.along = path.waypoints.size() >= 2 ? path.project(p.center) : 0.0;
    placed.push_back(std::move(p));
  }
  std::sort(placed.begin(), placed.end(), [](const Placed &a, const Placed &b) {
    if (a.area != b.area) return a.area > b.area;
    return a.key < b.key;
  });
  std::vector<size_t> out;
  size_t i = 0;
  while (i < placed.size()) {
    std::vector<const Placed *> tier{&placed[i]};
    size_t j = i + 1;
    while (j < placed.size() && placed[i].area / placed[j].area < weights.size_difference_ratio) {
      tier.push_back(&placed[j]);
      ++j;
    }
    order_tier(tier, path);
    for (const Placed *p : tier) out.push_back(p->index);
    i = j;
  }
  out.insert(out.end(), unplaced.begin(), unplaced.end());
  return out;
}

// ---------------------------------------------------------------------------
// Start node

double name_similarity(const std::string &a, const std::string &b) {
  const std::u32string x = fr::decode(fr::fold(fr::lower(a)));
  const std::u32string y = fr::decode(fr::fold(fr::lower(b)));
  if (x.empty() && y.empty()) return 1.0;
  if (x.empty() || y.empty()) return 0.0;
  std::vector<size_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
  size_t longest = 0;
  for (size_t i = 1; i <= x.size(); ++i) {
    for (size_t j = 1; j <= y.size(); ++j) {
      cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : 0;
      longest = std::max(longest, cur[j]);
    }
    std::swap(prev, cur);
  }
  return 2.0 * static_cast<double>(longest) / static_cast<double>(x.size() + y.size());
}

namespace {

double iou(const geo::GeoPolygon &a, const geo::GeoPolygon &b) {
  const double i = geo::intersection_area(a, b);
  const double u = geo::polygon_area(a) + geo::polygon_area(b) - i;
  return u > 0 ? i / u : 0.0;
}

// Instances sharing a relation with `instance` inside the component.
std::set<std::string> instance_neighbors(const kb::KbGraph &g, const std::string &instance) {
  std::set<std::string> out;
  const std::string self = kb::instance_node(instance);
  for (const auto &n : g.neighbors(self)) {
    const kb::GraphNode &node = g.node(n);
    if (node.kind == kb::NodeKind::kInstance) {
      out.insert(node.ref);
    } else if (node.kind == kb::NodeKind::kRelation) {
      for (const auto &m : g.neighbors(n)) {
        if (m != self && g.node(m).kind == kb::NodeKind::kInstance) out.insert(g.node(m).ref);
      }
    }
  }
  out.erase(instance);
  return out;
}

}  // namespace

std::vector<StartScore> score_start_nodes(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                                          const StartContext &ctx, const WeightConfig &weights) {
  std::vector<std::string> ids;
  for (const auto &id : component.instance_ids()) {
    if (kb.find_instance(id)) ids.push_back(id);
  }
  std::map<std::string, const geo::GeoPolygon *> areas;
  for (const auto &id : ids) {
    if (const geo::GeoPolygon *a = area_of(kb, *kb.find_instance(id))) areas[id] = a;
  }
  std::set<std::string> global_max, local_max;
  for (const auto &[id, a] : areas) {
    bool covers_all = true, dominated = false;
    for (const auto &[other, b] : areas) {
      if (other == id) continue;
      const bool b_in_a = geo::partial_inclusion(*b, *a);
      const bool a_in_b = geo::partial_inclusion(*a, *b);
      covers_all &= b_in_a;
      if (a_in_b && !b_in_a) dominated = true;
    }
    if (covers_all) global_max.insert(id);
    if (!dominated) local_max.insert(id);
  }
  std::vector<StartScore> out;
  for (const auto &id : ids) {
    const kb::Instance &inst = *kb.find_instance(id);
    StartScore s;
    s.instance = id;
    double match = name_similarity(inst.name, ctx.parent_title);
    auto it = areas.find(id);
    if (it != areas.end() && ctx.parent_area) match += iou(*it->second, *ctx.parent_area);
    s.title = weights.title_match_weight * match;
    if (!global_max.empty()) {
      s.lattice = global_max.count(id) ? weights.lattice_weight : 0.0;
    } else if (local_max.count(id)) {
      s.lattice = weights.lattice_weight * weights.local_maximum_credit;
    }
    s.semantic = weights.concept_weight(kb, inst);
    for (const auto &n : instance_neighbors(component, id)) {
      if (const kb::Instance *ni = kb.find_instance(n)) {
        s.semantic += weights.neighbor_inheritance_factor * weights.concept_weight(kb, *ni);
      }
    }
    out.push_back(s);
  }
  return out;
}

std::string select_start_node(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                              const StartContext &ctx, const WeightConfig &weights) {
  const auto scores = score_start_nodes(component, kb, ctx, weights);
  if (scores.empty()) throw EmptyComponent("component has no instance node");
  const StartScore *best = &scores.front();
  for (const auto &s : scores) {
    if (s.total() > best->total() + 1e-9) best = &s;
  }
  return best->instance;
}

// ---------------------------------------------------------------------------
// Relation ordering

namespace {

const kb::VoiceLexeme *primary_voice(const kb::KnowledgeBase &kb, const std::string &schema) {
  const auto view = kb.schema(schema);
  if (!view || !view->lexeme || view->lexeme->voices.empty()) return nullptr;
  return &view->lexeme->voices.front();
}

bool is_forward(const kb::KnowledgeBase &kb, const kb::RelationInstance &ri,
                const std::string &origin) {
  std::string subject_role = kb::kDomainRole;
  if (const kb::VoiceLexeme *v = primary_voice(kb, ri.schema)) subject_role = v->subject_role;
  auto it = ri.members.find(subject_role);
  return it != ri.members.end() && it->second == origin;
}

}  // namespace

std::vector<Step> order_relations(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                                  const std::string &start, const WeightConfig &weights) {
  const std::set<std::string> in_component = component.relation_ids();
  std::set<std::string> done_rel, done_inst;
  std::vector<Step> out;

  std::function<void(const std::string &)> visit = [&](const std::string &instance) {
    done_inst.insert(instance);
    std::set<std::string> rels;
    for (const kb::GraphEdge *e : component.incident(kb::instance_node(instance))) {
      if (!e->relation.empty() && in_component.count(e->relation)) rels.insert(e->relation);
    }
    std::vector<const kb::RelationInstance *> todo;
    for (const auto &r : rels) {
      if (const kb::RelationInstance *ri = kb.find_relation(r)) todo.push_back(ri);
    }
    std::stable_sort(todo.begin(), todo.end(), [&](const auto *a, const auto *b) {
      return weights.relation_weight_of(a->schema) > weights.relation_weight_of(b->schema);
    });
    for (const kb::RelationInstance *ri : todo) {
      if (done_rel.count(ri->id)) continue;
      done_rel.insert(ri->id);
      out.push_back({ri->id, is_forward(kb, *ri, instance), ri->schema == kb::kModifierSchema});
      std::vector<std::string> members;
      if (const auto view = kb.schema(ri->schema); view && view->complex) {
        for (const auto &role : view->member_roles) {
          auto it = ri->members.find(role.name);
          if (it != ri->members.end()) members.push_back(it->second);
        }
      } else {
        for (const auto &[role, m] : ri->members) members.push_back(m);
      }
      for (const auto &m : members) {
        if (!done_inst.count(m) && component.has_node(kb::instance_node(m))) visit(m);
      }
    }
  };
  visit(start);
  return out;
}

// ---------------------------------------------------------------------------
// Realization

std::string Clause::tail() const {
  std::string out;
  for (const auto &c : complements) {
    if (!out.empty()) out += " ";
    out += c.text;
  }
  return out;
}

std::string Clause::text() const {
  std::string s = subject + " " + verb;
  if (!complements.empty()) s += " " + tail();
  return fr::capitalize(s) + ".";
}

std::string Clause::final_referent() const {
  return complements.empty() ? std::string() : complements.back().referent;
}

std::map<std::string, kb::Agreement> Clause::core_referents() const {
  std::map<std::string, kb::Agreement> out{{subject_ref, subject_agreement}};
  for (const auto &c : complements) {
    if (c.object && !c.referent.empty()) out.emplace(c.referent, c.agreement);
  }
  return out;
}

namespace {

const kb::Instance &instance_or_throw(const kb::KnowledgeBase &kb, const std::string &id) {
  const kb::Instance *inst = kb.find_instance(id);
  if (!inst) throw UnknownInstance("unknown instance '" + id + "'");
  return *inst;
}

struct NounText {
  std::string article;
  std::string head;  // bracketed when georeferenced, adjectives appended
};

std::string head_text(const kb::KnowledgeBase &kb, const kb::Instance &inst) {
  std::string head = inst.georeferenced ? "[" + inst.name + "]" : inst.name;
  for (const auto &ai : kb.attribute_instances()) {
    if (ai.instance != inst.id) continue;
    const kb::AttributeSchema *schema = nullptr;
    if (auto it = kb.attributes().find(ai.attribute); it != kb.attributes().end()) {
      schema = &it->second;
    }
    const kb::ValueType *t = schema ? kb.find_value_type(schema->value_type) : nullptr;
    const kb::ValueEntry *e = t ? t->find(ai.value) : nullptr;
    if (e && e->adjective) head += " " + ai.value;
  }
  return head;
}

NounText noun(const kb::KnowledgeBase &kb, const kb::Instance &inst, bool subject,
              RealizationContext &ctx) {
  NounText n{"", head_text(kb, inst)};
  switch (inst.article_policy) {
    case kb::ArticlePolicy::kNone:
      break;
    case kb::ArticlePolicy::kIndefiniteAsObject:
      if (!subject && !ctx.mentioned.count(inst.id)) {
        n.article = fr::indefinite_article(inst.agreement);
        break;
      }
      [[fallthrough]];
    case kb::ArticlePolicy::kDefinite:
      n.article = fr::definite_article(inst.agreement, fr::elides(inst.name));
      break;
  }
  return n;
}

// "prep art head" with contraction and elision.
std::string attach(const std::string &prep, const NounText &n, bool vowel) {
  if (n.article == "l'") return prep + " l'" + n.head;
  if (n.article.empty()) {
    if (prep == "de" && vowel) return "d'" + n.head;
    return prep + " " + n.head;
  }
  return fr::contract(prep, n.article) + " " + n.head;
}

std::string instance_phrase(const kb::KnowledgeBase &kb, const kb::Instance &inst,
                            const std::string &prep, bool subject, RealizationContext &ctx) {
  const kb::Instance *base = &inst;
  std::string modifier;
  if (inst.derived_from) {
    base = &instance_or_throw(kb, inst.derived_from->base);
    modifier = inst.derived_from->modifier;
  }
  const NounText n = noun(kb, *base, subject, ctx);
  const bool vowel = fr::elides(base->name);
  std::string out;
  if (!modifier.empty()) {
    std::string stem = modifier, mprep = "";
    const size_t sp = modifier.rfind(' ');
    if (sp != std::string::npos) {
      stem = modifier.substr(0, sp);
      mprep = modifier.substr(sp + 1);
    }
    out = mprep.empty() ? stem + " " + fr::with_article(n.article, n.head)
                        : stem + " " + attach(mprep, n, vowel);
    if (prep != "à") out = prep + " " + out;
    return out;
  }
  if (prep.empty()) return fr::with_article(n.article, n.head);
  return attach(prep, n, vowel);
}

std::string value_phrase(const kb::KnowledgeBase &kb, const std::string &value_type,
                         const std::string &value, const std::string &prep) {
  const kb::ValueType *t = kb.find_value_type(value_type);
  const kb::ValueEntry *e = t ? t->find(value) : nullptr;
  if (!e || t->kind != kb::ValueKind::kEnumerated) return prep + " " + value;
  NounText n{fr::definite_article(e->agreement, fr::elides(value, e->elision)), value};
  return attach(prep, n, false);
}

[[noreturn]] void missing(const kb::RelationInstance &ri, const std::string &why) {
  throw MissingLexicalization("relation '" + ri.id + "' (" + ri.schema + "): " + why);
}

}  // namespace

Clause realize_clause(const kb::RelationInstance &ri_in, bool forward, const kb::KnowledgeBase &kb,
                      RealizationContext &ctx) {
  auto view = kb.schema(ri_in.schema);
  if (!view) throw UnknownSchema("unknown schema '" + ri_in.schema + "'");
  kb::RelationInstance ri = ri_in;
  if (!view->lexeme || view->lexeme->voices.empty()) missing(ri, "no verb lexeme");

  const auto &voices = view->lexeme->voices;
  size_t vi = 0;
  if (!forward) {
    const std::string &primary_subject = voices.front().subject_role;
    bool found = false;
    for (size_t i = 1; i < voices.size(); ++i) {
      if (voices[i].subject_role != primary_subject) {
        vi = i;
        found = true;
        break;
      }
    }
    // A simple relation with a declared inverse reads backwards through
    // the inverse's own primary voice.
    if (!found && !view->complex && view->symmetric_of) {
      auto partner = kb.schema(*view->symmetric_of);
      if (partner && partner->lexeme && !partner->lexeme->voices.empty()) {
        std::swap(ri.members[kb::kDomainRole], ri.members[kb::kRangeRole]);
        ri.schema = partner->id;
        view = partner;
      }
    }
  }
  const kb::VoiceLexeme &voice = view->lexeme->voices.at(vi);

  Clause c;
  c.relation = ri_in.id;
  c.schema = ri.schema;
  c.voice_index = vi;
  c.voice = voice.voice;
  c.forward = forward;

  auto member = [&](const std::string &role) -> const kb::Instance & {
    auto it = ri.members.find(role);
    if (it == ri.members.end()) missing(ri, "no member for role '" + role + "'");
    return instance_or_throw(kb, it->second);
  };
  const kb::Instance &subject = member(voice.subject_role);
  c.subject_ref = subject.id;
  c.subject_agreement = subject.agreement;
  c.subject = instance_phrase(kb, subject, "", true, ctx);
  const auto form = voice.form(subject.agreement);
  if (!form) missing(ri, "no verb form for " + subject.agreement.key());
  c.verb = *form;

  std::vector<std::string> mentioned{subject.id};
  if (!voice.object_role.empty()) {
    const kb::Instance &obj = member(voice.object_role);
    c.complements.push_back({instance_phrase(kb, obj, "", false, ctx), obj.id, true, obj.agreement});
    mentioned.push_back(obj.id);
  }
  if (view->default_text) {
    const auto &dt = *view->default_text;
    int n = 0;
    for (const auto &r : view->member_roles) n += kb::role_base_name(r.name) == dt.count_role;
    c.complements.push_back(
        {dt.prep + " " + fr::numeral(n, kb::Gender::kFeminine) + " " + (n == 1 ? dt.singular : dt.plural),
         "", false, {}});
  }

  struct Pending {
    size_t order;
    int group;
    bool attribute;
    Phrase phrase;
  };
  std::vector<Pending> pps;
  for (size_t k = 0; k < voice.complements.size(); ++k) {
    const kb::Complement &comp = voice.complements[k];
    if (const kb::MemberRole *m = view->member_role(comp.role)) {
      auto it = ri.members.find(comp.role);
      if (it == ri.members.end()) missing(ri, "no member for role '" + comp.role + "'");
      const kb::Instance &inst = instance_or_throw(kb, it->second);
      pps.push_back({k, m->group, false,
                     {instance_phrase(kb, inst, comp.prep, false, ctx), inst.id, false, inst.agreement}});
      mentioned.push_back(inst.id);
      if (inst.derived_from) mentioned.push_back(inst.derived_from->base);
    } else if (const kb::AttributeRole *a = view->attribute_role(comp.role)) {
      auto it = ri.attributes.find(comp.role);
      if (it == ri.attributes.end()) {
        if (a->condition) continue;
        missing(ri, "no value for role '" + comp.role + "'");
      }
      pps.push_back({k, a->group, true, {value_phrase(kb, a->value_type, it->second, comp.prep), "", false, {}}});
    } else if (!view->complex && (comp.role == kb::kDomainRole || comp.role == kb::kRangeRole)) {
      const kb::Instance &inst = member(comp.role);
      pps.push_back({k, 0, false, {instance_phrase(kb, inst, comp.prep, false, ctx), inst.id, false, inst.agreement}});
      mentioned.push_back(inst.id);
    } else {
      missing(ri, "complement names unknown role '" + comp.role + "'");
    }
  }
  const bool attributes_first = ctx.pp_order == PpOrder::kAttributesFirst;
  std::stable_sort(pps.begin(), pps.end(), [&](const Pending &x, const Pending &y) {
    if ((x.group == 0) != (y.group == 0)) return x.group == 0;
    if (x.group != y.group) return x.group < y.group;
    if (x.group == 0 && x.attribute != y.attribute) return x.attribute == attributes_first;
    return x.order < y.order;
  });
  int last_group = 0;
  for (auto &p : pps) {
    if (p.group != 0 && last_group != 0 && p.group != last_group) {
      p.phrase.text = "et " + p.phrase.text;
    }
    if (p.group != 0) last_group = p.group;
    c.complements.push_back(std::move(p.phrase));
  }
  for (const auto &m : mentioned) ctx.mentioned.insert(m);
  return c;
}

std::string realize_inaut(const kb::RelationInstance &ri, bool forward,
                          const kb::KnowledgeBase &kb, RealizationContext &ctx) {
  return realize_clause(ri, forward, kb, ctx).text();
}

// ---------------------------------------------------------------------------
// Plans

std::vector<std::string> GenerationPlan::inaut_sentences() const {
  std::vector<std::string> out;
  for (const auto &c : components) {
    for (const auto &cl : c.clauses) out.push_back(cl.text());
  }
  return out;
}

json GenerationPlan::to_json() const {
  json comps = json::array();
  for (const auto &c : components) {
    json nodes = json::array();
    for (const auto &[id, n] : c.graph.nodes()) nodes.push_back(id);
    json edges = json::array();
    for (const auto &[id, e] : c.graph.edges()) edges.push_back(id);
    json steps = json::array();
    size_t k = 0;
    for (const auto &s : c.steps) {
      json js = {{"relation", s.relation}, {"forward", s.forward}, {"silent", s.silent}};
      if (!s.silent && k < c.clauses.size()) js["inaut"] = c.clauses[k++].text();
      steps.push_back(std::move(js));
    }
    comps.push_back({{"tag", c.tag},
                     {"start", c.start},
                     {"nodes", nodes},
                     {"edges", edges},
                     {"steps", steps}});
  }
  return {{"leaf", leaf}, {"leaf_type", leaf_type}, {"components", comps}};
}

GenerationPlan make_plan(const kb::KnowledgeBase &kb, const kb::KbGraph &selected,
                         const geo::GuidingPath &path, const StartContext &start,
                         const WeightConfig &weights) {
  GenerationPlan plan;
  // Modifier links are silent, so they do not hold components together.
  kb::KbGraph split;
  for (const auto &[id, n] : selected.nodes()) split.add_node(n);
  for (const auto &[id, e] : selected.edges()) {
    if (e.label != kb::kModifierSchema) split.add_edge(e);
  }
  std::vector<kb::KbGraph> comps;
  for (auto &c : kb::connected_components(split)) {
    if (!c.instance_ids().empty()) comps.push_back(std::move(c));
  }
  const auto tags = tag_components(comps, kb, weights.tag_rules);
  RealizationContext ctx;
  ctx.pp_order = weights.pp_order;
  for (size_t i : sort_components(comps, kb, path, weights)) {
    PlannedComponent pc;
    pc.graph = comps[i];
    pc.tag = tags[i];
    pc.start = select_start_node(pc.graph, kb, start, weights);
    pc.steps = order_relations(pc.graph, kb, pc.start, weights);
    for (const auto &s : pc.steps) {
      if (s.silent) continue;
      pc.clauses.push_back(realize_clause(*kb.find_relation(s.relation), s.forward, kb, ctx));
    }
    plan.components.push_back(std::move(pc));
  }
  return plan;
}

}  // namespace inaut::nlg
