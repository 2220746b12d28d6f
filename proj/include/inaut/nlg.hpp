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


// Generation of INAUT text from a KB subgraph: content determination,
// component tagging and sorting, start-node selection, relation ordering
// and surface realization.
#ifndef INAUT_NLG_HPP_
#define INAUT_NLG_HPP_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "inaut/geo.hpp"
#include "inaut/guiding_path.hpp"
#include "inaut/kb.hpp"
#include "inaut/kb_graph.hpp"
#include "json.hpp"

namespace inaut::nlg {

inline constexpr const char *kDefaultTag = "Généralités";

enum class PpOrder { kAttributesFirst, kMembersFirst };

struct TagRule {
  std::string tag;
  int priority = 0;               // higher wins
  std::string contains_instance;  // instance id or name
  std::string contains_concept;   // any instance subsumed by it
  std::string contains_schema;    // any relation of this schema
};

struct WeightConfig {
  std::map<std::string, double> semantic_weight;  // concept id -> weight
  double neighbor_inheritance_factor = 0.5;
  double title_match_weight = 10.0;
  double lattice_weight = 5.0;
  double local_maximum_credit = 0.5;
  double size_difference_ratio = 3.0;
  std::map<std::string, double> relation_weight;  // schema id -> weight
  double default_relation_weight = 1.0;
  PpOrder pp_order = PpOrder::kAttributesFirst;
  std::vector<TagRule> tag_rules;
  std::map<std::string, std::string> omission_prefixes;  // leaf type -> prefix
  std::vector<std::string> litinaut_rules = {"conjunction", "relative", "pronoun", "omission"};

  static WeightConfig defaults();
  static WeightConfig from_json(const nlohmann::json &j);  // ConfigError
  static WeightConfig load_file(const std::string &path);
  nlohmann::json to_json() const;
  void validate() const;  // ConfigError

  double relation_weight_of(const std::string &schema) const;
  double concept_weight(const kb::KnowledgeBase &kb, const kb::Instance &inst) const;
};

// ---------------------------------------------------------------------------
// Content determination

// Fixpoint of the selection rules. Seeds are the georeferenced instances
// for which `inside` holds. From a selected node k, an edge k-k' is taken
// when k' is a non-georeferenced instance, a value, or a georeferenced
// instance inside G_S. A reified relation k' comes in with all its member
// edges as soon as one of its members is inside G_S.
kb::KbGraph content_determination(const kb::KnowledgeBase &kb, const kb::KbGraph &full,
                                  const std::function<bool(const std::string &)> &inside);

// G_S is the area node `area_node` of `areas`; inclusion is read off the
// area graph. Throws NoGeoArea when the node is missing.
kb::KbGraph content_determination(const kb::KnowledgeBase &kb, const kb::KbGraph &full,
                                  const geo::AreaGraph &areas, const std::string &area_node);

// G_S given as a free polygon (zone queries).
kb::KbGraph content_determination(const kb::KnowledgeBase &kb, const kb::KbGraph &full,
                                  const geo::GeoPolygon &gs);

// ---------------------------------------------------------------------------
// Document structuring

std::string tag_component(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                          const std::vector<TagRule> &rules);
std::vector<std::string> tag_components(const std::vector<kb::KbGraph> &components,
                                        const kb::KnowledgeBase &kb,
                                        const std::vector<TagRule> &rules);

// Polygons of the georeferenced instances of a component, in id order.
std::vector<geo::GeoPolygon> component_areas(const kb::KbGraph &component,
                                             const kb::KnowledgeBase &kb);

// Indices into `components`, in output order.
std::vector<size_t> sort_components(const std::vector<kb::KbGraph> &components,
                                    const kb::KnowledgeBase &kb, const geo::GuidingPath &path,
                                    const WeightConfig &weights);

// 2·LCS / (|a| + |b|) over lowercased accent-folded code points.
double name_similarity(const std::string &a, const std::string &b);

struct StartContext {
  std::string parent_title;
  std::optional<geo::GeoPolygon> parent_area;
};

struct StartScore {
  std::string instance;
  double title = 0, lattice = 0, semantic = 0;
  double total() const { return title + lattice + semantic; }
};

// One entry per instance node of the component, in id order.
std::vector<StartScore> score_start_nodes(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                                          const StartContext &ctx, const WeightConfig &weights);
// Throws EmptyComponent.
std::string select_start_node(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                              const StartContext &ctx, const WeightConfig &weights);

struct Step {
  std::string relation;
  bool forward = true;
  bool silent = false;  // modifier links produce no text
  friend bool operator==(const Step &, const Step &) = default;
};

std::vector<Step> order_relations(const kb::KbGraph &component, const kb::KnowledgeBase &kb,
                                  const std::string &start, const WeightConfig &weights);

// ---------------------------------------------------------------------------
// Realization

struct Phrase {
  std::string text;
  std::string referent;  // instance id when the phrase ends on an instance NP
  bool object = false;   // direct object
  kb::Agreement agreement;
};

struct Clause {
  std::string relation;
  std::string schema;
  size_t voice_index = 0;
  kb::Voice voice = kb::Voice::kPassive;
  bool forward = true;
  std::string subject_ref;
  kb::Agreement subject_agreement;
  std::string subject;  // as written inside a sentence, not capitalized
  std::string verb;
  std::vector<Phrase> complements;

  std::string tail() const;
  std::string text() const;
  std::string final_referent() const;
  // Subject and direct object with their agreement.
  std::map<std::string, kb::Agreement> core_referents() const;
};

struct RealizationContext {
  std::set<std::string> mentioned;
  PpOrder pp_order = PpOrder::kAttributesFirst;
};

// Throws MissingLexicalization.
Clause realize_clause(const kb::RelationInstance &ri, bool forward, const kb::KnowledgeBase &kb,
                      RealizationContext &ctx);
std::string realize_inaut(const kb::RelationInstance &ri, bool forward,
                          const kb::KnowledgeBase &kb, RealizationContext &ctx);

// ---------------------------------------------------------------------------
// Plans

struct PlannedComponent {
  kb::KbGraph graph;
  std::string tag;
  std::string start;
  std::vector<Step> steps;
  std::vector<Clause> clauses;  // silent steps excluded
};

struct GenerationPlan {
  std::string leaf;
  std::string leaf_type;
  std::vector<PlannedComponent> components;

  std::vector<std::string> inaut_sentences() const;
  nlohmann::json to_json() const;
};

// Splits `selected` into components, tags, sorts, orders and realizes them.
GenerationPlan make_plan(const kb::KnowledgeBase &kb, const kb::KbGraph &selected,
                         const geo::GuidingPath &path, const StartContext &start,
                         const WeightConfig &weights);

}  // namespace inaut::nlg

#endif  // INAUT_NLG_HPP_
