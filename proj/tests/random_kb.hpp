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


// Random knowledge bases for property tests and the acceptance run.
#ifndef INAUT_TESTS_RANDOM_KB_HPP_
#define INAUT_TESTS_RANDOM_KB_HPP_

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "inaut/french.hpp"
#include "inaut/kb.hpp"

namespace testing {

struct RandomKbOptions {
  int instances = 30;
  int relations = 20;
  int simple_schemas = 3;
  int complex_schemas = 3;
  double georeferenced = 0.6;
  double plural = 0.1;
  double world = 10.0;  // areas live in [0, world]^2
};

class RandomKb {
 public:
  explicit RandomKb(unsigned seed) : rng_(seed) {}

  inaut::kb::KnowledgeBase make(const RandomKbOptions &o = {}) {
    using namespace inaut::kb;
    used_.clear();
    KnowledgeBase kb;
    kb.put_concept({"entite", "entité", {}});
    kb.put_concept({"lieu", "lieu", {"entite"}});
    ValueType dir{"direction", ValueKind::kEnumerated, {}};
    for (const char *v : {"N", "S", "NE", "NW", "SE"}) dir.values.push_back({v, false, {}, std::nullopt});
    dir.values.push_back({"Est", false, {}, true});
    kb.put_value_type(dir);
    ValueType aspect{"aspect", ValueKind::kEnumerated, {}};
    for (const char *v : {"visible", "remarquable"}) aspect.values.push_back({v, true, {}, std::nullopt});
    kb.put_value_type(aspect);
    kb.put_attribute({"aspect", "aspect", "lieu", "aspect"});

    for (int i = 0; i < o.simple_schemas; ++i) kb.put_simple_relation(simple_schema(i));
    for (int i = 0; i < o.complex_schemas; ++i) kb.put_complex_relation(complex_schema(i));

    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < o.instances; ++i) {
      Instance inst;
      inst.id = "x" + std::to_string(i);
      inst.concepts = {"lieu"};
      inst.agreement.gender = u(rng_) < 0.5 ? Gender::kFeminine : Gender::kMasculine;
      inst.agreement.number = u(rng_) < o.plural ? GrammaticalNumber::kPlural : GrammaticalNumber::kSingular;
      if (u(rng_) < o.georeferenced) {
        inst.georeferenced = true;
        inst.geo_ref = inst.id;
        inst.name = pick({"pointe", "cap", "anse", "île", "baie", "roche"}) + " " +
                    inaut::fr::capitalize(word(2, 3));
        inst.article_policy = u(rng_) < 0.1 ? ArticlePolicy::kNone : ArticlePolicy::kDefinite;
        const double w = 0.2 + u(rng_) * 2.8, h = 0.2 + u(rng_) * 2.8;
        const double x = u(rng_) * (o.world - w), y = u(rng_) * (o.world - h);
        kb.put_area(inst.id, inaut::geo::GeoPolygon::Rectangle(x, y, x + w, y + h, inst.id));
      } else {
        inst.name = word(3, 3);
        if (inst.agreement.number == GrammaticalNumber::kPlural) inst.name += "s";
        inst.article_policy = u(rng_) < 0.4 ? ArticlePolicy::kIndefiniteAsObject : ArticlePolicy::kDefinite;
      }
      kb.put_instance(inst);
      if (u(rng_) < 0.15) kb.put_attribute_instance({inst.id, "aspect", pick({"visible", "remarquable"})});
    }

    std::vector<std::string> schemas;
    for (const auto &[id, s] : kb.simple_relations()) {
      if (id != kModifierSchema) schemas.push_back(id);
    }
    for (const auto &[id, s] : kb.complex_relations()) schemas.push_back(id);
    int made = 0;
    for (int attempt = 0; made < o.relations && attempt < o.relations * 10; ++attempt) {
      RelationInstance ri = relation(kb, schemas[index(schemas.size())]);
      const size_t before = kb.relations().size();
      try {
        kb = add_relation_instance(kb, ri);
      } catch (const inaut::Error &) {
        continue;
      }
      if (kb.relations().size() > before) ++made;
    }
    return kb;
  }

  // A random relation instance of `schema` over the KB's instances.
  inaut::kb::RelationInstance relation(const inaut::kb::KnowledgeBase &kb, const std::string &schema) {
    using namespace inaut::kb;
    std::vector<std::string> ids;
    for (const auto &[id, i] : kb.instances()) {
      if (!i.derived_from) ids.push_back(id);
    }
    std::shuffle(ids.begin(), ids.end(), rng_);
    RelationInstance ri;
    ri.schema = schema;
    const auto view = kb.schema(schema);
    if (!view->complex) {
      ri.members = {{kDomainRole, ids[0]}, {kRangeRole, ids[1]}};
      return ri;
    }
    size_t k = 0;
    for (const auto &r : view->member_roles) ri.members[r.name] = ids[k++];
    for (const auto &a : view->attribute_roles) {
      const ValueType *t = kb.find_value_type(a.value_type);
      ri.attributes[a.name] = t->values[index(t->values.size())].value;
    }
    return ri;
  }

  std::mt19937 &rng() { return rng_; }

 private:
  size_t index(size_t n) { return std::uniform_int_distribution<size_t>(0, n - 1)(rng_); }

  std::string pick(std::initializer_list<const char *> xs) {
    std::vector<const char *> v(xs);
    return v[index(v.size())];
  }

  // Consonant-vowel syllables, never a closed-list word; unique per KB.
  std::string word(int min_syl, int max_syl) {
    static const char *kSyl[] = {"ba", "ko", "ri", "tu", "ne", "so", "ma", "vi", "lo", "pe",
                                 "gu", "fa", "zo", "ti", "ra", "mu"};
    for (;;) {
      std::string w;
      const int n = std::uniform_int_distribution<int>(min_syl, max_syl)(rng_);
      for (int i = 0; i < n; ++i) w += kSyl[index(16)];
      if (used_.insert(w).second) return w;
    }
  }

  std::map<std::string, std::string> passive_forms(const std::string &stem) {
    return {{"m.sg", "est " + stem + "é"},
            {"f.sg", "est " + stem + "ée"},
            {"m.pl", "sont " + stem + "és"},
            {"f.pl", "sont " + stem + "ées"}};
  }
  std::map<std::string, std::string> active_forms(const std::string &stem) {
    return {{"sg", stem + "e"}, {"pl", stem + "ent"}};
  }

  inaut::kb::SimpleRelationSchema simple_schema(int i) {
    using namespace inaut::kb;
    const std::string stem = word(2, 2) + "l";
    SimpleRelationSchema s;
    s.id = "s" + std::to_string(i) + "_" + stem;
    s.name = "est " + stem + "é par";
    s.domain = "lieu";
    s.range = "lieu";
    const std::string prep = pick({"par", "sur", "vers", "avec", "de"});
    s.lexeme.voices.push_back({Voice::kPassive, kDomainRole, "", passive_forms(stem), {{kRangeRole, prep}}});
    if (std::uniform_int_distribution<int>(0, 1)(rng_)) {
      s.lexeme.voices.push_back({Voice::kActive, kRangeRole, kDomainRole, active_forms(stem), {}});
    }
    return s;
  }

  inaut::kb::ComplexRelationSchema complex_schema(int i) {
    using namespace inaut::kb;
    const std::string stem = word(2, 2) + "r";
    ComplexRelationSchema s;
    s.id = "c" + std::to_string(i) + "_" + stem;
    s.name = "est " + stem + "é";
    const int members = std::uniform_int_distribution<int>(2, 3)(rng_);
    const int attrs = std::uniform_int_distribution<int>(0, 2)(rng_);
    std::vector<std::string> member_preps = {"par", "sur", "avec", "dans", "sous", "de"};
    std::shuffle(member_preps.begin(), member_preps.end(), rng_);
    const std::vector<std::string> attr_preps = {"à", "vers"};
    for (int m = 0; m < members; ++m) s.member_roles.push_back({"m" + std::to_string(m), "lieu", 0});
    for (int a = 0; a < attrs; ++a) s.attribute_roles.push_back({"a" + std::to_string(a), "direction", 0, false});

    VoiceLexeme passive{Voice::kPassive, "m0", "", passive_forms(stem), {}};
    for (int m = 1; m < members; ++m) passive.complements.push_back({"m" + std::to_string(m), member_preps[m]});
    for (int a = 0; a < attrs; ++a) passive.complements.push_back({"a" + std::to_string(a), attr_preps[a]});
    std::shuffle(passive.complements.begin(), passive.complements.end(), rng_);
    s.lexeme.voices.push_back(passive);
    if (std::uniform_int_distribution<int>(0, 1)(rng_)) {
      VoiceLexeme active{Voice::kActive, "m1", "m0", active_forms(stem), {}};
      for (int m = 2; m < members; ++m) active.complements.push_back({"m" + std::to_string(m), member_preps[m]});
      for (int a = 0; a < attrs; ++a) active.complements.push_back({"a" + std::to_string(a), attr_preps[a]});
      s.lexeme.voices.push_back(active);
    }
    return s;
  }

  std::mt19937 rng_;
  std::set<std::string> used_;
};

}  // namespace testing

#endif  // INAUT_TESTS_RANDOM_KB_HPP_
