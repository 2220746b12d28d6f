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

// The maritime knowledge base: concepts and their hierarchy, attribute and
// relation schemas, typed values, instances, relation instances, and the
// lexical tables used by the grammar and the generator.
//
// A KnowledgeBase is a plain value. Update operations take a const
// reference and return a new value, so a snapshot that has been handed out
// never changes.

#ifndef INAUT_KB_HPP_
#define INAUT_KB_HPP_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "inaut/errors.hpp"
#include "inaut/geo.hpp"

namespace inaut::kb {

inline constexpr int kSchemaVersion = 1;

// Role names of the two members of a simple relation.
inline constexpr const char *kDomainRole = "domain";
inline constexpr const char *kRangeRole = "range";

// Built-in simple relation linking a modifier-derived instance (domain) to
// the instance it was derived from (range). It produces no text.
inline constexpr const char *kModifierSchema = "modifier";

enum class ValueKind { kText, kNumber, kEnumerated, kBoolean };
enum class Gender { kMasculine, kFeminine };
enum class GrammaticalNumber { kSingular, kPlural };
enum class ArticlePolicy { kDefinite, kNone, kIndefiniteAsObject };
enum class Voice { kActive, kPassive };

struct Agreement {
  Gender gender = Gender::kMasculine;
  GrammaticalNumber number = GrammaticalNumber::kSingular;

  // "m.sg", "f.pl", ...
  std::string key() const;
  std::string number_key() const;  // "sg" / "pl"
  friend bool operator==(const Agreement &, const Agreement &) = default;
};

struct ConceptSchema {
  std::string id;
  std::string name;
  std::vector<std::string> parents;
  friend bool operator==(const ConceptSchema &, const ConceptSchema &) = default;
};

struct ValueEntry {
  std::string value;
  bool adjective = false;  // realized as ADJ rather than NOUN
  Agreement agreement;
  std::optional<bool> elision;  // overrides the vowel rule
  friend bool operator==(const ValueEntry &, const ValueEntry &) = default;
};

// An element of T. Enumerated types list their values; text, number and
// boolean types accept any value of that kind.
struct ValueType {
  std::string id;
  ValueKind kind = ValueKind::kText;
  std::vector<ValueEntry> values;

  const ValueEntry *find(const std::string &value) const;
  bool accepts(const std::string &value) const;
  friend bool operator==(const ValueType &, const ValueType &) = default;
};

struct AttributeSchema {
  std::string id;
  std::string name;
  std::string domain;      // concept id
  std::string value_type;  // ValueType id
  friend bool operator==(const AttributeSchema &, const AttributeSchema &) = default;
};

// One complement slot of a voice frame: the role it realizes and the
// preposition introducing it. A prep of "à" also admits a locative modifier
// phrase ("au fond de ...") in place of the preposition.
struct Complement {
  std::string role;
  std::string prep;
  friend bool operator==(const Complement &, const Complement &) = default;
};

// Surface frame of one voice of a relation verb. `forms` maps an
// agreement key ("f.sg") or a number key ("sg") to the inflected verb
// group, e.g. "est limitée" or "limite".
struct VoiceLexeme {
  Voice voice = Voice::kPassive;
  std::string subject_role;
  std::string object_role;  // empty: intransitive frame
  std::map<std::string, std::string> forms;
  std::vector<Complement> complements;

  // Inflected form agreeing with `a`; nullopt when not lexicalized.
  std::optional<std::string> form(const Agreement &a) const;
  friend bool operator==(const VoiceLexeme &, const VoiceLexeme &) = default;
};

struct Lexeme {
  std::vector<VoiceLexeme> voices;  // voices[0] is the primary voice
  friend bool operator==(const Lexeme &, const Lexeme &) = default;
};

struct SimpleRelationSchema {
  std::string id;
  std::string name;
  std::string domain;  // concept id; empty accepts any concept
  std::string range;
  std::optional<std::string> symmetric_of;
  Lexeme lexeme;
  friend bool operator==(const SimpleRelationSchema &,
                         const SimpleRelationSchema &) = default;
};

// Roles sharing a non-zero group index are realized next to each other
// (e.g. diviseur_1 then à_1).
struct MemberRole {
  std::string name;
  std::string concept_id;
  int group = 0;
  friend bool operator==(const MemberRole &, const MemberRole &) = default;
};

// Condition roles (validity window, depth limits) restrict when a fact
// applies; they are filtered on, not realized.
struct AttributeRole {
  std::string name;
  std::string value_type;
  int group = 0;
  bool condition = false;
  friend bool operator==(const AttributeRole &, const AttributeRole &) = default;
};

// Text generated by default: counting members whose role base name is
// `count_role` yields "<prep> <numeral> <noun>", e.g. "en deux parties".
struct DefaultTextRule {
  std::string prep;
  std::string singular;
  std::string plural;
  std::string count_role;
  friend bool operator==(const DefaultTextRule &, const DefaultTextRule &) = default;
};

struct ComplexRelationSchema {
  std::string id;
  std::string name;
  std::vector<MemberRole> member_roles;
  std::vector<AttributeRole> attribute_roles;
  Lexeme lexeme;
  std::optional<DefaultTextRule> default_text;
  friend bool operator==(const ComplexRelationSchema &,
                         const ComplexRelationSchema &) = default;
};

struct DerivedFrom {
  std::string modifier;
  std::string base;  // instance id
  friend bool operator==(const DerivedFrom &, const DerivedFrom &) = default;
};

struct Instance {
  std::string id;
  std::string name;
  std::vector<std::string> concepts;  // first one is predominant
  bool georeferenced = false;
  std::optional<std::string> geo_ref;  // area node id
  Agreement agreement;
  ArticlePolicy article_policy = ArticlePolicy::kDefinite;
  std::optional<DerivedFrom> derived_from;
  friend bool operator==(const Instance &, const Instance &) = default;
};

struct RelationInstance {
  std::string id;
  std::string schema;
  std::map<std::string, std::string> members;     // role -> instance id
  std::map<std::string, std::string> attributes;  // role -> value
  friend bool operator==(const RelationInstance &, const RelationInstance &) = default;
};

struct AttributeInstance {
  std::string instance;
  std::string attribute;
  std::string value;
  auto operator<=>(const AttributeInstance &) const = default;
};

// Uniform view over simple and complex relation schemas.
struct SchemaView {
  std::string id;
  std::string name;
  bool complex = false;
  std::vector<MemberRole> member_roles;
  std::vector<AttributeRole> attribute_roles;
  const Lexeme *lexeme = nullptr;
  const DefaultTextRule *default_text = nullptr;
  std::optional<std::string> symmetric_of;

  const MemberRole *member_role(const std::string &name) const;
  const AttributeRole *attribute_role(const std::string &name) const;
};

class KnowledgeBase {
 public:
  KnowledgeBase();

  const std::map<std::string, ConceptSchema> &concepts() const { return concepts_; }
  const std::map<std::string, ValueType> &value_types() const { return value_types_; }
  const std::map<std::string, AttributeSchema> &attributes() const { return attributes_; }
  const std::map<std::string, SimpleRelationSchema> &simple_relations() const {
    return simple_relations_;
  }
  const std::map<std::string, ComplexRelationSchema> &complex_relations() const {
    return complex_relations_;
  }
  const std::map<std::string, Instance> &instances() const { return instances_; }
  const std::map<std::string, RelationInstance> &relations() const { return relations_; }
  const std::set<AttributeInstance> &attribute_instances() const {
    return attribute_instances_;
  }
  const std::map<std::string, geo::GeoPolygon> &areas() const { return areas_; }

  const ConceptSchema *find_concept(const std::string &id) const;
  const Instance *find_instance(const std::string &id) const;
  const RelationInstance *find_relation(const std::string &id) const;
  const ValueType *find_value_type(const std::string &id) const;
  std::optional<SchemaView> schema(const std::string &id) const;

  // Reflexive-transitive closure of the parent links (≤_C).
  bool subsumed_by(const std::string &concept_id, const std::string &ancestor) const;
  // The concept and all its ancestors.
  std::set<std::string> ancestors(const std::string &concept_id) const;
  bool instance_of(const Instance &inst, const std::string &concept_id) const;

  // Raw insertion used by loaders and delta application. No validation
  // beyond id uniqueness; validate_kb reports the rest.
  void put_concept(ConceptSchema c);
  void put_value_type(ValueType t);
  void put_attribute(AttributeSchema a);
  void put_simple_relation(SimpleRelationSchema s);
  void put_complex_relation(ComplexRelationSchema s);
  void put_instance(Instance i);
  void put_relation(RelationInstance r);
  void put_attribute_instance(AttributeInstance a);
  void put_area(const std::string &id, geo::GeoPolygon p);
  void set_article_policy(const std::string &instance, ArticlePolicy policy);

  friend bool operator==(const KnowledgeBase &, const KnowledgeBase &) = default;

 private:
  std::map<std::string, ConceptSchema> concepts_;
  std::map<std::string, ValueType> value_types_;
  std::map<std::string, AttributeSchema> attributes_;
  std::map<std::string, SimpleRelationSchema> simple_relations_;
  std::map<std::string, ComplexRelationSchema> complex_relations_;
  std::map<std::string, Instance> instances_;
  std::map<std::string, RelationInstance> relations_;
  std::set<AttributeInstance> attribute_instances_;
  std::map<std::string, geo::GeoPolygon> areas_;
};

struct KbDiagnostic {
  std::string entity;
  std::string rule;
  std::string message;
};

// Checks every schema, signature and instance invariant. Returns an empty
// list iff the KB is well formed.
std::vector<KbDiagnostic> validate_kb(const KnowledgeBase &kb);

// Signature check of a single relation instance; empty when it conforms.
std::vector<KbDiagnostic> check_relation(const KnowledgeBase &kb,
                                         const RelationInstance &ri);

// Maps a relation stated through the non-canonical side of a symmetric
// pair onto its canonical schema (members swapped) and assigns a
// content-derived id when `ri.id` is empty.
RelationInstance canonicalize(const KnowledgeBase &kb, RelationInstance ri);

// Identity of a fact regardless of its id: schema, members, attributes.
std::string canonical_key(const RelationInstance &ri);

// Returns a new KB containing `ri`. Resubmitting an identical fact is a
// no-op. Throws UnknownSchema, UnknownInstance or SignatureMismatch.
KnowledgeBase add_relation_instance(const KnowledgeBase &kb, RelationInstance ri);

struct Lexicalization {
  std::string name;
  std::vector<std::string> member_roles;
  std::vector<std::string> attribute_roles;
  friend bool operator==(const Lexicalization &, const Lexicalization &) = default;
};

// Surface name(s) of a concept, attribute, relation schema or instance.
// Complex relation schemas yield their name plus role names. Throws
// UnknownEntity.
Lexicalization lexicalize(const KnowledgeBase &kb, const std::string &entity_id);

// JSON persistence with sorted keys and id-ordered arrays.
std::string persist(const KnowledgeBase &kb);
KnowledgeBase load(std::string_view bytes);
KnowledgeBase load_file(const std::string &path);

// Base name of a grouped role: "diviseur_2" -> "diviseur".
std::string role_base_name(const std::string &role);

std::string to_string(Gender g);
std::string to_string(ArticlePolicy p);
std::string to_string(Voice v);

}  // namespace inaut::kb

#endif  // INAUT_KB_HPP_
