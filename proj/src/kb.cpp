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

#include "inaut/kb.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace inaut::kb {

using nlohmann::json;

namespace {

const char *kBuiltinTypes[] = {"text", "number", "boolean"};

bool is_builtin_type(const std::string &id) {
  for (const char *t : kBuiltinTypes) {
    if (id == t) return true;
  }
  return false;
}

bool parse_number(const std::string &s, double *out) {
  if (s.empty()) return false;
  char *end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  if (out != nullptr) *out = v;
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string Agreement::key() const {
  return std::string(gender == Gender::kFeminine ? "f" : "m") + "." + number_key();
}

std::string Agreement::number_key() const {
  return number == GrammaticalNumber::kPlural ? "pl" : "sg";
}

const ValueEntry *ValueType::find(const std::string &value) const {
  for (const auto &v : values) {
    if (v.value == value) return &v;
  }
  return nullptr;
}

bool ValueType::accepts(const std::string &value) const {
  switch (kind) {
    case ValueKind::kText:
      return true;
    case ValueKind::kNumber:
      return parse_number(value, nullptr);
    case ValueKind::kBoolean:
      return value == "true" || value == "false";
    case ValueKind::kEnumerated:
      return find(value) != nullptr;
  }
  return false;
}

std::optional<std::string> VoiceLexeme::form(const Agreement &a) const {
  if (auto it = forms.find(a.key()); it != forms.end()) return it->second;
  if (auto it = forms.find(a.number_key()); it != forms.end()) return it->second;
  return std::nullopt;
}

const MemberRole *SchemaView::member_role(const std::string &name) const {
  for (const auto &r : member_roles) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

const AttributeRole *SchemaView::attribute_role(const std::string &name) const {
  for (const auto &r : attribute_roles) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

std::string role_base_name(const std::string &role) {
  const auto pos = role.rfind('_');
  if (pos == std::string::npos || pos + 1 == role.size()) return role;
  for (size_t i = pos + 1; i < role.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(role[i]))) return role;
  }
  return role.substr(0, pos);
}

std::string to_string(Gender g) { return g == Gender::kFeminine ? "f" : "m"; }

std::string to_string(ArticlePolicy p) {
  switch (p) {
    case ArticlePolicy::kDefinite:
      return "definite";
    case ArticlePolicy::kNone:
      return "none";
    case ArticlePolicy::kIndefiniteAsObject:
      return "indefinite_as_object";
  }
  return "definite";
}

std::string to_string(Voice v) { return v == Voice::kActive ? "active" : "passive"; }

// ---------------------------------------------------------------------------

KnowledgeBase::KnowledgeBase() {
  value_types_["text"] = {"text", ValueKind::kText, {}};
  value_types_["number"] = {"number", ValueKind::kNumber, {}};
  value_types_["boolean"] = {"boolean", ValueKind::kBoolean, {}};
  SimpleRelationSchema modifier;
  modifier.id = kModifierSchema;
  modifier.name = kModifierSchema;
  simple_relations_[modifier.id] = modifier;
}

const ConceptSchema *KnowledgeBase::find_concept(const std::string &id) const {
  auto it = concepts_.find(id);
  return it == concepts_.end() ? nullptr : &it->second;
}

const Instance *KnowledgeBase::find_instance(const std::string &id) const {
  auto it = instances_.find(id);
  return it == instances_.end() ? nullptr : &it->second;
}

const RelationInstance *KnowledgeBase::find_relation(const std::string &id) const {
  auto it = relations_.find(id);
  return it == relations_.end() ? nullptr : &it->second;
}

const ValueType *KnowledgeBase::find_value_type(const std::string &id) const {
  auto it = value_types_.find(id);
  return it == value_types_.end() ? nullptr : &it->second;
}

std::optional<SchemaView> KnowledgeBase::schema(const std::string &id) const {
  if (auto it = simple_relations_.find(id); it != simple_relations_.end()) {
    const auto &s = it->second;
    SchemaView v;
    v.id = s.id;
    v.name = s.name;
    v.member_roles = {{kDomainRole, s.domain, 0}, {kRangeRole, s.range, 0}};
    v.lexeme = &s.lexeme;
    v.symmetric_of = s.symmetric_of;
    return v;
  }
  if (auto it = complex_relations_.find(id); it != complex_relations_.end()) {
    const auto &s = it->second;
    SchemaView v;
    v.id = s.id;
    v.name = s.name;
    v.complex = true;
    v.member_roles = s.member_roles;
    v.attribute_roles = s.attribute_roles;
    v.lexeme = &s.lexeme;
    v.default_text = s.default_text ? &*s.default_text : nullptr;
    return v;
  }
  return std::nullopt;
}

bool KnowledgeBase::subsumed_by(const std::string &concept_id,
                                const std::string &ancestor) const {
  if (ancestor.empty()) return true;
  return ancestors(concept_id).count(ancestor) > 0;
}

std::set<std::string> KnowledgeBase::ancestors(const std::string &concept_id) const {
  std::set<std::string> seen;
  std::vector<std::string> stack{concept_id};
  while (!stack.empty()) {
    std::string c = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(c).second) continue;
    if (const auto *cs = find_concept(c)) {
      for (const auto &p : cs->parents) stack.push_back(p);
    }
  }
  return seen;
}

bool KnowledgeBase::instance_of(const Instance &inst,
                                const std::string &concept_id) const {
  if (concept_id.empty()) return true;
  for (const auto &c : inst.concepts) {
    if (subsumed_by(c, concept_id)) return true;
  }
  return false;
}

void KnowledgeBase::put_concept(ConceptSchema c) { concepts_[c.id] = std::move(c); }
void KnowledgeBase::put_value_type(ValueType t) { value_types_[t.id] = std::move(t); }
void KnowledgeBase::put_attribute(AttributeSchema a) { attributes_[a.id] = std::move(a); }
void KnowledgeBase::put_simple_relation(SimpleRelationSchema s) {
  simple_relations_[s.id] = std::move(s);
}
void KnowledgeBase::put_complex_relation(ComplexRelationSchema s) {
  complex_relations_[s.id] = std::move(s);
}
void KnowledgeBase::put_instance(Instance i) { instances_[i.id] = std::move(i); }
void KnowledgeBase::put_relation(RelationInstance r) { relations_[r.id] = std::move(r); }
void KnowledgeBase::put_attribute_instance(AttributeInstance a) {
  attribute_instances_.insert(std::move(a));
}
void KnowledgeBase::put_area(const std::string &id, geo::GeoPolygon p) {
  p.set_id(id);
  areas_.insert_or_assign(id, std::move(p));
}
void KnowledgeBase::set_article_policy(const std::string &instance,
                                       ArticlePolicy policy) {
  if (auto it = instances_.find(instance); it != instances_.end()) {
    it->second.article_policy = policy;
  }
}

// ---------------------------------------------------------------------------

std::vector<KbDiagnostic> check_relation(const KnowledgeBase &kb,
                                         const RelationInstance &ri) {
  std::vector<KbDiagnostic> out;
  auto fail = [&](const std::string &rule, const std::string &msg) {
    out.push_back({ri.id, rule, msg});
  };
  const auto schema = kb.schema(ri.schema);
  if (!schema) {
    fail("unknown-schema", "relation schema '" + ri.schema + "' does not exist");
    return out;
  }
  for (const auto &role : schema->member_roles) {
    auto it = ri.members.find(role.name);
    if (it == ri.members.end()) {
      fail("signature-violation", "missing member role '" + role.name + "'");
      continue;
    }
    const Instance *inst = kb.find_instance(it->second);
    if (inst == nullptr) {
      fail("unknown-instance", "member '" + it->second + "' does not exist");
    } else if (!kb.instance_of(*inst, role.concept_id)) {
      fail("signature-violation", "member '" + inst->id + "' is not a '" +
                                      role.concept_id + "' as role '" + role.name +
                                      "' requires");
    }
  }
  for (const auto &[role, id] : ri.members) {
    if (schema->member_role(role) == nullptr) {
      fail("signature-violation", "unexpected member role '" + role + "'");
    }
  }
  for (const auto &role : schema->attribute_roles) {
    auto it = ri.attributes.find(role.name);
    if (it == ri.attributes.end()) {
      if (!role.condition) {
        fail("signature-violation", "missing attribute role '" + role.name + "'");
      }
      continue;
    }
    const ValueType *t = kb.find_value_type(role.value_type);
    if (t == nullptr || !t->accepts(it->second)) {
      fail("signature-violation", "value '" + it->second + "' is not of type '" +
                                      role.value_type + "'");
    }
  }
  for (const auto &[role, value] : ri.attributes) {
    if (schema->attribute_role(role) == nullptr) {
      fail("signature-violation", "unexpected attribute role '" + role + "'");
    }
  }
  return out;
}

std::vector<KbDiagnostic> validate_kb(const KnowledgeBase &kb) {
  std::vector<KbDiagnostic> out;
  auto add = [&](const std::string &entity, const std::string &rule,
                 const std::string &msg) { out.push_back({entity, rule, msg}); };

  // Concepts: parents exist, hierarchy acyclic, names unique.
  std::map<std::string, std::string> concept_names;
  for (const auto &[id, c] : kb.concepts()) {
    if (auto [it, fresh] = concept_names.emplace(c.name, id); !fresh) {
      add(id, "duplicate-name", "concept name '" + c.name + "' also used by '" +
                                    it->second + "'");
    }
    for (const auto &p : c.parents) {
      if (kb.find_concept(p) == nullptr) {
        add(id, "unknown-concept", "parent concept '" + p + "' does not exist");
      }
    }
  }
  {
    enum class Mark { kNone, kActive, kDone };
    std::map<std::string, Mark> mark;
    std::function<bool(const std::string &)> cyclic = [&](const std::string &c) {
      Mark &m = mark[c];
      if (m == Mark::kActive) return true;
      if (m == Mark::kDone) return false;
      m = Mark::kActive;
      if (const auto *cs = kb.find_concept(c)) {
        for (const auto &p : cs->parents) {
          if (cyclic(p)) return true;
        }
      }
      mark[c] = Mark::kDone;
      return false;
    };
    for (const auto &[id, c] : kb.concepts()) {
      mark.clear();
      if (cyclic(id)) add(id, "concept-cycle", "concept hierarchy has a cycle through '" + id + "'");
    }
  }

  for (const auto &[id, t] : kb.value_types()) {
    if (t.kind == ValueKind::kEnumerated && t.values.empty()) {
      add(id, "empty-enumeration", "enumerated type has no values");
    }
  }

  for (const auto &[id, a] : kb.attributes()) {
    if (kb.find_concept(a.domain) == nullptr) {
      add(id, "unknown-concept", "attribute domain '" + a.domain + "' does not exist");
    }
    if (kb.find_value_type(a.value_type) == nullptr) {
      add(id, "unknown-type", "attribute type '" + a.value_type + "' does not exist");
    }
  }

  auto check_lexeme = [&](const SchemaView &v) {
    for (const auto &voice : v.lexeme->voices) {
      auto known = [&](const std::string &role) {
        return v.member_role(role) != nullptr || v.attribute_role(role) != nullptr;
      };
      if (v.member_role(voice.subject_role) == nullptr) {
        add(v.id, "lexeme-invalid", "subject role '" + voice.subject_role + "' is not a member role");
      }
      if (!voice.object_role.empty() && v.member_role(voice.object_role) == nullptr) {
        add(v.id, "lexeme-invalid", "object role '" + voice.object_role + "' is not a member role");
      }
      if (voice.forms.empty()) add(v.id, "lexeme-invalid", "voice has no verb forms");
      for (const auto &c : voice.complements) {
        if (!known(c.role)) add(v.id, "lexeme-invalid", "complement role '" + c.role + "' is unknown");
      }
    }
  };

  for (const auto &[id, s] : kb.simple_relations()) {
    if (id == kModifierSchema) continue;
    if (!s.domain.empty() && kb.find_concept(s.domain) == nullptr) {
      add(id, "unknown-concept", "domain concept '" + s.domain + "' does not exist");
    }
    if (!s.range.empty() && kb.find_concept(s.range) == nullptr) {
      add(id, "unknown-concept", "range concept '" + s.range + "' does not exist");
    }
    if (s.symmetric_of) {
      auto it = kb.simple_relations().find(*s.symmetric_of);
      if (it == kb.simple_relations().end()) {
        add(id, "symmetric-mismatch", "symmetric relation '" + *s.symmetric_of + "' does not exist");
      } else if (it->second.symmetric_of != id || it->second.domain != s.range ||
                 it->second.range != s.domain) {
        add(id, "symmetric-mismatch", "symmetric link with '" + *s.symmetric_of +
                                          "' is not mutual with swapped domain and range");
      }
    }
    check_lexeme(*kb.schema(id));
  }

  for (const auto &[id, s] : kb.complex_relations()) {
    if (s.member_roles.size() < 2) {
      add(id, "complex-arity", "complex relation needs at least two member roles");
    }
    std::set<std::string> names;
    for (const auto &r : s.member_roles) {
      if (!names.insert(r.name).second) add(id, "duplicate-role", "role '" + r.name + "' repeated");
      if (kb.find_concept(r.concept_id) == nullptr) {
        add(id, "unknown-concept", "role concept '" + r.concept_id + "' does not exist");
      }
    }
    for (const auto &r : s.attribute_roles) {
      if (!names.insert(r.name).second) add(id, "duplicate-role", "role '" + r.name + "' repeated");
      if (kb.find_value_type(r.value_type) == nullptr) {
        add(id, "unknown-type", "role type '" + r.value_type + "' does not exist");
      }
    }
    check_lexeme(*kb.schema(id));
  }

  std::map<std::pair<std::string, std::string>, std::string> instance_names;
  for (const auto &[id, inst] : kb.instances()) {
    if (inst.concepts.empty()) {
      add(id, "instance-no-concept", "instance belongs to no concept");
    }
    for (const auto &c : inst.concepts) {
      if (kb.find_concept(c) == nullptr) {
        add(id, "unknown-concept", "concept '" + c + "' does not exist");
      }
    }
    if (inst.georeferenced != inst.geo_ref.has_value()) {
      add(id, "georef-mismatch", "georeferenced flag disagrees with geo_ref");
    }
    if (inst.geo_ref && !kb.areas().count(*inst.geo_ref)) {
      add(id, "unknown-area", "area '" + *inst.geo_ref + "' is not defined");
    }
    if (!inst.concepts.empty()) {
      auto key = std::make_pair(inst.concepts.front(), inst.name);
      if (auto [it, fresh] = instance_names.emplace(key, id); !fresh) {
        add(id, "duplicate-name", "instance name '" + inst.name + "' also used by '" +
                                      it->second + "'");
      }
    }
    if (inst.derived_from && kb.find_instance(inst.derived_from->base) == nullptr) {
      add(id, "unknown-instance", "derived from missing instance '" + inst.derived_from->base + "'");
    }
  }

  for (const auto &[id, ri] : kb.relations()) {
    for (auto &d : check_relation(kb, ri)) out.push_back(std::move(d));
  }

  for (const auto &ai : kb.attribute_instances()) {
    auto it = kb.attributes().find(ai.attribute);
    const Instance *inst = kb.find_instance(ai.instance);
    if (it == kb.attributes().end()) {
      add(ai.instance, "unknown-attribute", "attribute '" + ai.attribute + "' does not exist");
      continue;
    }
    if (inst == nullptr) {
      add(ai.instance, "unknown-instance", "attribute holder does not exist");
      continue;
    }
    if (!kb.instance_of(*inst, it->second.domain)) {
      add(ai.instance, "signature-violation", "attribute '" + ai.attribute +
                                                  "' does not apply to this instance");
    }
    const ValueType *t = kb.find_value_type(it->second.value_type);
    if (t == nullptr || !t->accepts(ai.value)) {
      add(ai.instance, "signature-violation", "value '" + ai.value + "' is not of type '" +
                                                  it->second.value_type + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

std::string canonical_key(const RelationInstance &ri) {
  std::string key = ri.schema;
  key += '\x1f';
  for (const auto &[role, id] : ri.members) key += role + '=' + id + '\x1e';
  key += '\x1f';
  for (const auto &[role, value] : ri.attributes) key += role + '=' + value + '\x1e';
  return key;
}

namespace {

std::string hex64(uint64_t v) {
  static const char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return s;
}

uint64_t fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

RelationInstance canonicalize(const KnowledgeBase &kb, RelationInstance ri) {
  auto it = kb.simple_relations().find(ri.schema);
  if (it != kb.simple_relations().end() && it->second.symmetric_of &&
      *it->second.symmetric_of < ri.schema &&
      kb.simple_relations().count(*it->second.symmetric_of)) {
    ri.schema = *it->second.symmetric_of;
    auto d = ri.members.find(kDomainRole);
    auto r = ri.members.find(kRangeRole);
    if (d != ri.members.end() && r != ri.members.end()) std::swap(d->second, r->second);
  }
  if (ri.id.empty()) ri.id = "ri-" + hex64(fnv1a(canonical_key(ri)));
  return ri;
}

KnowledgeBase add_relation_instance(const KnowledgeBase &kb, RelationInstance ri) {
  if (!kb.schema(ri.schema)) {
    throw UnknownSchema("relation schema '" + ri.schema + "' does not exist");
  }
  for (const auto &[role, id] : ri.members) {
    if (kb.find_instance(id) == nullptr) {
      throw UnknownInstance("instance '" + id + "' does not exist");
    }
  }
  ri = canonicalize(kb, std::move(ri));
  const auto diags = check_relation(kb, ri);
  if (!diags.empty()) throw SignatureMismatch(diags.front().message);
  const std::string key = canonical_key(ri);
  for (const auto &[id, existing] : kb.relations()) {
    if (canonical_key(existing) == key) return kb;
  }
  if (kb.find_relation(ri.id) != nullptr) {
    throw KbConflict("relation id '" + ri.id + "' is already used by another fact");
  }
  KnowledgeBase next = kb;
  next.put_relation(std::move(ri));
  return next;
}

Lexicalization lexicalize(const KnowledgeBase &kb, const std::string &entity_id) {
  if (const auto *inst = kb.find_instance(entity_id)) return {inst->name, {}, {}};
  if (const auto *c = kb.find_concept(entity_id)) return {c->name, {}, {}};
  if (auto it = kb.attributes().find(entity_id); it != kb.attributes().end()) {
    return {it->second.name, {}, {}};
  }
  if (auto it = kb.simple_relations().find(entity_id); it != kb.simple_relations().end()) {
    return {it->second.name, {}, {}};
  }
  if (auto it = kb.complex_relations().find(entity_id); it != kb.complex_relations().end()) {
    Lexicalization lex{it->second.name, {}, {}};
    for (const auto &r : it->second.member_roles) lex.member_roles.push_back(r.name);
    for (const auto &r : it->second.attribute_roles) lex.attribute_roles.push_back(r.name);
    return lex;
  }
  throw UnknownEntity("no entity with id '" + entity_id + "'");
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

std::string kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::kText:
      return "text";
    case ValueKind::kNumber:
      return "number";
    case ValueKind::kEnumerated:
      return "enumerated";
    case ValueKind::kBoolean:
      return "boolean";
  }
  return "text";
}

json agreement_json(const Agreement &a, json j) {
  j["gender"] = to_string(a.gender);
  j["number"] = a.number_key();
  return j;
}

json lexeme_json(const Lexeme &lex) {
  json voices = json::array();
  for (const auto &v : lex.voices) {
    json jv = {{"voice", to_string(v.voice)},
               {"subject", v.subject_role},
               {"forms", v.forms},
               {"complements", json::array()}};
    if (!v.object_role.empty()) jv["object"] = v.object_role;
    for (const auto &c : v.complements) {
      jv["complements"].push_back({{"role", c.role}, {"prep", c.prep}});
    }
    voices.push_back(std::move(jv));
  }
  return {{"voices", voices}};
}

json typed_value(const KnowledgeBase &kb, const std::string &type,
                 const std::string &value) {
  const ValueType *t = kb.find_value_type(type);
  if (t != nullptr && t->kind == ValueKind::kNumber) {
    double d;
    if (parse_number(value, &d)) return json::parse(value);
  }
  if (t != nullptr && t->kind == ValueKind::kBoolean) {
    if (value == "true") return true;
    if (value == "false") return false;
  }
  return value;
}

std::string value_text(const json &j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_boolean()) return j.get<bool>() ? "true" : "false";
  if (j.is_number()) return j.dump();
  throw ParseError("attribute value must be a string, number or boolean", 0, 0);
}

}  // namespace

std::string persist(const KnowledgeBase &kb) {
  json root;
  root["schema_version"] = kSchemaVersion;

  json concepts = json::array();
  for (const auto &[id, c] : kb.concepts()) {
    concepts.push_back({{"id", c.id}, {"name", c.name}, {"parents", c.parents}});
  }
  root["concepts"] = concepts;

  json types = json::array();
  for (const auto &[id, t] : kb.value_types()) {
    if (is_builtin_type(id) && t.values.empty()) continue;
    json jt = {{"id", t.id}, {"kind", kind_name(t.kind)}, {"values", json::array()}};
    for (const auto &v : t.values) {
      json jv = agreement_json(v.agreement, {{"value", v.value}});
      if (v.adjective) jv["adjective"] = true;
      if (v.elision) jv["elision"] = *v.elision;
      jt["values"].push_back(std::move(jv));
    }
    types.push_back(std::move(jt));
  }
  root["value_types"] = types;

  json attributes = json::array();
  for (const auto &[id, a] : kb.attributes()) {
    attributes.push_back({{"id", a.id}, {"name", a.name}, {"domain", a.domain},
                          {"value_type", a.value_type}});
  }
  root["attributes"] = attributes;

  json simple = json::array();
  for (const auto &[id, s] : kb.simple_relations()) {
    if (id == kModifierSchema) continue;
    json js = {{"id", s.id}, {"name", s.name}, {"domain", s.domain},
               {"range", s.range}, {"lexeme", lexeme_json(s.lexeme)}};
    if (s.symmetric_of) js["symmetric_of"] = *s.symmetric_of;
    simple.push_back(std::move(js));
  }
  root["simple_relations"] = simple;

  json complex = json::array();
  for (const auto &[id, s] : kb.complex_relations()) {
    json js = {{"id", s.id}, {"name", s.name}, {"member_roles", json::array()},
               {"attribute_roles", json::array()}, {"lexeme", lexeme_json(s.lexeme)}};
    for (const auto &r : s.member_roles) {
      json jr = {{"name", r.name}, {"concept", r.concept_id}};
      if (r.group != 0) jr["group"] = r.group;
      js["member_roles"].push_back(std::move(jr));
    }
    for (const auto &r : s.attribute_roles) {
      json jr = {{"name", r.name}, {"value_type", r.value_type}};
      if (r.group != 0) jr["group"] = r.group;
      if (r.condition) jr["condition"] = true;
      js["attribute_roles"].push_back(std::move(jr));
    }
    if (s.default_text) {
      js["default_text"] = {{"prep", s.default_text->prep},
                            {"singular", s.default_text->singular},
                            {"plural", s.default_text->plural},
                            {"count_role", s.default_text->count_role}};
    }
    complex.push_back(std::move(js));
  }
  root["complex_relations"] = complex;

  json instances = json::array();
  for (const auto &[id, i] : kb.instances()) {
    json ji = agreement_json(i.agreement, {{"id", i.id},
                                           {"name", i.name},
                                           {"concepts", i.concepts},
                                           {"georeferenced", i.georeferenced},
                                           {"article_policy", to_string(i.article_policy)}});
    if (i.geo_ref) ji["geo_ref"] = *i.geo_ref;
    if (i.derived_from) {
      ji["derived_from"] = {{"modifier", i.derived_from->modifier},
                            {"base", i.derived_from->base}};
    }
    instances.push_back(std::move(ji));
  }
  root["instances"] = instances;

  json relations = json::array();
  for (const auto &[id, r] : kb.relations()) {
    json attrs = json::object();
    const auto view = kb.schema(r.schema);
    for (const auto &[role, value] : r.attributes) {
      const AttributeRole *ar = view ? view->attribute_role(role) : nullptr;
      attrs[role] = ar ? typed_value(kb, ar->value_type, value) : json(value);
    }
    relations.push_back({{"id", r.id}, {"schema", r.schema},
                         {"members", r.members}, {"attributes", attrs}});
  }
  root["relation_instances"] = relations;

  json attr_instances = json::array();
  for (const auto &ai : kb.attribute_instances()) {
    auto it = kb.attributes().find(ai.attribute);
    json value = it != kb.attributes().end()
                     ? typed_value(kb, it->second.value_type, ai.value)
                     : json(ai.value);
    attr_instances.push_back(
        {{"instance", ai.instance}, {"attribute", ai.attribute}, {"value", value}});
  }
  root["attribute_instances"] = attr_instances;
  root["areas"] = geo::areas_to_geojson(kb.areas());
  return root.dump(2) + "\n";
}

namespace {

std::string str(const json &j, const char *key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ParseError(std::string("missing string field '") + key + "'", 0, 0);
  }
  return j[key].get<std::string>();
}

std::string opt_str(const json &j, const char *key, const std::string &def = {}) {
  if (!j.contains(key) || j[key].is_null()) return def;
  if (!j[key].is_string()) {
    throw ParseError(std::string("field '") + key + "' must be a string", 0, 0);
  }
  return j[key].get<std::string>();
}

const json &arr(const json &j, const char *key) {
  static const json empty = json::array();
  if (!j.contains(key)) return empty;
  if (!j[key].is_array()) {
    throw ParseError(std::string("field '") + key + "' must be an array", 0, 0);
  }
  return j[key];
}

Agreement read_agreement(const json &j) {
  Agreement a;
  const std::string g = opt_str(j, "gender", "m");
  const std::string n = opt_str(j, "number", "sg");
  if (g != "m" && g != "f") throw ParseError("gender must be 'm' or 'f'", 0, 0);
  if (n != "sg" && n != "pl") throw ParseError("number must be 'sg' or 'pl'", 0, 0);
  a.gender = g == "f" ? Gender::kFeminine : Gender::kMasculine;
  a.number = n == "pl" ? GrammaticalNumber::kPlural : GrammaticalNumber::kSingular;
  return a;
}

Lexeme read_lexeme(const json &j) {
  Lexeme lex;
  if (!j.is_object()) return lex;
  for (const auto &jv : arr(j, "voices")) {
    VoiceLexeme v;
    const std::string voice = opt_str(jv, "voice", "passive");
    if (voice != "active" && voice != "passive") {
      throw ParseError("voice must be 'active' or 'passive'", 0, 0);
    }
    v.voice = voice == "active" ? Voice::kActive : Voice::kPassive;
    v.subject_role = str(jv, "subject");
    v.object_role = opt_str(jv, "object");
    if (jv.contains("forms")) v.forms = jv["forms"].get<std::map<std::string, std::string>>();
    for (const auto &jc : arr(jv, "complements")) {
      v.complements.push_back({str(jc, "role"), str(jc, "prep")});
    }
    lex.voices.push_back(std::move(v));
  }
  return lex;
}

ValueKind read_kind(const std::string &k) {
  if (k == "text") return ValueKind::kText;
  if (k == "number") return ValueKind::kNumber;
  if (k == "enumerated") return ValueKind::kEnumerated;
  if (k == "boolean") return ValueKind::kBoolean;
  throw ParseError("unknown value kind '" + k + "'", 0, 0);
}

ArticlePolicy read_policy(const std::string &p) {
  if (p == "definite") return ArticlePolicy::kDefinite;
  if (p == "none") return ArticlePolicy::kNone;
  if (p == "indefinite_as_object") return ArticlePolicy::kIndefiniteAsObject;
  throw ParseError("unknown article policy '" + p + "'", 0, 0);
}

std::pair<int, int> line_column(std::string_view text, size_t byte) {
  int line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

KnowledgeBase load(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error &e) {
    const size_t at = e.byte > 0 ? e.byte - 1 : 0;
    auto [line, col] = line_column(bytes, at);
    throw ParseError(std::string("malformed KB JSON: ") + e.what(), line, col);
  }
  if (!root.is_object()) throw ParseError("KB file must be a JSON object", 1, 1);
  if (!root.contains("schema_version") || !root["schema_version"].is_number_integer()) {
    throw ParseError("missing integer field 'schema_version'", 0, 0);
  }
  if (root["schema_version"].get<int>() != kSchemaVersion) {
    throw SchemaVersionMismatch("KB schema_version " + root["schema_version"].dump() +
                                " is not supported (expected " +
                                std::to_string(kSchemaVersion) + ")");
  }

  KnowledgeBase kb;
  try {
    for (const auto &j : arr(root, "concepts")) {
      ConceptSchema c{str(j, "id"), str(j, "name"), {}};
      if (j.contains("parents")) c.parents = j["parents"].get<std::vector<std::string>>();
      kb.put_concept(std::move(c));
    }
    for (const auto &j : arr(root, "value_types")) {
      ValueType t{str(j, "id"), read_kind(str(j, "kind")), {}};
      for (const auto &jv : arr(j, "values")) {
        ValueEntry v;
        v.value = str(jv, "value");
        v.adjective = jv.value("adjective", false);
        v.agreement = read_agreement(jv);
        if (jv.contains("elision")) v.elision = jv["elision"].get<bool>();
        t.values.push_back(std::move(v));
      }
      kb.put_value_type(std::move(t));
    }
    for (const auto &j : arr(root, "attributes")) {
      kb.put_attribute({str(j, "id"), str(j, "name"), str(j, "domain"), str(j, "value_type")});
    }
    for (const auto &j : arr(root, "simple_relations")) {
      SimpleRelationSchema s;
      s.id = str(j, "id");
      if (s.id == kModifierSchema) continue;
      s.name = str(j, "name");
      s.domain = opt_str(j, "domain");
      s.range = opt_str(j, "range");
      if (j.contains("symmetric_of") && !j["symmetric_of"].is_null()) {
        s.symmetric_of = str(j, "symmetric_of");
      }
      if (j.contains("lexeme")) s.lexeme = read_lexeme(j["lexeme"]);
      kb.put_simple_relation(std::move(s));
    }
    for (const auto &j : arr(root, "complex_relations")) {
      ComplexRelationSchema s;
      s.id = str(j, "id");
      s.name = str(j, "name");
      for (const auto &jr : arr(j, "member_roles")) {
        s.member_roles.push_back({str(jr, "name"), str(jr, "concept"), jr.value("group", 0)});
      }
      for (const auto &jr : arr(j, "attribute_roles")) {
        s.attribute_roles.push_back({str(jr, "name"), str(jr, "value_type"),
                                     jr.value("group", 0), jr.value("condition", false)});
      }
      if (j.contains("lexeme")) s.lexeme = read_lexeme(j["lexeme"]);
      if (j.contains("default_text") && j["default_text"].is_object()) {
        const auto &d = j["default_text"];
        s.default_text = DefaultTextRule{str(d, "prep"), str(d, "singular"),
                                         str(d, "plural"), str(d, "count_role")};
      }
      kb.put_complex_relation(std::move(s));
    }
    for (const auto &j : arr(root, "instances")) {
      Instance i;
      i.id = str(j, "id");
      i.name = str(j, "name");
      if (j.contains("concepts")) i.concepts = j["concepts"].get<std::vector<std::string>>();
      i.georeferenced = j.value("georeferenced", false);
      if (j.contains("geo_ref") && !j["geo_ref"].is_null()) i.geo_ref = str(j, "geo_ref");
      i.agreement = read_agreement(j);
      i.article_policy = read_policy(opt_str(j, "article_policy", "definite"));
      if (j.contains("derived_from") && j["derived_from"].is_object()) {
        i.derived_from = DerivedFrom{str(j["derived_from"], "modifier"),
                                     str(j["derived_from"], "base")};
      }
      kb.put_instance(std::move(i));
    }
    for (const auto &j : arr(root, "relation_instances")) {
      RelationInstance r;
      r.id = str(j, "id");
      r.schema = str(j, "schema");
      if (j.contains("members")) r.members = j["members"].get<std::map<std::string, std::string>>();
      if (j.contains("attributes")) {
        for (const auto &[k, v] : j["attributes"].items()) r.attributes[k] = value_text(v);
      }
      kb.put_relation(std::move(r));
    }
    for (const auto &j : arr(root, "attribute_instances")) {
      kb.put_attribute_instance({str(j, "instance"), str(j, "attribute"),
                                 value_text(j.at("value"))});
    }
    if (root.contains("areas")) {
      for (auto &[id, poly] : geo::areas_from_geojson(root["areas"])) {
        kb.put_area(id, std::move(poly));
      }
    }
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed KB structure: ") + e.what(), 0, 0);
  }
  return kb;
}

KnowledgeBase load_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load(ss.str());
}

}  // namespace inaut::kb
