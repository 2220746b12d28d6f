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

#include <algorithm>

#include "inaut/french.hpp"
#include "inaut/grammar.hpp"

namespace inaut::grammar {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string &code, Span span, const std::string &msg,
                       std::vector<std::string> hints) {
  Diagnostic d;
  d.code = code;
  d.span = span;
  d.message = msg;
  d.hints = std::move(hints);
  throw DiagnosticError(d);
}

struct Filler {
  bool is_value = false;
  std::string id;          // instance id or value
  std::string value_type;  // for values
};

class Mapper {
 public:
  Mapper(const Sentence &s, const Lexicon &lex)
      : s_(s), lex_(lex), kb_(lex.kb()), view_(*kb_.schema(s.schema)),
        voice_(view_.lexeme->voices.at(s.voice)) {}

  Delta run() {
    assign_member(voice_.subject_role, s_.subject, s_.subject.span);
    if (s_.object) assign_member(voice_.object_role, *s_.object, s_.object->span);

    std::vector<bool> used(voice_.complements.size(), false);
    int group = 0;
    bool saw_default = false;
    for (const auto &pp : s_.pps) {
      if (pp.np.count) {
        check_default_text(pp);
        saw_default = true;
        continue;
      }
      if (literal_reading(pp, used, group)) continue;
      const Filler f = resolve(pp.np, pp.span);
      std::vector<size_t> cands;
      for (size_t k = 0; k < voice_.complements.size(); ++k) {
        const auto &c = voice_.complements[k];
        if (used[k] || c.prep != pp.prep) continue;
        if (!fits(c.role, f)) continue;
        cands.push_back(k);
      }
      if (cands.empty()) {
        std::vector<std::string> hints;
        for (size_t k = 0; k < voice_.complements.size(); ++k) {
          if (!used[k]) hints.push_back(voice_.complements[k].prep + " (" + voice_.complements[k].role + ")");
        }
        fail("RoleMismatch", pp.span,
             "no free role of '" + view_.id + "' is introduced by '" + pp.prep + "' with this filler",
             hints);
      }
      size_t pick = cands.front();
      if (group != 0) {
        for (size_t k : cands) {
          if (group_of(voice_.complements[k].role) == group) {
            pick = k;
            break;
          }
        }
      }
      used[pick] = true;
      const std::string &role = voice_.complements[pick].role;
      if (int g = group_of(role)) group = g;
      if (f.is_value) {
        delta_.relation.attributes[role] = f.id;
      } else {
        delta_.relation.members[role] = f.id;
      }
    }
    if (view_.default_text && !saw_default) {
      const int n = count_members();
      fail("DefaultTextMismatch", s_.verb.span,
           "'" + view_.id + "' states its number of " + view_.default_text->count_role + "s",
           {s_.verb.surface + " " + default_phrase(n)});
    }

    delta_.relation.schema = view_.id;
    kb::RelationInstance canon = kb::canonicalize(kb_, delta_.relation);
    const kb::KnowledgeBase *check_kb = &kb_;
    kb::KnowledgeBase extended;
    if (!delta_.derived.empty()) {
      extended = kb_;
      for (const auto &d : delta_.derived) extended.put_instance(d);
      check_kb = &extended;
    }
    const auto diags = kb::check_relation(*check_kb, canon);
    if (!diags.empty()) {
      std::vector<std::string> hints;
      for (const auto &r : view_.member_roles) {
        if (!canon.members.count(r.name)) hints.push_back("add " + r.name);
      }
      for (const auto &r : view_.attribute_roles) {
        if (!r.condition && !canon.attributes.count(r.name)) hints.push_back("add " + r.name);
      }
      if (hints.empty()) hints.push_back(diags.front().message);
      fail("SignatureViolation", s_.span, diags.front().message, hints);
    }
    delta_.relation = std::move(canon);
    return delta_;
  }

 private:
  int group_of(const std::string &role) const {
    if (const auto *m = view_.member_role(role)) return m->group;
    if (const auto *a = view_.attribute_role(role)) return a->group;
    return 0;
  }

  // "à l'Est du port" also reads as the attribute "à l'Est" followed by a
  // "de" member. That reading is taken only when no "à" member slot could
  // hold the derived instance; when both fit the sentence is ambiguous.
  bool literal_reading(const PrepPhrase &pp, std::vector<bool> &used, int &group) {
    const std::string &m = pp.np.modifier;
    if (m.empty()) return false;
    if (m.size() < 4 || m.compare(m.size() - 3, 3, " de") != 0) return false;
    std::string word = m.substr(0, m.size() - 3);
    if (word.rfind("à l'", 0) == 0) {
      word = word.substr(std::string("à l'").size());
    } else if (word.rfind("au ", 0) == 0) {
      word = word.substr(3);
    } else {
      return false;
    }
    const kb::Instance *base = base_instance(pp.np);
    if (base == nullptr) return false;

    std::optional<size_t> attr, member;
    std::string value;
    bool modifier_fits = false;
    for (size_t k = 0; k < voice_.complements.size(); ++k) {
      if (used[k]) continue;
      const auto &c = voice_.complements[k];
      if (c.prep == "à") {
        if (const auto *mr = view_.member_role(c.role); mr && kb_.instance_of(*base, mr->concept_id)) {
          modifier_fits = true;
        }
        if (const auto *ar = view_.attribute_role(c.role); ar && !attr) {
          if (const kb::ValueType *t = kb_.find_value_type(ar->value_type)) {
            for (const auto &v : t->values) {
              if (fr::fold(v.value) == fr::fold(word)) {
                attr = k;
                value = v.value;
              }
            }
          }
        }
      }
    }
    if (!attr) return false;
    for (size_t k = 0; k < voice_.complements.size() && !member; ++k) {
      const auto &c = voice_.complements[k];
      if (used[k] || k == *attr || c.prep != "de") continue;
      if (const auto *mr = view_.member_role(c.role); mr && kb_.instance_of(*base, mr->concept_id)) member = k;
    }
    if (!member) return false;
    if (modifier_fits) {
      fail("AmbiguityError", pp.span,
           "'" + m + "' reads both as a modifier and as '" + value + "' followed by 'de'", {});
    }
    NounPhrase np = pp.np;
    np.modifier.clear();
    const Filler f = resolve(np, pp.span);
    used[*attr] = used[*member] = true;
    delta_.relation.attributes[voice_.complements[*attr].role] = value;
    delta_.relation.members[voice_.complements[*member].role] = f.id;
    if (int g = group_of(voice_.complements[*member].role)) group = g;
    return true;
  }

  const kb::Instance *base_instance(const NounPhrase &np) const {
    if (np.entity) {
      const auto ids = lex_.entities(np.head);
      return ids.empty() ? nullptr : kb_.find_instance(ids.front());
    }
    for (const auto &s : np.senses) {
      if (s.kind == NounSense::Kind::kInstance) return kb_.find_instance(s.id);
    }
    return nullptr;
  }

  bool fits(const std::string &role, const Filler &f) const {
    if (const auto *m = view_.member_role(role)) {
      if (f.is_value) return false;
      const kb::Instance *inst = find_instance(f.id);
      return inst != nullptr && kb_.instance_of(*inst, m->concept_id);
    }
    if (const auto *a = view_.attribute_role(role)) {
      if (!f.is_value) return false;
      const kb::ValueType *t = kb_.find_value_type(a->value_type);
      return t != nullptr && t->accepts(f.id) &&
             (f.value_type.empty() || f.value_type == a->value_type ||
              t->kind != kb::ValueKind::kEnumerated);
    }
    return false;
  }

  const kb::Instance *find_instance(const std::string &id) const {
    for (const auto &d : delta_.derived) {
      if (d.id == id) return &d;
    }
    return kb_.find_instance(id);
  }

  int count_members() const {
    int n = 0;
    for (const auto &r : view_.member_roles) {
      if (kb::role_base_name(r.name) == view_.default_text->count_role) ++n;
    }
    return n;
  }

  std::string default_phrase(int n) const {
    const auto &dt = *view_.default_text;
    return dt.prep + " " + fr::numeral(n, kb::Gender::kFeminine) + " " +
           (n == 1 ? dt.singular : dt.plural);
  }

  void check_default_text(const PrepPhrase &pp) const {
    const int n = count_members();
    const std::string expected = default_phrase(n);
    if (!view_.default_text) {
      fail("RoleMismatch", pp.span, "'" + view_.id + "' has no counted complement", {});
    }
    const auto &dt = *view_.default_text;
    const bool noun_ok = (*pp.np.count == 1 ? dt.singular : dt.plural) == pp.np.head;
    if (pp.prep != dt.prep || *pp.np.count != n || !noun_ok || !pp.np.det.empty()) {
      fail("DefaultTextMismatch", pp.span,
           "'" + view_.id + "' has " + std::to_string(n) + " " + dt.count_role + " members",
           {expected});
    }
  }

  Filler resolve(const NounPhrase &np, Span span) {
    Filler f;
    if (np.entity) {
      const auto ids = lex_.entities(np.head);
      if (ids.empty()) {
        fail("UnresolvedEntity", span,
             "'[" + np.head + "]' is not a georeferenced entity",
             {np.head});
      }
      f.id = ids.front();
    } else {
      const NounSense *inst = nullptr, *val = nullptr;
      for (const auto &s : np.senses) {
        if (s.kind == NounSense::Kind::kInstance && !inst) inst = &s;
        if (s.kind == NounSense::Kind::kValue && !val) val = &s;
      }
      if (inst) {
        f.id = inst->id;
      } else if (val) {
        f.is_value = true;
        f.id = val->id;
        f.value_type = val->value_type;
      } else {
        fail("UnresolvedEntity", span, "'" + np.head + "' names no instance or value", {});
      }
    }
    if (!f.is_value) {
      const kb::Instance &base = *kb_.find_instance(f.id);
      attach_adjectives(np, base, span);
      delta_.observed_articles[base.id] =
          np.det.empty() ? kb::ArticlePolicy::kNone
          : (np.det == "un" || np.det == "une" || (np.det == "des" && !np.det_contracted))
              ? kb::ArticlePolicy::kIndefiniteAsObject
              : kb::ArticlePolicy::kDefinite;
      if (!np.modifier.empty()) f.id = derive(np.modifier, base, span);
    }
    return f;
  }

  void attach_adjectives(const NounPhrase &np, const kb::Instance &inst, Span span) {
    for (const auto &adj : np.adjectives) {
      bool done = false;
      for (const auto &[id, a] : kb_.attributes()) {
        if (!kb_.instance_of(inst, a.domain)) continue;
        const kb::ValueType *t = kb_.find_value_type(a.value_type);
        if (t == nullptr || t->find(adj) == nullptr) continue;
        delta_.attributes.push_back({inst.id, id, adj});
        done = true;
        break;
      }
      if (!done) {
        fail("SignatureViolation", span,
             "adjective '" + adj + "' does not apply to '" + inst.name + "'", {inst.name});
      }
    }
  }

  std::string derive(const std::string &modifier, const kb::Instance &base, Span span) {
    const geo::Modifier *m = lex_.modifiers().find(modifier);
    if (m == nullptr) fail("UnknownLexeme", span, "unknown modifier '" + modifier + "'", {});
    kb::Instance d;
    d.id = modifier + ":" + base.id;
    d.name = modifier + " " + base.name;
    d.concepts = base.concepts;
    d.agreement = base.agreement;
    d.article_policy = base.article_policy;
    d.derived_from = kb::DerivedFrom{modifier, base.id};
    if (base.geo_ref) {
      auto it = kb_.areas().find(*base.geo_ref);
      if (it != kb_.areas().end()) {
        geo::GeoPolygon area = geo::apply_modifier(*m, it->second);
        area.set_id(d.id);
        delta_.areas.insert_or_assign(d.id, std::move(area));
        d.georeferenced = true;
        d.geo_ref = d.id;
      }
    }
    kb::RelationInstance rel;
    rel.id = "mod:" + d.id;
    rel.schema = kb::kModifierSchema;
    rel.members = {{kb::kDomainRole, d.id}, {kb::kRangeRole, base.id}};
    if (std::none_of(delta_.derived.begin(), delta_.derived.end(),
                     [&](const kb::Instance &x) { return x.id == d.id; })) {
      delta_.derived.push_back(d);
      delta_.modifier_relations.push_back(std::move(rel));
    }
    return d.id;
  }

  void assign_member(const std::string &role, const NounPhrase &np, Span span) {
    const Filler f = resolve(np, span);
    if (f.is_value) {
      fail("RoleMismatch", span, "'" + np.head + "' is a value and cannot fill role '" + role + "'",
           {});
    }
    delta_.relation.members[role] = f.id;
  }

  const Sentence &s_;
  const Lexicon &lex_;
  const kb::KnowledgeBase &kb_;
  kb::SchemaView view_;
  const kb::VoiceLexeme &voice_;
  Delta delta_;
};

}  // namespace

Delta semantify(const Sentence &s, const Lexicon &lex) { return Mapper(s, lex).run(); }

std::string canonical_form(const Delta &d) {
  std::string out = kb::canonical_key(d.relation);
  for (const auto &r : d.modifier_relations) out += "\n" + kb::canonical_key(r);
  std::vector<std::string> attrs;
  for (const auto &a : d.attributes) attrs.push_back(a.instance + "#" + a.attribute + "=" + a.value);
  std::sort(attrs.begin(), attrs.end());
  for (const auto &a : attrs) out += "\n" + a;
  return out;
}

kb::KnowledgeBase apply_delta(const kb::KnowledgeBase &kb, const Delta &d) {
  kb::KnowledgeBase next = kb;
  for (const auto &inst : d.derived) {
    if (!next.find_instance(inst.id)) next.put_instance(inst);
  }
  for (const auto &[id, area] : d.areas) {
    if (!next.areas().count(id)) next.put_area(id, area);
  }
  for (const auto &r : d.modifier_relations) next = kb::add_relation_instance(next, r);
  for (const auto &a : d.attributes) next.put_attribute_instance(a);
  return kb::add_relation_instance(next, d.relation);
}

json delta_to_json(const Delta &d) {
  json derived = json::array();
  for (const auto &i : d.derived) derived.push_back(i.id);
  json attrs = json::array();
  for (const auto &a : d.attributes) {
    attrs.push_back({{"instance", a.instance}, {"attribute", a.attribute}, {"value", a.value}});
  }
  return {{"relation",
           {{"id", d.relation.id},
            {"schema", d.relation.schema},
            {"members", d.relation.members},
            {"attributes", d.relation.attributes}}},
          {"derived_instances", derived},
          {"attribute_instances", attrs}};
}

namespace {

void shift(Diagnostic &d, size_t offset) {
  d.span.begin += offset;
  d.span.end += offset;
}

}  // namespace

std::vector<Diagnostic> validate_segment(std::string_view text, const Lexicon &lex) {
  std::vector<Diagnostic> out;
  for (const Span &sp : split_sentences(text)) {
    const std::string_view sentence = text.substr(sp.begin, sp.end - sp.begin);
    std::vector<Diagnostic> local;
    try {
      const auto tokens = tokenize(sentence, lex);
      // Every unknown word, not only the first one the parser meets.
      for (const auto &t : tokens) {
        if (t.kind == TokenKind::kWord) {
          Diagnostic d;
          d.code = "UnknownLexeme";
          d.span = t.span;
          d.message = "unknown word '" + t.surface + "'";
          d.hints = lex.word_hints(t.surface);
          local.push_back(std::move(d));
        }
      }
      try {
        const Sentence s = parse(tokens, lex);
        for (auto &d : check_articles(s, lex)) local.push_back(std::move(d));
        semantify(s, lex);
      } catch (const DiagnosticError &e) {
        const Diagnostic &d = e.diagnostic();
        const bool dup = std::any_of(local.begin(), local.end(), [&](const Diagnostic &x) {
          return x.code == d.code && x.span == d.span;
        });
        if (!dup) local.push_back(d);
      }
    } catch (const DiagnosticError &e) {
      local.push_back(e.diagnostic());
    }
    std::stable_sort(local.begin(), local.end(), [](const Diagnostic &a, const Diagnostic &b) {
      return a.span.begin < b.span.begin;
    });
    for (auto &d : local) {
      shift(d, sp.begin);
      out.push_back(std::move(d));
    }
  }
  return out;
}

std::vector<Delta> semantify_segment(std::string_view text, const Lexicon &lex) {
  std::vector<Delta> out;
  for (const Span &sp : split_sentences(text)) {
    const std::string_view sentence = text.substr(sp.begin, sp.end - sp.begin);
    try {
      const Sentence s = parse(tokenize(sentence, lex), lex);
      auto diags = check_articles(s, lex);
      if (!diags.empty()) throw DiagnosticError(diags.front());
      out.push_back(semantify(s, lex));
    } catch (const DiagnosticError &e) {
      Diagnostic d = e.diagnostic();
      shift(d, sp.begin);
      throw DiagnosticError(d);
    }
  }
  return out;
}

}  // namespace inaut::grammar
