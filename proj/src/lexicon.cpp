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

const std::pair<const char *, geo::ModifierKind> kKindNames[] = {
    {"north", geo::ModifierKind::kNorth},
    {"south", geo::ModifierKind::kSouth},
    {"east", geo::ModifierKind::kEast},
    {"west", geo::ModifierKind::kWest},
    {"north_east", geo::ModifierKind::kNorthEast},
    {"north_west", geo::ModifierKind::kNorthWest},
    {"south_east", geo::ModifierKind::kSouthEast},
    {"south_west", geo::ModifierKind::kSouthWest},
    {"innermost", geo::ModifierKind::kInnermost},
    {"entrance", geo::ModifierKind::kEntrance},
    {"surroundings", geo::ModifierKind::kSurroundings},
};

geo::ModifierKind kind_from(const std::string &s) {
  for (const auto &[name, kind] : kKindNames) {
    if (s == name) return kind;
  }
  throw ConfigError("unknown modifier kind '" + s + "'");
}

std::string kind_to(geo::ModifierKind k) {
  for (const auto &[name, kind] : kKindNames) {
    if (k == kind) return name;
  }
  return "north";
}

std::string norm_apostrophe(std::string s) {
  for (size_t pos; (pos = s.find("\xE2\x80\x99")) != std::string::npos;) s.replace(pos, 3, "'");
  return s;
}

std::vector<std::string> split_words(const std::string &text) {
  std::vector<std::string> out;
  for (const auto &t : scan(text)) {
    if (t.kind == TokenKind::kEnd) continue;
    out.push_back(t.kind == TokenKind::kEntity ? "[" + t.surface + "]" : t.surface);
  }
  return out;
}

bool closed_kind(TokenKind k) {
  return k == TokenKind::kModif || k == TokenKind::kDet || k == TokenKind::kPrep ||
         k == TokenKind::kConj;
}

int priority(TokenKind k) {
  switch (k) {
    case TokenKind::kModif:
      return 0;
    case TokenKind::kVerb:
      return 1;
    case TokenKind::kNoun:
      return 2;
    case TokenKind::kAdj:
      return 3;
    case TokenKind::kPrep:
      return 4;
    case TokenKind::kDet:
      return 5;
    case TokenKind::kConj:
      return 6;
    default:
      return 7;
  }
}

}  // namespace

std::string to_string(TokenKind k) {
  switch (k) {
    case TokenKind::kEntity:
      return "ENTITY";
    case TokenKind::kNoun:
      return "NOUN";
    case TokenKind::kVerb:
      return "VERB";
    case TokenKind::kAdj:
      return "ADJ";
    case TokenKind::kModif:
      return "MODIF";
    case TokenKind::kDet:
      return "DET";
    case TokenKind::kPrep:
      return "PREP";
    case TokenKind::kConj:
      return "CONJ";
    case TokenKind::kNum:
      return "NUM";
    case TokenKind::kPunct:
      return "PUNCT";
    case TokenKind::kWord:
      return "WORD";
    case TokenKind::kEnd:
      return "END";
  }
  return "WORD";
}

json to_json(const Diagnostic &d) {
  return {{"severity", d.severity},
          {"code", d.code},
          {"span", {{"begin", d.span.begin}, {"end", d.span.end}}},
          {"message", d.message},
          {"hints", d.hints}};
}

Diagnostic diagnostic_from_json(const json &j) {
  Diagnostic d;
  d.severity = j.value("severity", std::string("error"));
  d.code = j.at("code").get<std::string>();
  d.span = {j.at("span").at("begin").get<size_t>(), j.at("span").at("end").get<size_t>()};
  d.message = j.value("message", std::string());
  d.hints = j.value("hints", std::vector<std::string>{});
  return d;
}

// ---------------------------------------------------------------------------

ClosedLists ClosedLists::defaults() {
  ClosedLists c;
  c.determiners = {"le", "la", "l'", "les", "un", "une", "des"};
  c.prepositions = {"à", "de", "d'", "par", "en", "sur", "dans", "vers", "sous", "entre", "avec"};
  c.contractions = {{"au", {"à", "le"}}, {"aux", {"à", "les"}},
                    {"du", {"de", "le"}}, {"des", {"de", "les"}}};
  c.conjunctions = {"et"};
  c.modifiers = geo::ModifierTable().all();
  return c;
}

ClosedLists ClosedLists::from_json(const json &j) {
  ClosedLists c = defaults();
  try {
    if (j.contains("determiners")) c.determiners = j["determiners"].get<std::vector<std::string>>();
    if (j.contains("prepositions")) c.prepositions = j["prepositions"].get<std::vector<std::string>>();
    if (j.contains("contractions")) {
      c.contractions.clear();
      for (const auto &[k, v] : j["contractions"].items()) {
        c.contractions[k] = {v.at(0).get<std::string>(), v.at(1).get<std::string>()};
      }
    }
    if (j.contains("conjunctions")) c.conjunctions = j["conjunctions"].get<std::vector<std::string>>();
    if (j.contains("modifiers")) {
      c.modifiers.clear();
      for (const auto &m : j["modifiers"]) {
        c.modifiers.push_back({m.at("name").get<std::string>(),
                               kind_from(m.at("kind").get<std::string>()),
                               m.value("extent_factor", 1.0)});
      }
    }
  } catch (const json::exception &e) {
    throw ConfigError(std::string("invalid closed lists: ") + e.what());
  }
  return c;
}

json ClosedLists::to_json() const {
  json mods = json::array();
  for (const auto &m : modifiers) {
    mods.push_back({{"name", m.name}, {"kind", kind_to(m.kind)}, {"extent_factor", m.extent_factor}});
  }
  json contr = json::object();
  for (const auto &[k, v] : contractions) contr[k] = json::array({v.first, v.second});
  return {{"determiners", determiners}, {"prepositions", prepositions},
          {"contractions", contr}, {"conjunctions", conjunctions}, {"modifiers", mods}};
}

// ---------------------------------------------------------------------------

Lexicon::Lexicon(const kb::KnowledgeBase &kb, ClosedLists lists)
    : kb_(&kb), lists_(std::move(lists)), modifiers_(lists_.modifiers) {
  auto add_entry = [&](const std::string &surface, TokenKind kind,
                       const std::string &canonical = {}) {
    std::vector<std::string> words = split_words(surface);
    if (words.empty()) return;
    for (auto &w : words) {
      vocabulary_.insert(w);
      if (closed_kind(kind)) w = fr::lower(norm_apostrophe(w));
    }
    const std::string key = fr::lower(norm_apostrophe(words.front()));
    auto &bucket = multi_[key];
    for (const auto &e : bucket) {
      if (e.words == words && e.kind == kind && e.canonical == canonical) return;
    }
    bucket.push_back({std::move(words), kind, canonical});
  };

  for (const auto &[id, inst] : kb.instances()) {
    if (inst.derived_from) continue;
    if (inst.georeferenced) {
      entities_[inst.name].push_back(id);
    } else {
      nouns_[inst.name].push_back({NounSense::Kind::kInstance, id, "", inst.agreement, std::nullopt});
      add_entry(inst.name, TokenKind::kNoun);
    }
  }
  for (const auto &[id, t] : kb.value_types()) {
    for (const auto &v : t.values) {
      if (v.adjective) {
        adjectives_[v.value].push_back({id, v.value});
        add_entry(v.value, TokenKind::kAdj);
      } else {
        nouns_[v.value].push_back({NounSense::Kind::kValue, v.value, id, v.agreement, v.elision});
        add_entry(v.value, TokenKind::kNoun);
      }
    }
  }
  for (const auto &[id, s] : kb.complex_relations()) {
    if (!s.default_text) continue;
    const kb::Agreement fsg{kb::Gender::kFeminine, kb::GrammaticalNumber::kSingular};
    for (const auto *noun : {&s.default_text->singular, &s.default_text->plural}) {
      nouns_[*noun].push_back({NounSense::Kind::kDefaultText, id, "", fsg, std::nullopt});
      add_entry(*noun, TokenKind::kNoun);
    }
  }
  auto add_verbs = [&](const std::string &schema, const kb::Lexeme &lex) {
    for (size_t v = 0; v < lex.voices.size(); ++v) {
      for (const auto &[key, form] : lex.voices[v].forms) {
        verbs_[form].push_back({schema, v, key});
        add_entry(form, TokenKind::kVerb);
      }
    }
  };
  for (const auto &[id, s] : kb.simple_relations()) add_verbs(id, s.lexeme);
  for (const auto &[id, s] : kb.complex_relations()) add_verbs(id, s.lexeme);

  for (const auto &d : lists_.determiners) add_entry(d, TokenKind::kDet);
  for (const auto &p : lists_.prepositions) add_entry(p, TokenKind::kPrep);
  for (const auto &[c, pair] : lists_.contractions) add_entry(c, TokenKind::kPrep);
  for (const auto &c : lists_.conjunctions) add_entry(c, TokenKind::kConj);
  for (const auto &m : lists_.modifiers) {
    add_entry(m.name, TokenKind::kModif, m.name);
    const std::string stem = " de";
    if (m.name.size() > stem.size() &&
        m.name.compare(m.name.size() - stem.size(), stem.size(), stem) == 0) {
      const std::string base = m.name.substr(0, m.name.size() - stem.size());
      add_entry(base + " du", TokenKind::kModif, m.name + "|le");
      add_entry(base + " des", TokenKind::kModif, m.name + "|les");
      add_entry(base + " d'", TokenKind::kModif, m.name);
    }
  }
  for (const auto &[name, ids] : entities_) vocabulary_.insert(name);
  for (auto &[k, bucket] : multi_) {
    std::stable_sort(bucket.begin(), bucket.end(), [](const Entry &a, const Entry &b) {
      if (a.words.size() != b.words.size()) return a.words.size() > b.words.size();
      return priority(a.kind) < priority(b.kind);
    });
  }
}

std::vector<std::string> Lexicon::entities(const std::string &name) const {
  auto it = entities_.find(name);
  return it == entities_.end() ? std::vector<std::string>{} : it->second;
}

const std::vector<NounSense> *Lexicon::nouns(const std::string &surface) const {
  auto it = nouns_.find(surface);
  if (it == nouns_.end()) it = nouns_.find(fr::uncapitalize(surface));
  return it == nouns_.end() ? nullptr : &it->second;
}

const std::vector<VerbSense> *Lexicon::verbs(const std::string &surface) const {
  auto it = verbs_.find(surface);
  return it == verbs_.end() ? nullptr : &it->second;
}

const std::vector<AdjSense> *Lexicon::adjectives(const std::string &surface) const {
  auto it = adjectives_.find(surface);
  return it == adjectives_.end() ? nullptr : &it->second;
}

bool Lexicon::is_determiner(const std::string &w) const {
  const std::string l = fr::lower(norm_apostrophe(w));
  return std::find(lists_.determiners.begin(), lists_.determiners.end(), l) !=
         lists_.determiners.end();
}

bool Lexicon::is_preposition(const std::string &w) const {
  const std::string l = fr::lower(norm_apostrophe(w));
  return std::find(lists_.prepositions.begin(), lists_.prepositions.end(), l) !=
         lists_.prepositions.end();
}

const std::pair<std::string, std::string> *Lexicon::contraction(const std::string &w) const {
  auto it = lists_.contractions.find(fr::lower(w));
  return it == lists_.contractions.end() ? nullptr : &it->second;
}

bool Lexicon::is_conjunction(const std::string &w) const {
  const std::string l = fr::lower(w);
  return std::find(lists_.conjunctions.begin(), lists_.conjunctions.end(), l) !=
         lists_.conjunctions.end();
}

Lexicon::Match Lexicon::match(const std::vector<std::string> &words, size_t i) const {
  Match best;
  if (i >= words.size()) return best;
  const std::string key = fr::lower(norm_apostrophe(words[i]));
  if (auto it = multi_.find(key); it != multi_.end()) {
    for (const auto &e : it->second) {
      if (i + e.words.size() > words.size()) continue;
      if (best.words > e.words.size()) break;
      bool ok = true;
      for (size_t k = 0; k < e.words.size() && ok; ++k) {
        const std::string &w = words[i + k];
        if (closed_kind(e.kind)) {
          ok = fr::lower(norm_apostrophe(w)) == e.words[k];
        } else {
          ok = w == e.words[k] || (i + k == 0 && fr::uncapitalize(w) == e.words[k]);
        }
      }
      if (!ok) continue;
      if (best.words == 0) {
        best = {e.words.size(), e.kind, {}, e.canonical};
      } else if (e.kind != best.kind) {
        best.alts.insert(e.kind);
      }
    }
  }
  if (best.words <= 1 && fr::parse_numeral(words[i])) {
    if (best.words == 0) {
      best = {1, TokenKind::kNum, {}, {}};
    } else {
      best.alts.insert(TokenKind::kNum);
    }
  }
  return best;
}

namespace {

std::vector<std::string> nearest(const std::string &target,
                                 const std::vector<std::string> &pool) {
  std::vector<std::pair<int, std::string>> scored;
  std::set<std::string> seen;
  for (const auto &cand : pool) {
    if (cand == target || !seen.insert(cand).second) continue;
    const int d = fr::edit_distance(target, cand);
    if (d <= 2) scored.emplace_back(d, cand);
  }
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (const auto &[d, c] : scored) {
    if (out.size() == 5) break;
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::vector<std::string> Lexicon::word_hints(const std::string &word) const {
  std::vector<std::string> pool;
  for (const auto &w : vocabulary_) {
    if (!w.empty() && w.front() != '[') pool.push_back(w);
  }
  for (const auto &d : lists_.determiners) pool.push_back(d);
  for (const auto &p : lists_.prepositions) pool.push_back(p);
  auto out = nearest(word, pool);
  if (out.empty()) out = nearest(fr::uncapitalize(word), pool);
  return out;
}

std::vector<std::string> Lexicon::entity_hints(const std::string &name) const {
  std::vector<std::string> pool;
  for (const auto &[n, ids] : entities_) pool.push_back(n);
  return nearest(name, pool);
}

}  // namespace inaut::grammar
