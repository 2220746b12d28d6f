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


#include "inaut/litinaut.hpp"

#include "inaut/french.hpp"

namespace inaut::lit {

using nlohmann::json;

namespace {

std::string participle(const std::string &verb) {
  const size_t sp = verb.find(' ');
  return sp == std::string::npos ? "qui " + verb : verb.substr(sp + 1);
}

std::string join_listing(const std::vector<std::string> &items) {
  std::string out;
  for (size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += i + 1 == items.size() ? " et " : ", ";
    out += items[i];
  }
  return out;
}

bool starts_with_prefix(const std::string &text, const std::string &prefix) {
  return text.size() > prefix.size() + 1 && text.compare(0, prefix.size(), prefix) == 0 &&
         text[prefix.size()] == ' ';
}

}  // namespace

std::string LitSentence::final_referent() const {
  if (relative) return relative->final_referent();
  return conjuncts.back().final_referent();
}

std::map<std::string, kb::Agreement> LitSentence::core_referents() const {
  std::map<std::string, kb::Agreement> out;
  for (const auto &c : conjuncts) {
    const auto r = c.core_referents();
    out.insert(r.begin(), r.end());
  }
  if (relative) {
    const auto r = relative->core_referents();
    out.insert(r.begin(), r.end());
  }
  return out;
}

std::string LitSentence::text() const {
  const nlg::Clause &h = head();
  std::string s = pronoun ? fr::subject_pronoun(h.subject_agreement) : h.subject;
  s += " " + h.verb;
  std::vector<std::string> tails;
  for (const auto &c : conjuncts) {
    if (!c.complements.empty()) tails.push_back(c.tail());
  }
  if (!tails.empty()) s += " " + join_listing(tails);
  if (relative) {
    s += ", " + participle(relative->verb);
    if (!relative->complements.empty()) s += " " + relative->tail();
  }
  s = fr::capitalize(s);
  if (!omitted_prefix.empty() && starts_with_prefix(s, omitted_prefix)) {
    s = fr::capitalize(s.substr(omitted_prefix.size() + 1));
  }
  return s + ".";
}

std::vector<std::string> LitSentence::inaut() const {
  std::vector<std::string> out;
  for (const auto &c : conjuncts) out.push_back(c.text());
  if (relative) out.push_back(relative->text());
  return out;
}

SentenceChain make_chain(const std::vector<nlg::Clause> &clauses, size_t component) {
  SentenceChain out;
  for (const auto &c : clauses) {
    LitSentence s;
    s.conjuncts.push_back(c);
    s.component = component;
    out.push_back(std::move(s));
  }
  return out;
}

SentenceChain make_chain(const nlg::GenerationPlan &plan) {
  SentenceChain out;
  for (size_t i = 0; i < plan.components.size(); ++i) {
    auto part = make_chain(plan.components[i].clauses, i);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

namespace {

bool plain(const LitSentence &s) {
  return !s.relative && !s.pronoun && s.omitted_prefix.empty();
}

}  // namespace

SentenceChain merge_conjunction(SentenceChain chain) {
  SentenceChain out;
  for (auto &s : chain) {
    if (!out.empty()) {
      LitSentence &prev = out.back();
      const nlg::Clause &a = prev.head(), &b = s.head();
      if (prev.component == s.component && plain(prev) && plain(s) &&
          a.subject_ref == b.subject_ref && a.schema == b.schema &&
          a.voice_index == b.voice_index && a.verb == b.verb && !a.complements.empty() &&
          !b.complements.empty()) {
        prev.conjuncts.insert(prev.conjuncts.end(), s.conjuncts.begin(), s.conjuncts.end());
        continue;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

SentenceChain merge_relative(SentenceChain chain) {
  SentenceChain out;
  for (size_t i = 0; i < chain.size(); ++i) {
    LitSentence s = std::move(chain[i]);
    if (i + 1 < chain.size()) {
      const LitSentence &next = chain[i + 1];
      const std::string fin = s.final_referent();
      if (s.component == next.component && !s.relative && s.omitted_prefix.empty() &&
          !fin.empty() && fin == next.subject_ref() && next.conjuncts.size() == 1 &&
          plain(next)) {
        s.relative = next.head();
        ++i;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

SentenceChain gen_referring(SentenceChain chain) {
  for (size_t i = 1; i < chain.size(); ++i) {
    LitSentence &s = chain[i];
    const LitSentence &prev = chain[i - 1];
    if (s.pronoun || !s.omitted_prefix.empty() || s.component != prev.component) continue;
    if (s.subject_ref() != prev.subject_ref() || s.head().verb == prev.head().verb) continue;
    const kb::Agreement &a = s.head().subject_agreement;
    bool ambiguous = false;
    for (const auto &[ref, agr] : prev.core_referents()) {
      if (ref != s.subject_ref() && agr == a) ambiguous = true;
    }
    if (!ambiguous) s.pronoun = true;
  }
  return chain;
}

SentenceChain contextual_omission(SentenceChain chain, const std::string &prefix) {
  if (prefix.empty()) return chain;
  for (auto &s : chain) {
    if (!s.omitted_prefix.empty()) continue;
    if (starts_with_prefix(s.text(), prefix)) s.omitted_prefix = prefix;
  }
  return chain;
}

SentenceChain apply_rules(SentenceChain chain, const nlg::WeightConfig &weights,
                          const std::string &leaf_type) {
  for (const auto &rule : weights.litinaut_rules) {
    if (rule == "conjunction") {
      chain = merge_conjunction(std::move(chain));
    } else if (rule == "relative") {
      chain = merge_relative(std::move(chain));
    } else if (rule == "pronoun") {
      chain = gen_referring(std::move(chain));
    } else if (rule == "omission") {
      auto it = weights.omission_prefixes.find(leaf_type);
      if (it != weights.omission_prefixes.end()) {
        chain = contextual_omission(std::move(chain), it->second);
      }
    }
  }
  return chain;
}

std::string chain_text(const SentenceChain &chain) {
  std::string out;
  for (const auto &s : chain) {
    if (!out.empty()) out += " ";
    out += s.text();
  }
  return out;
}

std::vector<std::string> de_aggregate(const SentenceChain &chain) {
  std::vector<std::string> out;
  for (const auto &s : chain) {
    for (auto &t : s.inaut()) out.push_back(std::move(t));
  }
  return out;
}

std::string to_litinaut(const nlg::GenerationPlan &plan, const nlg::WeightConfig &weights) {
  return chain_text(apply_rules(make_chain(plan), weights, plan.leaf_type));
}

namespace {

const kb::Instance *by_name(const kb::KnowledgeBase &kb, const std::string &name) {
  const kb::Instance *derived = nullptr;
  for (const auto &[id, inst] : kb.instances()) {
    if (inst.name != name || !inst.georeferenced) continue;
    if (!inst.derived_from) return &inst;
    if (!derived) derived = &inst;
  }
  return derived;
}

std::string escape(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<EntityLink> entity_links(const std::string &text, const kb::KnowledgeBase &kb) {
  std::vector<EntityLink> out;
  std::set<std::string> seen;
  size_t pos = 0;
  while ((pos = text.find('[', pos)) != std::string::npos) {
    const size_t end = text.find(']', pos);
    if (end == std::string::npos) break;
    const std::string name = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (!seen.insert(name).second) continue;
    EntityLink link{name, "", ""};
    if (const kb::Instance *inst = by_name(kb, name)) {
      link.instance_id = inst->id;
      link.area = inst->geo_ref.value_or("");
    }
    out.push_back(std::move(link));
  }
  return out;
}

json entity_links_json(const std::string &text, const kb::KnowledgeBase &kb) {
  json out = json::array();
  for (const auto &l : entity_links(text, kb)) {
    json polygon = nullptr;
    auto it = kb.areas().find(l.area);
    if (it != kb.areas().end()) polygon = geo::to_geojson(it->second);
    out.push_back({{"name", l.name}, {"instance_id", l.instance_id}, {"polygon", polygon}});
  }
  return out;
}

std::string to_html(const std::string &text, const kb::KnowledgeBase &kb) {
  std::map<std::string, EntityLink> links;
  for (auto &l : entity_links(text, kb)) links.emplace(l.name, std::move(l));
  std::string out = "<p>";
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t open = text.find('[', pos);
    const size_t close = open == std::string::npos ? open : text.find(']', open);
    if (close == std::string::npos) {
      out += escape(text.substr(pos));
      break;
    }
    out += escape(text.substr(pos, open - pos));
    const std::string name = text.substr(open + 1, close - open - 1);
    auto it = links.find(name);
    if (it == links.end()) {
      out += escape(name);
    } else {
      const EntityLink &l = it->second;
      out += "<a class=\"entity\" href=\"#" + escape(l.instance_id) + "\" data-instance=\"" +
             escape(l.instance_id) + "\" data-polygon=\"" + escape(l.area) + "\">" + escape(name) +
             "</a>";
    }
    pos = close + 1;
  }
  return out + "</p>";
}

}  // namespace inaut::lit
