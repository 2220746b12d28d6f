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
#include <sstream>

#include "inaut/french.hpp"
#include "inaut/grammar.hpp"

namespace inaut::grammar {

namespace {

std::string norm(std::string s) {
  for (size_t pos; (pos = s.find("\xE2\x80\x99")) != std::string::npos;) s.replace(pos, 3, "'");
  return fr::lower(s);
}

class Parser {
 public:
  Parser(const std::vector<Token> &tokens, const Lexicon &lex) : t_(tokens), lex_(lex) {}

  Sentence run() {
    Sentence s;
    s.span.begin = t_.front().span.begin;
    s.subject = np(false);
    if (!at().is(TokenKind::kVerb)) fail({"VERB"});
    s.verb.surface = at().surface;
    s.verb.span = at().span;
    if (const auto *senses = lex_.verbs(at().surface)) s.verb.senses = *senses;
    ++i_;

    bool any_object = false;
    for (const auto &sense : s.verb.senses) {
      any_object |= !voice(sense).object_role.empty();
    }
    if (any_object && starts_np()) s.object = np(false);

    while (at().is(TokenKind::kConj) || at().is(TokenKind::kPrep) ||
           at().is(TokenKind::kModif)) {
      s.pps.push_back(pp());
    }
    if (at().kind != TokenKind::kPunct || at().surface != ".") fail({"PREP", "MODIF", "'.'"});
    ++i_;
    if (at().kind != TokenKind::kEnd) fail({"end of sentence"});
    s.span.end = t_[i_ - 1].span.end;
    if (!unknown_.empty()) throw DiagnosticError(unknown_diag(unknown_.front()));
    choose_frame(s);
    return s;
  }

 private:
  const Token &at() const { return t_[std::min(i_, t_.size() - 1)]; }

  const kb::VoiceLexeme &voice(const VerbSense &v) const {
    return lex_.kb().schema(v.schema)->lexeme->voices.at(v.voice);
  }

  bool starts_np() const {
    const Token &k = at();
    return k.is(TokenKind::kDet) || k.kind == TokenKind::kEntity || k.is(TokenKind::kNoun) ||
           k.is(TokenKind::kAdj) || k.is(TokenKind::kNum) || k.kind == TokenKind::kWord;
  }

  Diagnostic unknown_diag(size_t idx) const {
    const Token &k = t_[idx];
    Diagnostic d;
    d.code = "UnknownLexeme";
    d.span = k.span;
    if (k.kind == TokenKind::kEntity) {
      d.message = "unknown georeferenced entity '[" + k.surface + "]'";
      d.hints = lex_.entity_hints(k.surface);
    } else {
      d.message = "unknown word '" + k.surface + "'";
      d.hints = lex_.word_hints(k.surface);
    }
    return d;
  }

  [[noreturn]] void fail(const std::vector<std::string> &expected) {
    if (!unknown_.empty()) throw DiagnosticError(unknown_diag(unknown_.front()));
    if (at().kind == TokenKind::kWord) throw DiagnosticError(unknown_diag(i_));
    Diagnostic d;
    d.code = "SyntaxError";
    d.span = at().span;
    std::ostringstream msg;
    msg << "expected ";
    for (size_t k = 0; k < expected.size(); ++k) msg << (k ? " or " : "") << expected[k];
    if (at().kind == TokenKind::kEnd) {
      msg << ", found end of text";
    } else {
      msg << ", found " << to_string(at().kind) << " '" << at().surface << "'";
    }
    d.message = msg.str();
    d.hints = expected;
    throw DiagnosticError(d);
  }

  void note_unknown(size_t idx) {
    if (std::find(unknown_.begin(), unknown_.end(), idx) == unknown_.end()) unknown_.push_back(idx);
  }

  NounPhrase np(bool det_given) {
    NounPhrase n;
    n.span.begin = at().span.begin;
    if (!det_given && at().is(TokenKind::kDet) &&
        !(at().kind == TokenKind::kPrep && !at().alts.count(TokenKind::kDet))) {
      n.det = norm(at().surface);
      n.det_span = at().span;
      ++i_;
    }
    auto can_head = [&](size_t k) {
      if (k >= t_.size()) return false;
      const Token &x = t_[k];
      return x.kind == TokenKind::kEntity || x.is(TokenKind::kNoun) ||
             x.kind == TokenKind::kWord || x.is(TokenKind::kNum);
    };
    while (at().kind == TokenKind::kAdj && can_head(i_ + 1)) {
      n.adjectives.push_back(at().surface);
      ++i_;
    }
    const Token &h = at();
    if (h.kind == TokenKind::kEntity) {
      n.entity = true;
      n.head = h.surface;
      if (lex_.entities(h.surface).empty() && !lex_.nouns(h.surface)) note_unknown(i_);
      ++i_;
    } else if (h.is(TokenKind::kNum) && i_ + 1 < t_.size() &&
               (t_[i_ + 1].is(TokenKind::kNoun) || t_[i_ + 1].kind == TokenKind::kWord)) {
      n.count = fr::parse_numeral(h.surface);
      ++i_;
      n.head = at().surface;
      if (const auto *s = lex_.nouns(at().surface)) {
        n.senses = *s;
      } else {
        note_unknown(i_);
      }
      ++i_;
    } else if (h.is(TokenKind::kNoun)) {
      n.head = h.surface;
      if (const auto *s = lex_.nouns(h.surface)) n.senses = *s;
      ++i_;
    } else if (h.kind == TokenKind::kWord) {
      n.head = h.surface;
      note_unknown(i_);
      ++i_;
    } else {
      fail({"NOUN", "ENTITY"});
    }
    while (at().is(TokenKind::kAdj) && at().kind != TokenKind::kVerb) {
      n.adjectives.push_back(at().surface);
      ++i_;
    }
    n.span.end = t_[i_ - 1].span.end;
    return n;
  }

  PrepPhrase pp() {
    PrepPhrase p;
    p.span.begin = at().span.begin;
    if (at().is(TokenKind::kConj) && at().kind != TokenKind::kPrep) {
      p.conj = true;
      ++i_;
      p.span.begin = at().span.begin;
      if (!at().is(TokenKind::kPrep) && !at().is(TokenKind::kModif)) fail({"PREP", "MODIF"});
    }
    const Token &k = at();
    if (k.kind == TokenKind::kModif) {
      std::string canon = k.canonical;
      std::string det;
      if (auto bar = canon.find('|'); bar != std::string::npos) {
        det = canon.substr(bar + 1);
        canon = canon.substr(0, bar);
      }
      const Span mspan = k.span;
      ++i_;
      p.prep = "à";
      p.np = np(!det.empty());
      if (!det.empty()) {
        p.np.det = det;
        p.np.det_contracted = true;
        p.np.det_span = mspan;
      }
      p.np.modifier = canon;
      p.np.span.begin = mspan.begin;
    } else {
      const std::string w = norm(k.surface);
      const Span pspan = k.span;
      ++i_;
      if (const auto *c = lex_.contraction(w)) {
        p.prep = c->first;
        p.np = np(true);
        p.np.det = c->second;
        p.np.det_contracted = true;
        p.np.det_span = pspan;
      } else {
        p.prep = w == "d'" ? "de" : w;
        p.np = np(false);
      }
    }
    p.span.end = p.np.span.end;
    return p;
  }

  void choose_frame(Sentence &s) const {
    std::vector<VerbSense> fit;
    for (const auto &sense : s.verb.senses) {
      if (voice(sense).object_role.empty() != !s.object.has_value()) continue;
      fit.push_back(sense);
    }
    if (fit.empty()) {
      Diagnostic d;
      d.code = "SyntaxError";
      d.span = s.object ? s.object->span : s.verb.span;
      d.message = s.object ? "verb '" + s.verb.surface + "' takes no direct object"
                           : "verb '" + s.verb.surface + "' needs a direct object";
      d.hints = {s.object ? "remove the direct object" : "add a direct object"};
      throw DiagnosticError(d);
    }
    auto preps_fit = [&](const VerbSense &sense) {
      const auto &v = voice(sense);
      const auto view = lex_.kb().schema(sense.schema);
      for (const auto &pp : s.pps) {
        bool ok = pp.np.count && view->default_text && view->default_text->prep == pp.prep;
        for (const auto &c : v.complements) ok |= c.prep == pp.prep;
        if (!ok) return false;
      }
      return true;
    };
    std::vector<VerbSense> best;
    for (const auto &sense : fit) {
      if (preps_fit(sense)) best.push_back(sense);
    }
    if (best.empty()) best = {fit.front()};
    std::set<std::pair<std::string, size_t>> frames;
    for (const auto &b : best) frames.insert({b.schema, b.voice});
    if (frames.size() > 1) {
      Diagnostic d;
      d.code = "AmbiguityError";
      d.span = s.span;
      d.message = "sentence has " + std::to_string(frames.size()) + " readings";
      for (const auto &[schema, v] : frames) {
        d.hints.push_back(schema + " (" + kb::to_string(lex_.kb().schema(schema)->lexeme->voices[v].voice) + ")");
      }
      throw DiagnosticError(d);
    }
    s.schema = best.front().schema;
    s.voice = best.front().voice;
    s.form_key = best.front().form_key;
  }

  const std::vector<Token> &t_;
  const Lexicon &lex_;
  size_t i_ = 0;
  std::vector<size_t> unknown_;
};

}  // namespace

Sentence parse(const std::vector<Token> &tokens, const Lexicon &lex) {
  if (tokens.empty() || tokens.front().kind == TokenKind::kEnd) {
    Diagnostic d;
    d.code = "SyntaxError";
    d.message = "empty sentence";
    d.hints = {"NOUN", "ENTITY"};
    throw DiagnosticError(d);
  }
  return Parser(tokens, lex).run();
}

Sentence parse(std::string_view sentence, const Lexicon &lex) {
  return parse(tokenize(sentence, lex), lex);
}

// ---------------------------------------------------------------------------
// Articles

namespace {

enum class Position { kSubject, kObject, kComplement };

struct Referent {
  bool found = false;
  bool is_value = false;
  kb::ArticlePolicy policy = kb::ArticlePolicy::kDefinite;
  kb::Agreement agreement;
  bool elide = false;
};

Referent referent_of(const NounPhrase &np, const Lexicon &lex) {
  Referent r;
  auto from_instance = [&](const kb::Instance &inst) {
    r.found = true;
    r.policy = inst.article_policy;
    r.agreement = inst.agreement;
    r.elide = fr::elides(inst.name);
  };
  if (np.entity) {
    const auto ids = lex.entities(np.head);
    if (!ids.empty()) from_instance(*lex.kb().find_instance(ids.front()));
    return r;
  }
  for (const auto &s : np.senses) {
    if (s.kind == NounSense::Kind::kInstance) {
      from_instance(*lex.kb().find_instance(s.id));
      return r;
    }
  }
  for (const auto &s : np.senses) {
    if (s.kind == NounSense::Kind::kValue) {
      r.found = true;
      r.is_value = true;
      r.agreement = s.agreement;
      r.elide = fr::elides(np.head, s.elision);
      return r;
    }
  }
  return r;
}

bool is_definite(const std::string &det) {
  return det == "le" || det == "la" || det == "l'" || det == "les";
}

bool is_indefinite(const std::string &det) {
  return det == "un" || det == "une" || det == "des";
}

std::string head_text(const NounPhrase &np) {
  std::string out;
  for (const auto &a : np.adjectives) out += a + " ";
  out += np.entity ? "[" + np.head + "]" : np.head;
  return out;
}

// The phrase as it should have been written with article `det`; `prep`
// is empty for subject and object NPs.
std::string rewrite(const NounPhrase &np, const std::string &prep, const std::string &det) {
  const std::string head = head_text(np);
  auto attach = [&](const std::string &p) {
    const std::string c = fr::contract(p, det);
    if (!det.empty() && c != p + " " + det) return c + " " + head;
    return det.empty() ? p + " " + head : p + " " + fr::with_article(det, head);
  };
  if (!np.modifier.empty()) {
    const std::string &m = np.modifier;
    if (m.size() > 3 && m.compare(m.size() - 3, 3, " de") == 0) {
      return m.substr(0, m.size() - 3) + " " + attach("de");
    }
    return attach(m);
  }
  if (prep.empty()) return fr::with_article(det, head);
  return attach(prep);
}

void check_np(const NounPhrase &np, Position pos, const std::string &prep, Span span,
              const Lexicon &lex, std::vector<Diagnostic> &out) {
  if (np.count) return;
  const Referent r = referent_of(np, lex);
  if (!r.found) return;
  auto push = [&](const std::string &code, const std::string &msg, const std::string &hint) {
    Diagnostic d;
    d.code = code;
    d.span = span;
    d.message = msg;
    d.hints = {hint};
    out.push_back(std::move(d));
  };
  const std::string &pp_prep = prep;
  const std::string definite = fr::definite_article(r.agreement, r.elide);
  const std::string who = np.entity ? "[" + np.head + "]" : np.head;

  if (r.policy == kb::ArticlePolicy::kNone && !r.is_value) {
    if (!np.det.empty()) {
      push("ArticlePolicy", who + " takes no article", rewrite(np, pp_prep, ""));
    }
    return;
  }
  if (np.det.empty()) {
    push("MissingArticle", who + " needs the article '" + definite + "'",
         rewrite(np, pp_prep, definite));
    return;
  }
  if (is_indefinite(np.det)) {
    if (r.is_value || r.policy != kb::ArticlePolicy::kIndefiniteAsObject) {
      push("ArticlePolicy", who + " takes the definite article", rewrite(np, pp_prep, definite));
      return;
    }
    if (pos == Position::kSubject) {
      push("IndefinitePosition", "indefinite articles are only used in object position",
           rewrite(np, pp_prep, definite));
      return;
    }
    const std::string expected = fr::indefinite_article(r.agreement);
    if (np.det != expected) {
      push("Agreement", "'" + np.det + "' does not agree with " + who,
           rewrite(np, pp_prep, expected));
    }
    return;
  }
  if (!is_definite(np.det)) return;
  const bool de_modifier = np.modifier.size() > 3 &&
                           np.modifier.compare(np.modifier.size() - 3, 3, " de") == 0;
  if (!np.det_contracted && (np.det == "le" || np.det == "les") &&
      (de_modifier || (np.modifier.empty() && (prep == "à" || prep == "de")))) {
    push("Contraction", "'" + (de_modifier ? std::string("de") : prep) + " " + np.det +
                            "' must be contracted",
         rewrite(np, pp_prep, np.det == definite ? np.det : definite));
    return;
  }
  if (np.det != definite) {
    const bool elision_issue = (np.det == "l'") != (definite == "l'");
    push(elision_issue ? "Elision" : "Agreement",
         "'" + np.det + "' does not agree with " + who + "; expected '" + definite + "'",
         rewrite(np, pp_prep, definite));
  }
}

}  // namespace

std::vector<Diagnostic> check_articles(const Sentence &s, const Lexicon &lex) {
  std::vector<Diagnostic> out;
  check_np(s.subject, Position::kSubject, "", s.subject.span, lex, out);
  if (s.object) check_np(*s.object, Position::kObject, "", s.object->span, lex, out);
  for (const auto &pp : s.pps) {
    check_np(pp.np, Position::kComplement, pp.prep, pp.span, lex, out);
  }

  // Verb agreement with the subject.
  const Referent subj = referent_of(s.subject, lex);
  const auto view = lex.kb().schema(s.schema);
  if (subj.found && view && view->lexeme && s.voice < view->lexeme->voices.size()) {
    const auto &v = view->lexeme->voices[s.voice];
    const bool gendered = s.form_key.find('.') != std::string::npos;
    const bool ok = gendered ? s.form_key == subj.agreement.key()
                             : s.form_key == subj.agreement.number_key();
    if (!ok) {
      Diagnostic d;
      d.code = "Agreement";
      d.span = s.verb.span;
      d.message = "verb '" + s.verb.surface + "' does not agree with the subject";
      if (auto f = v.form(subj.agreement)) d.hints = {*f};
      out.push_back(std::move(d));
    }
  }
  return out;
}

}  // namespace inaut::grammar
