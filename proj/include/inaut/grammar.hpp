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

// The INAUT controlled language: tokenizer, lexicon, recursive-descent
// parser, article checks, and the mapping from sentences to KB facts.
//
//   S   -> NP VP "."
//   VP  -> VERB [NP] PP* | VERB
//   PP  -> [CONJ] PREP NP | [CONJ] MODIF NP
//   NP  -> [DET] NN
//   NN  -> ADJ* NOUN ADJ* | ENTITY | NUM NOUN
#ifndef INAUT_GRAMMAR_HPP_
#define INAUT_GRAMMAR_HPP_

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "inaut/errors.hpp"
#include "inaut/geo.hpp"
#include "inaut/kb.hpp"
#include "json.hpp"

namespace inaut::grammar {

struct Span {
  size_t begin = 0;
  size_t end = 0;
  friend bool operator==(const Span &, const Span &) = default;
};

enum class TokenKind {
  kEntity,
  kNoun,
  kVerb,
  kAdj,
  kModif,
  kDet,
  kPrep,
  kConj,
  kNum,
  kPunct,
  kWord,  // not (yet) classified
  kEnd,
};

std::string to_string(TokenKind k);

struct Token {
  TokenKind kind = TokenKind::kWord;
  std::string surface;  // ENTITY: the name inside the brackets
  Span span;            // bytes of the token, brackets included
  std::string space_before;
  std::set<TokenKind> alts;  // other readings of the same surface
  std::string canonical;     // MODIF: name, plus "|le" when contracted
  bool is(TokenKind k) const { return kind == k || alts.count(k) > 0; }
};

struct Diagnostic {
  std::string severity = "error";
  std::string code;
  Span span;
  std::string message;
  std::vector<std::string> hints;
};

nlohmann::json to_json(const Diagnostic &d);
Diagnostic diagnostic_from_json(const nlohmann::json &j);

class DiagnosticError : public Error {
 public:
  explicit DiagnosticError(Diagnostic d)
      : Error(d.code, d.message), diagnostic_(std::move(d)) {}
  const Diagnostic &diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

// Closed word lists. Defaults cover the vocabulary of the fixture; a
// configuration file can replace them.
struct ClosedLists {
  std::vector<std::string> determiners;
  std::vector<std::string> prepositions;
  std::map<std::string, std::pair<std::string, std::string>> contractions;
  std::vector<std::string> conjunctions;
  std::vector<geo::Modifier> modifiers;

  static ClosedLists defaults();
  static ClosedLists from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;
};

struct NounSense {
  enum class Kind { kInstance, kValue, kDefaultText };
  Kind kind = Kind::kInstance;
  std::string id;          // instance id, or the value
  std::string value_type;  // for values
  kb::Agreement agreement;
  std::optional<bool> elision;
};

struct VerbSense {
  std::string schema;
  size_t voice = 0;
  std::string form_key;  // "f.sg", "sg", ...
};

struct AdjSense {
  std::string value_type;
  std::string value;
};

// Lookup tables derived from one KB snapshot. The KB must outlive it.
class Lexicon {
 public:
  explicit Lexicon(const kb::KnowledgeBase &kb, ClosedLists lists = ClosedLists::defaults());

  const kb::KnowledgeBase &kb() const { return *kb_; }
  const ClosedLists &lists() const { return lists_; }
  const geo::ModifierTable &modifiers() const { return modifiers_; }

  // Georeferenced instances named `name`, in id order.
  std::vector<std::string> entities(const std::string &name) const;
  const std::vector<NounSense> *nouns(const std::string &surface) const;
  const std::vector<VerbSense> *verbs(const std::string &surface) const;
  const std::vector<AdjSense> *adjectives(const std::string &surface) const;
  bool is_determiner(const std::string &w) const;
  bool is_preposition(const std::string &w) const;
  const std::pair<std::string, std::string> *contraction(const std::string &w) const;
  bool is_conjunction(const std::string &w) const;

  struct Match {
    size_t words = 0;
    TokenKind kind = TokenKind::kWord;
    std::set<TokenKind> alts;
    std::string canonical;  // modifier name, contracted article appended as "|le"
  };
  // Longest lexicon entry starting at words[i].
  Match match(const std::vector<std::string> &words, size_t i) const;

  // Near names for an unknown word or bracketed name (distance <= 2, at
  // most five, nearest first).
  std::vector<std::string> word_hints(const std::string &word) const;
  std::vector<std::string> entity_hints(const std::string &name) const;

 private:
  const kb::KnowledgeBase *kb_;
  ClosedLists lists_;
  geo::ModifierTable modifiers_;
  std::map<std::string, std::vector<std::string>> entities_;
  std::map<std::string, std::vector<NounSense>> nouns_;
  std::map<std::string, std::vector<VerbSense>> verbs_;
  std::map<std::string, std::vector<AdjSense>> adjectives_;
  // Multiword entries split into words: first word -> (words, kind, canonical).
  struct Entry {
    std::vector<std::string> words;
    TokenKind kind;
    std::string canonical;
  };
  std::map<std::string, std::vector<Entry>> multi_;
  std::set<std::string> vocabulary_;
};

// Splits text into ENTITY, WORD and PUNCT tokens, separating elided "l'"
// and "d'". Throws DiagnosticError(UnbalancedBracket). The last token is
// kEnd and carries any trailing whitespace.
std::vector<Token> scan(std::string_view text);

// scan() followed by lexicon classification. Multiword entries become a
// single token. Unknown words stay kWord.
std::vector<Token> tokenize(std::string_view text, const Lexicon &lex);

// Concatenation of space_before and source bytes; reproduces the input.
std::string detokenize(std::string_view text, const std::vector<Token> &tokens);

struct NounPhrase {
  std::string det;       // as written, lowercased; "" when absent
  bool det_contracted = false;  // carried by "au", "du", ...
  std::string modifier;  // modifier name when introduced by one
  bool entity = false;
  std::string head;
  std::vector<NounSense> senses;
  std::vector<std::string> adjectives;
  std::optional<int> count;
  Span span;
  Span det_span;
};

struct PrepPhrase {
  std::string prep;  // canonical: "à", "de", "par", ...
  bool conj = false;
  NounPhrase np;
  Span span;
};

struct VerbPhrase {
  std::string surface;
  std::vector<VerbSense> senses;
  Span span;
};

struct Sentence {
  NounPhrase subject;
  VerbPhrase verb;
  std::optional<NounPhrase> object;
  std::vector<PrepPhrase> pps;
  Span span;
  // Frame chosen among verb.senses.
  std::string schema;
  size_t voice = 0;
  std::string form_key;
};

// Parses one sentence. Throws DiagnosticError with code SyntaxError,
// UnknownLexeme or AmbiguityError; the earliest problem wins.
Sentence parse(const std::vector<Token> &tokens, const Lexicon &lex);
Sentence parse(std::string_view sentence, const Lexicon &lex);

std::vector<Diagnostic> check_articles(const Sentence &s, const Lexicon &lex);

// What a sentence adds to the KB.
struct Delta {
  kb::RelationInstance relation;  // canonical
  std::vector<kb::Instance> derived;
  std::map<std::string, geo::GeoPolygon> areas;
  std::vector<kb::RelationInstance> modifier_relations;
  std::vector<kb::AttributeInstance> attributes;
  std::map<std::string, kb::ArticlePolicy> observed_articles;
  friend bool operator==(const Delta &, const Delta &) = default;
};

// Throws DiagnosticError with code RoleMismatch, UnresolvedEntity,
// SignatureViolation or DefaultTextMismatch.
Delta semantify(const Sentence &s, const Lexicon &lex);

// Identity of the facts in a delta, independent of generated ids.
std::string canonical_form(const Delta &d);

// New snapshot with the delta applied.
kb::KnowledgeBase apply_delta(const kb::KnowledgeBase &kb, const Delta &d);

nlohmann::json delta_to_json(const Delta &d);

// Sentence spans: a period followed by whitespace or end of text ends a
// sentence; periods inside brackets do not.
std::vector<Span> split_sentences(std::string_view text);

// Every diagnostic of every sentence in `text`, spans relative to `text`.
std::vector<Diagnostic> validate_segment(std::string_view text, const Lexicon &lex);

// Full analysis of a segment, one delta per sentence. Throws
// DiagnosticError on the first invalid sentence.
std::vector<Delta> semantify_segment(std::string_view text, const Lexicon &lex);

}  // namespace inaut::grammar

#endif  // INAUT_GRAMMAR_HPP_
