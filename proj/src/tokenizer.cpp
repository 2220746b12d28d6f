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

#include <string>

#include "inaut/french.hpp"
#include "inaut/grammar.hpp"

namespace inaut::grammar {

namespace {

// Byte length of the whitespace sequence at text[i], 0 if none.
size_t space_at(std::string_view text, size_t i) {
  const auto c = static_cast<unsigned char>(text[i]);
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') return 1;
  if (c == 0xC2 && i + 1 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0xA0) return 2;
  if (c == 0xE2 && i + 2 < text.size() && static_cast<unsigned char>(text[i + 1]) == 0x80 &&
      static_cast<unsigned char>(text[i + 2]) == 0xAF) {
    return 3;
  }
  return 0;
}

bool punct_at(std::string_view text, size_t i) {
  return std::string_view(".,;:!?()").find(text[i]) != std::string_view::npos;
}

// Length of an apostrophe at text[i]: ' or U+2019.
size_t apostrophe_at(std::string_view text, size_t i) {
  if (text[i] == '\'') return 1;
  if (text.substr(i, 3) == "\xE2\x80\x99") return 3;
  return 0;
}

}  // namespace

std::vector<Token> scan(std::string_view text) {
  std::vector<Token> out;
  std::string space;
  size_t i = 0;
  while (i < text.size()) {
    if (size_t n = space_at(text, i)) {
      space.append(text.substr(i, n));
      i += n;
      continue;
    }
    Token t;
    t.space_before = std::move(space);
    space.clear();
    const char c = text[i];
    if (c == '[') {
      const size_t close = text.find_first_of("[]", i + 1);
      if (close == std::string_view::npos || text[close] == '[') {
        const size_t stop = close == std::string_view::npos ? text.size() : close;
        Diagnostic d;
        d.code = "UnbalancedBracket";
        d.span = {i, stop};
        d.message = "'[' is never closed";
        std::string inner(text.substr(i + 1, stop - i - 1));
        while (!inner.empty() && (inner.back() == ' ' || inner.back() == '.')) inner.pop_back();
        d.hints = {"[" + inner + "]"};
        throw DiagnosticError(d);
      }
      t.kind = TokenKind::kEntity;
      t.surface = std::string(text.substr(i + 1, close - i - 1));
      t.span = {i, close + 1};
      i = close + 1;
    } else if (c == ']') {
      Diagnostic d;
      d.code = "UnbalancedBracket";
      d.span = {i, i + 1};
      d.message = "']' without a matching '['";
      d.hints = {"remove ']'"};
      throw DiagnosticError(d);
    } else if (punct_at(text, i)) {
      t.kind = TokenKind::kPunct;
      t.surface = std::string(1, c);
      t.span = {i, i + 1};
      ++i;
    } else {
      size_t j = i;
      // Elided article or preposition: l' d'.
      if ((c == 'l' || c == 'L' || c == 'd' || c == 'D') && i + 1 < text.size()) {
        if (size_t a = apostrophe_at(text, i + 1)) j = i + 1 + a;
      }
      if (j == i) {
        while (j < text.size() && !space_at(text, j) && text[j] != '[' && text[j] != ']' &&
               !punct_at(text, j)) {
          ++j;
        }
      }
      t.kind = TokenKind::kWord;
      t.surface = std::string(text.substr(i, j - i));
      t.span = {i, j};
      i = j;
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = TokenKind::kEnd;
  end.span = {text.size(), text.size()};
  end.space_before = std::move(space);
  out.push_back(std::move(end));
  return out;
}

std::vector<Token> tokenize(std::string_view text, const Lexicon &lex) {
  std::vector<Token> raw = scan(text);
  std::vector<std::string> words;
  words.reserve(raw.size());
  for (const auto &t : raw) {
    words.push_back(t.kind == TokenKind::kWord ? t.surface : "\x01" + t.surface);
  }
  std::vector<Token> out;
  for (size_t i = 0; i < raw.size();) {
    if (raw[i].kind != TokenKind::kWord) {
      out.push_back(raw[i++]);
      continue;
    }
    Lexicon::Match m = lex.match(words, i);
    if (m.words == 0) {
      out.push_back(raw[i++]);
      continue;
    }
    Token t = raw[i];
    const Token &last = raw[i + m.words - 1];
    t.span.end = last.span.end;
    t.surface = std::string(text.substr(t.span.begin, t.span.end - t.span.begin));
    t.kind = m.kind;
    t.alts = m.alts;
    t.canonical = m.canonical;
    out.push_back(std::move(t));
    i += m.words;
  }
  return out;
}

std::string detokenize(std::string_view text, const std::vector<Token> &tokens) {
  std::string out;
  for (const auto &t : tokens) {
    out += t.space_before;
    out.append(text.substr(t.span.begin, t.span.end - t.span.begin));
  }
  return out;
}

std::vector<Span> split_sentences(std::string_view text) {
  std::vector<Span> out;
  size_t start = std::string_view::npos;
  bool in_bracket = false;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (start == std::string_view::npos) {
      if (space_at(text, i)) continue;
      start = i;
    }
    if (c == '[') in_bracket = true;
    if (c == ']') in_bracket = false;
    if (c == '.' && !in_bracket && (i + 1 == text.size() || space_at(text, i + 1))) {
      out.push_back({start, i + 1});
      start = std::string_view::npos;
    }
  }
  if (start != std::string_view::npos) {
    size_t end = text.size();
    while (end > start && space_at(text, end - 1)) --end;
    out.push_back({start, end});
  }
  return out;
}

}  // namespace inaut::grammar
