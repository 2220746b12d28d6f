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

#include "inaut/french.hpp"

#include <algorithm>
#include <array>

namespace inaut::fr {

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      cp = c;
      len = 1;
    } else if ((c & 0xE0) == 0xC0) {
      cp = c & 0x1F;
      len = 2;
    } else if ((c & 0xF0) == 0xE0) {
      cp = c & 0x0F;
      len = 3;
    } else if ((c & 0xF8) == 0xF0) {
      cp = c & 0x07;
      len = 4;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + static_cast<size_t>(len) > s.size()) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + static_cast<size_t>(k)]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += static_cast<size_t>(len);
  }
  return out;
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t cp : s) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }
  return out;
}

namespace {

// Latin-1 supplement and Latin Extended-A letters used in French.
char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
  if (c == 0x152) return 0x153;  // Œ
  if (c == 0x178) return 0xFF;   // Ÿ
  return c;
}

char32_t to_upper(char32_t c) {
  if (c >= 'a' && c <= 'z') return c - 32;
  if (c >= 0xE0 && c <= 0xFE && c != 0xF7) return c - 0x20;
  if (c == 0x153) return 0x152;
  if (c == 0xFF) return 0x178;
  return c;
}

const char *strip(char32_t c) {
  switch (c) {
    case 0xE0: case 0xE1: case 0xE2: case 0xE3: case 0xE4: case 0xE5:
      return "a";
    case 0xE7:
      return "c";
    case 0xE8: case 0xE9: case 0xEA: case 0xEB:
      return "e";
    case 0xEC: case 0xED: case 0xEE: case 0xEF:
      return "i";
    case 0xF1:
      return "n";
    case 0xF2: case 0xF3: case 0xF4: case 0xF5: case 0xF6:
      return "o";
    case 0xF9: case 0xFA: case 0xFB: case 0xFC:
      return "u";
    case 0xFD: case 0xFF:
      return "y";
    case 0xE6:
      return "ae";
    case 0x153:
      return "oe";
    default:
      return nullptr;
  }
}

}  // namespace

bool is_letter(char32_t c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z')) return true;
  if (c >= 0xC0 && c <= 0x24F && c != 0xD7 && c != 0xF7) return true;
  return false;
}

std::string lower(std::string_view s) {
  std::u32string u = decode(s);
  for (auto &c : u) c = to_lower(c);
  return encode(u);
}

std::string fold(std::string_view s) {
  std::string out;
  for (char32_t c : decode(s)) {
    c = to_lower(c);
    if (const char *r = strip(c)) {
      out += r;
    } else {
      out += encode(std::u32string(1, c));
    }
  }
  return out;
}

std::string capitalize(std::string_view s) {
  std::u32string u = decode(s);
  for (auto &c : u) {
    if (is_letter(c)) {
      c = to_upper(c);
      break;
    }
    if (c == '[') break;
  }
  return encode(u);
}

std::string uncapitalize(std::string_view s) {
  std::u32string u = decode(s);
  if (!u.empty() && is_letter(u[0])) u[0] = to_lower(u[0]);
  return encode(u);
}

bool starts_with_vowel(std::string_view word) {
  const std::string f = fold(word.substr(0, std::min<size_t>(word.size(), 4)));
  if (f.empty()) return false;
  return std::string_view("aeiouyh").find(f[0]) != std::string_view::npos;
}

bool elides(std::string_view word, std::optional<bool> override_flag) {
  if (override_flag) return *override_flag;
  return starts_with_vowel(word);
}

std::string definite_article(const kb::Agreement &a, bool elide) {
  if (a.number == kb::GrammaticalNumber::kPlural) return "les";
  if (elide) return "l'";
  return a.gender == kb::Gender::kFeminine ? "la" : "le";
}

std::string indefinite_article(const kb::Agreement &a) {
  if (a.number == kb::GrammaticalNumber::kPlural) return "des";
  return a.gender == kb::Gender::kFeminine ? "une" : "un";
}

std::string with_article(std::string_view article, std::string_view np) {
  if (article.empty()) return std::string(np);
  if (article.back() == '\'') return std::string(article) + std::string(np);
  return std::string(article) + " " + std::string(np);
}

std::string contract(std::string_view prep, std::string_view article) {
  const std::string p = lower(prep);
  if (p == "à" && article == "le") return "au";
  if (p == "à" && article == "les") return "aux";
  if (p == "de" && article == "le") return "du";
  if (p == "de" && article == "les") return "des";
  if (article.empty()) return std::string(prep);
  return std::string(prep) + " " + std::string(article);
}

namespace {

constexpr std::array<const char *, 13> kNumerals = {
    "zéro", "un", "deux", "trois", "quatre", "cinq", "six",
    "sept", "huit", "neuf", "dix", "onze", "douze"};

}  // namespace

std::string numeral(int n, kb::Gender g) {
  if (n == 1) return g == kb::Gender::kFeminine ? "une" : "un";
  if (n >= 2 && n <= 12) return kNumerals[static_cast<size_t>(n)];
  return std::to_string(n);
}

std::optional<int> parse_numeral(std::string_view word) {
  const std::string w = lower(word);
  for (size_t i = 2; i < kNumerals.size(); ++i) {
    if (w == kNumerals[i]) return static_cast<int>(i);
  }
  if (!w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    if (w.size() > 6) return std::nullopt;
    return std::stoi(w);
  }
  return std::nullopt;
}

std::string subject_pronoun(const kb::Agreement &a) {
  const bool f = a.gender == kb::Gender::kFeminine;
  if (a.number == kb::GrammaticalNumber::kPlural) return f ? "Elles" : "Ils";
  return f ? "Elle" : "Il";
}

bool is_subject_pronoun(std::string_view word) {
  const std::string w = lower(word);
  return w == "il" || w == "elle" || w == "ils" || w == "elles";
}

int edit_distance(std::string_view a, std::string_view b) {
  const std::u32string s = decode(a), t = decode(b);
  const size_t n = s.size(), m = t.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      const int cost = s[i - 1] == t[j - 1] ? 0 : 1;
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost});
      if (i > 1 && j > 1 && s[i - 1] == t[j - 2] && s[i - 2] == t[j - 1]) {
        d[i][j] = std::min(d[i][j], d[i - 2][j - 2] + 1);
      }
    }
  }
  return d[n][m];
}

}  // namespace inaut::fr
