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

// French surface helpers: case and accent folding, articles with elision
// and contraction, numerals, subject pronouns.
#ifndef INAUT_FRENCH_HPP_
#define INAUT_FRENCH_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inaut/kb.hpp"

namespace inaut::fr {

// UTF-8 code points of s. Invalid bytes decode as U+FFFD.
std::u32string decode(std::string_view s);
std::string encode(std::u32string_view s);

std::string lower(std::string_view s);
// Lowercase with diacritics removed; "Réderis" -> "rederis".
std::string fold(std::string_view s);
// First letter upper-cased, the rest untouched; "à X." -> "À X.".
std::string capitalize(std::string_view s);
std::string uncapitalize(std::string_view s);

bool is_letter(char32_t c);
bool starts_with_vowel(std::string_view word);
bool elides(std::string_view word, std::optional<bool> override_flag = std::nullopt);

std::string definite_article(const kb::Agreement &a, bool elide);
std::string indefinite_article(const kb::Agreement &a);

// "le" + "port" -> "le port", "l'" + "île" -> "l'île".
std::string with_article(std::string_view article, std::string_view np);
// "à" + "le" -> "au", "de" + "les" -> "des", otherwise "à la", "de l'".
std::string contract(std::string_view prep, std::string_view article);

// 2..12 spelled out, other values as digits; 1 -> "un"/"une".
std::string numeral(int n, kb::Gender g = kb::Gender::kMasculine);
std::optional<int> parse_numeral(std::string_view word);

std::string subject_pronoun(const kb::Agreement &a);
bool is_subject_pronoun(std::string_view word);

// Optimal-string-alignment Damerau-Levenshtein distance over code points.
int edit_distance(std::string_view a, std::string_view b);

}  // namespace inaut::fr

#endif  // INAUT_FRENCH_HPP_
