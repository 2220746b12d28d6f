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

// Shared test fixture loading.
#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "inaut/doc.hpp"
#include "inaut/kb.hpp"

namespace testing {

inline constexpr const char *kGoldenParagraph =
    "La [baie de Banyuls] est limitée au NW par le [cap d'Osne] et à l'Est par l'[île Grosse]. "
    "Elle est divisée en deux parties par l'[anse de la Ville] au S et par l'[anse du Fontaulé] au N. "
    "L'[anse de la Ville] est bordée par une plage, dominée par l'agglomération. "
    "L'[anse du Fontaulé] est bordée par la côte. "
    "Elle abrite le port, bordé par un rivage.";

inline std::string data_path(const std::string &rel) {
  return std::string(INAUT_DATA_DIR) + "/" + rel;
}

inline std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const inaut::kb::KnowledgeBase &banyuls_kb() {
  static const inaut::kb::KnowledgeBase kb =
      inaut::kb::load_file(data_path("fixtures/banyuls_kb.json"));
  return kb;
}

inline const inaut::doc::DocTree &banyuls_doc() {
  static const inaut::doc::DocTree doc =
      inaut::doc::load_doc_file(data_path("fixtures/banyuls_doc.json"));
  return doc;
}

inline std::vector<std::string> corpus() {
  std::vector<std::string> out;
  std::istringstream in(read_file(data_path("fixtures/corpus.inaut")));
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

}  // namespace testing
