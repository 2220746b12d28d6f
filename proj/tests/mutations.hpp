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


// Single-token mutations of the corpus sentences, each expected to be
// rejected with at least one hint.
#ifndef INAUT_TESTS_MUTATIONS_HPP_
#define INAUT_TESTS_MUTATIONS_HPP_

#include <string>
#include <vector>

namespace testing {

struct Mutation {
  std::string sentence;
  std::string expected_hint;  // empty: any hint will do
};

inline const std::vector<Mutation> &mutations() {
  static const std::vector<Mutation> m = {
      {"La [baie de Banyulz] est limitée par le [cap d'Osne] au NW.", "baie de Banyuls"},
      {"La [baie de Banyuls] est limitée par le [cap d'Osnes] au NW.", "cap d'Osne"},
      {"La [baie de Banyuls] est limtée par le [cap d'Osne] au NW.", ""},
      {"La [baie de Banyuls] est limitée par le [cap d'Osne] au NX.", ""},
      {"Le [cap d'Osne] limitte la [baie de Banyuls] au NW.", ""},
      {"Le [cap d'Osne] limite le [baie de Banyuls] au NW.", ""},
      {"[Notre-Dame de la Salette] est un amer remarquable à l'WSW du portt.", "port"},
      {"L'[anse de la Ville] est bordée par une plagge.", "plage"},
      {"L'[anse de la Ville] est bordée par un plage.", ""},
      {"La plage est dominée par l'aglomération.", "agglomération"},
      {"La plage est dominer par l'agglomération.", ""},
      {"La [baie de Banyuls] est limitée au NW par le [kap d'Osne].", "cap d'Osne"},
      {"La [baie de Banyuls] est limitée à l'Est par l'[île Grose].", "île Grosse"},
      {"La [baie de Banyuls] est limitée à l'Est par l'[île Grosse.", ""},
      {"La [baie de Banyuls] est divisée en deux parties par l'[anse de la Vile] au S et par l'[anse du Fontaulé] au N.",
       "anse de la Ville"},
      {"La [baie de Banyuls] est divisée en deux partis par l'[anse de la Ville] au S et par l'[anse du Fontaulé] au N.",
       ""},
      {"Le mouillage est autorisé au fond de l'[anse de la Villa].", "anse de la Ville"},
      {"Le mouillage est autorisé au fond de l'[anse de la Ville] sur N.", ""},
      {"Le port est abrité par l'[anse du Fontaulet].", "anse du Fontaulé"},
      {"Le port est abrité pra l'[anse du Fontaulé].", ""},
  };
  return m;
}

}  // namespace testing

#endif  // INAUT_TESTS_MUTATIONS_HPP_
