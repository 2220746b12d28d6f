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

#ifndef INAUT_GUIDING_PATH_HPP_
#define INAUT_GUIDING_PATH_HPP_

#include <string>
#include <vector>

#include "inaut/doc.hpp"
#include "inaut/geo.hpp"

namespace inaut::geo {

struct GuidingPath {
  std::vector<Point> waypoints;
  std::string source;  // volume id the extremities came from

  double length() const;
  // Arc-length position of the closest point of the path to p.
  double project(const Point &p) const;
  // Unit direction of the path segment closest to p.
  Point direction_at(const Point &p) const;
};

// Start extremity, barycenters of the georeferenced nodes of levels 1-3 in
// document order, end extremity. Consecutive repeats are dropped. Areas are
// looked up in `graph` first, then in the document's own areas.
GuidingPath guiding_path(const doc::DocTree &doc, const AreaGraph &graph);

}  // namespace inaut::geo

#endif  // INAUT_GUIDING_PATH_HPP_
