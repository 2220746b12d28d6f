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

// Document structure tree S of a coast-pilot volume: numbered sections with
// titles, links to geographic areas, and leaves that receive generated
// text.
#ifndef INAUT_DOC_HPP_
#define INAUT_DOC_HPP_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inaut/errors.hpp"
#include "inaut/geo.hpp"

namespace inaut::doc {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kMaxSubdivisionLevel = 4;
inline constexpr const char *kDefaultLeafType = "Généralités";

struct DocNode {
  std::string id;  // dotted section number, "2.2.4"
  int level = 0;
  std::string title;
  std::string kind = "subdivision";
  std::vector<std::string> children;
  std::optional<std::string> parent;
  std::optional<std::string> geo_link;  // area id
  bool kappa = false;                   // leaf mapped to the KB
  std::optional<std::string> leaf_type;
  friend bool operator==(const DocNode &, const DocNode &) = default;
};

struct VolumeMeta {
  std::string id;
  std::string title;
  std::pair<geo::Point, geo::Point> extremities;
  friend bool operator==(const VolumeMeta &, const VolumeMeta &) = default;
};

class DocTree {
 public:
  DocTree() = default;
  DocTree(VolumeMeta meta, std::map<std::string, DocNode> nodes, std::string root,
          std::map<std::string, geo::GeoPolygon> areas);

  const VolumeMeta &meta() const { return meta_; }
  const std::string &root() const { return root_; }
  const std::map<std::string, DocNode> &nodes() const { return nodes_; }
  const std::map<std::string, geo::GeoPolygon> &areas() const { return areas_; }
  const DocNode &node(const std::string &id) const;  // InvariantViolation
  const DocNode *find(const std::string &id) const;
  bool is_leaf(const std::string &id) const { return node(id).children.empty(); }

  // Ids in pre-order, children in stored order.
  std::vector<std::string> preorder() const;
  std::vector<std::string> kappa_leaves() const;

  // Closest node (self first, then ancestors) carrying a geo link.
  std::optional<std::string> effective_geo_node(const std::string &id) const;

  friend bool operator==(const DocTree &, const DocTree &) = default;

 private:
  VolumeMeta meta_;
  std::map<std::string, DocNode> nodes_;
  std::string root_;
  std::map<std::string, geo::GeoPolygon> areas_;
};

DocTree load_doc_tree(std::string_view bytes);
DocTree load_doc_file(const std::string &path);
std::string persist_doc(const DocTree &tree);

}  // namespace inaut::doc

#endif  // INAUT_DOC_HPP_
