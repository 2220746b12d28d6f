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

#include "inaut/doc.hpp"

#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace inaut::doc {

using nlohmann::json;

DocTree::DocTree(VolumeMeta meta, std::map<std::string, DocNode> nodes,
                 std::string root, std::map<std::string, geo::GeoPolygon> areas)
    : meta_(std::move(meta)), nodes_(std::move(nodes)), root_(std::move(root)),
      areas_(std::move(areas)) {}

const DocNode &DocTree::node(const std::string &id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw InvariantViolation("no document node '" + id + "'");
  return it->second;
}

const DocNode *DocTree::find(const std::string &id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

std::vector<std::string> DocTree::preorder() const {
  std::vector<std::string> out;
  if (root_.empty()) return out;
  std::vector<std::string> stack{root_};
  while (!stack.empty()) {
    std::string id = std::move(stack.back());
    stack.pop_back();
    const DocNode &n = node(id);
    out.push_back(id);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  return out;
}

std::vector<std::string> DocTree::kappa_leaves() const {
  std::vector<std::string> out;
  for (const auto &id : preorder()) {
    if (node(id).kappa) out.push_back(id);
  }
  return out;
}

std::optional<std::string> DocTree::effective_geo_node(const std::string &id) const {
  const DocNode *n = find(id);
  while (n != nullptr) {
    if (n->geo_link) return n->id;
    n = n->parent ? find(*n->parent) : nullptr;
  }
  return std::nullopt;
}

namespace {

geo::Point read_point(const json &j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParseError("extremity must be a [lon, lat] pair", 0, 0);
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_point(const geo::Point &p) { return json::array({p.lon, p.lat}); }

}  // namespace

DocTree load_doc_tree(std::string_view bytes) {
  json root;
  try {
    root = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error &e) {
    int line = 1, col = 1;
    const size_t at = e.byte > 0 ? e.byte - 1 : 0;
    for (size_t i = 0; i < at && i < bytes.size(); ++i) {
      if (bytes[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(std::string("malformed document JSON: ") + e.what(), line, col);
  }
  try {
    if (!root.is_object()) throw ParseError("document file must be a JSON object", 1, 1);
    if (root.contains("schema_version") && root["schema_version"] != kSchemaVersion) {
      throw SchemaVersionMismatch("document schema_version " +
                                  root["schema_version"].dump() + " is not supported");
    }
    VolumeMeta meta;
    if (root.contains("volume")) {
      const auto &v = root["volume"];
      meta.id = v.value("id", std::string());
      meta.title = v.value("title", std::string());
      if (v.contains("extremities")) {
        const auto &ex = v["extremities"];
        if (!ex.is_array() || ex.size() != 2) {
          throw ParseError("volume.extremities must hold two points", 0, 0);
        }
        meta.extremities = {read_point(ex[0]), read_point(ex[1])};
        if (meta.extremities.first == meta.extremities.second) {
          throw InvariantViolation("guiding-path extremities must be distinct");
        }
      }
    }
    std::map<std::string, geo::GeoPolygon> areas;
    if (root.contains("areas")) areas = geo::areas_from_geojson(root["areas"]);
    if (!root.contains("root") || !root["root"].is_object()) {
      throw ParseError("missing object field 'root'", 0, 0);
    }

    std::map<std::string, DocNode> nodes;
    std::function<void(const json &, const std::optional<std::string> &, int)> walk =
        [&](const json &j, const std::optional<std::string> &parent, int depth) {
          DocNode n;
          if (!j.contains("id") || !j["id"].is_string()) {
            throw ParseError("document node without string 'id'", 0, 0);
          }
          n.id = j["id"].get<std::string>();
          n.level = j.value("level", depth);
          if (n.level != depth) {
            throw InvariantViolation("node '" + n.id + "' declares level " +
                                     std::to_string(n.level) + " at depth " +
                                     std::to_string(depth));
          }
          n.title = j.value("title", std::string());
          n.kind = j.value("kind", std::string("subdivision"));
          if (n.kind == "subdivision" && n.level > kMaxSubdivisionLevel) {
            throw InvariantViolation("node '" + n.id + "' is a subdivision at level " +
                                     std::to_string(n.level));
          }
          n.parent = parent;
          if (j.contains("geo_link") && !j["geo_link"].is_null()) {
            n.geo_link = j["geo_link"].get<std::string>();
          }
          n.kappa = j.value("kappa", false);
          if (j.contains("leaf_type") && !j["leaf_type"].is_null()) {
            n.leaf_type = j["leaf_type"].get<std::string>();
          }
          const json &children = j.contains("children") ? j["children"] : json::array();
          if (!children.is_array()) throw ParseError("'children' must be an array", 0, 0);
          if (n.kappa && !children.empty()) {
            throw InvariantViolation("node '" + n.id + "' has a KB link but is not a leaf");
          }
          if (n.kappa && !n.leaf_type) n.leaf_type = kDefaultLeafType;
          if (nodes.count(n.id)) {
            throw InvariantViolation("node id '" + n.id + "' appears twice");
          }
          const std::string id = n.id;
          nodes.emplace(id, n);
          for (const auto &c : children) {
            walk(c, id, depth + 1);
            nodes[id].children.push_back(c["id"].get<std::string>());
          }
        };
    walk(root["root"], std::nullopt, 0);
    const std::string root_id = root["root"]["id"].get<std::string>();
    if (meta.id.empty()) meta.id = root_id;
    if (meta.title.empty()) meta.title = nodes.at(root_id).title;
    return DocTree(std::move(meta), std::move(nodes), root_id, std::move(areas));
  } catch (const json::exception &e) {
    throw ParseError(std::string("malformed document structure: ") + e.what(), 0, 0);
  }
}

DocTree load_doc_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_doc_tree(ss.str());
}

std::string persist_doc(const DocTree &tree) {
  std::function<json(const std::string &)> node_json = [&](const std::string &id) {
    const DocNode &n = tree.node(id);
    json j = {{"id", n.id}, {"level", n.level}, {"title", n.title}, {"kind", n.kind}};
    if (n.geo_link) j["geo_link"] = *n.geo_link;
    if (n.kappa) j["kappa"] = true;
    if (n.leaf_type) j["leaf_type"] = *n.leaf_type;
    json children = json::array();
    for (const auto &c : n.children) children.push_back(node_json(c));
    j["children"] = children;
    return j;
  };
  json root;
  root["schema_version"] = kSchemaVersion;
  root["volume"] = {{"id", tree.meta().id},
                    {"title", tree.meta().title},
                    {"extremities", json::array({write_point(tree.meta().extremities.first),
                                                 write_point(tree.meta().extremities.second)})}};
  root["areas"] = geo::areas_to_geojson(tree.areas());
  if (!tree.root().empty()) root["root"] = node_json(tree.root());
  return root.dump(2) + "\n";
}

}  // namespace inaut::doc
