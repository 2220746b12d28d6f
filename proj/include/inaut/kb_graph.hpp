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

// Graph view of a knowledge base. Instances are nodes, simple relation
// instances are edges between their two members, complex relation
// instances are reified nodes joined to their members by role edges, and
// attribute values are value nodes hanging off their holder.
#ifndef INAUT_KB_GRAPH_HPP_
#define INAUT_KB_GRAPH_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include "inaut/kb.hpp"

namespace inaut::kb {

enum class NodeKind { kInstance, kRelation, kValue };

struct GraphNode {
  std::string id;     // "i:<instance>", "r:<relation>", "v:<holder>@<role>"
  NodeKind kind = NodeKind::kInstance;
  std::string ref;    // instance id, relation id, or the value itself
  friend bool operator==(const GraphNode &, const GraphNode &) = default;
};

struct GraphEdge {
  std::string id;
  std::string from;
  std::string to;
  std::string label;     // role name, schema id for simple edges
  std::string relation;  // relation instance id, empty for instance attributes
  friend bool operator==(const GraphEdge &, const GraphEdge &) = default;
};

std::string instance_node(const std::string &instance_id);
std::string relation_node(const std::string &relation_id);

class KbGraph {
 public:
  void add_node(GraphNode n);
  // Both endpoints must already be present.
  void add_edge(GraphEdge e);

  const std::map<std::string, GraphNode> &nodes() const { return nodes_; }
  const std::map<std::string, GraphEdge> &edges() const { return edges_; }
  bool has_node(const std::string &id) const { return nodes_.count(id) > 0; }
  bool has_edge(const std::string &id) const { return edges_.count(id) > 0; }
  const GraphNode &node(const std::string &id) const { return nodes_.at(id); }
  bool empty() const { return nodes_.empty(); }

  // Undirected incident edges of a node, in edge-id order.
  std::vector<const GraphEdge *> incident(const std::string &node) const;
  std::vector<std::string> neighbors(const std::string &node) const;

  // Instance ids and relation instance ids present in the graph.
  std::set<std::string> instance_ids() const;
  std::set<std::string> relation_ids() const;

  std::string to_dot() const;

  friend bool operator==(const KbGraph &a, const KbGraph &b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::map<std::string, GraphNode> nodes_;
  std::map<std::string, GraphEdge> edges_;
  std::map<std::string, std::set<std::string>> incidence_;
};

KbGraph build_kb_graph(const KnowledgeBase &kb);

// Partition under undirected adjacency, ordered by smallest node id.
std::vector<KbGraph> connected_components(const KbGraph &g);

}  // namespace inaut::kb

#endif  // INAUT_KB_GRAPH_HPP_
