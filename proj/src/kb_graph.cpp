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

#include "inaut/kb_graph.hpp"

#include <sstream>

namespace inaut::kb {

std::string instance_node(const std::string &instance_id) { return "i:" + instance_id; }
std::string relation_node(const std::string &relation_id) { return "r:" + relation_id; }

void KbGraph::add_node(GraphNode n) {
  const std::string id = n.id;
  nodes_.emplace(id, std::move(n));
  incidence_[id];
}

void KbGraph::add_edge(GraphEdge e) {
  if (!has_node(e.from) || !has_node(e.to)) {
    throw InvariantViolation("edge '" + e.id + "' has a missing endpoint");
  }
  incidence_[e.from].insert(e.id);
  incidence_[e.to].insert(e.id);
  const std::string id = e.id;
  edges_.emplace(id, std::move(e));
}

std::vector<const GraphEdge *> KbGraph::incident(const std::string &node) const {
  std::vector<const GraphEdge *> out;
  auto it = incidence_.find(node);
  if (it == incidence_.end()) return out;
  for (const auto &eid : it->second) out.push_back(&edges_.at(eid));
  return out;
}

std::vector<std::string> KbGraph::neighbors(const std::string &node) const {
  std::set<std::string> out;
  for (const auto *e : incident(node)) out.insert(e->from == node ? e->to : e->from);
  return {out.begin(), out.end()};
}

std::set<std::string> KbGraph::instance_ids() const {
  std::set<std::string> out;
  for (const auto &[id, n] : nodes_) {
    if (n.kind == NodeKind::kInstance) out.insert(n.ref);
  }
  return out;
}

std::set<std::string> KbGraph::relation_ids() const {
  std::set<std::string> out;
  for (const auto &[id, n] : nodes_) {
    if (n.kind == NodeKind::kRelation) out.insert(n.ref);
  }
  for (const auto &[id, e] : edges_) {
    if (!e.relation.empty()) out.insert(e.relation);
  }
  return out;
}

std::string KbGraph::to_dot() const {
  std::ostringstream os;
  os << "graph K {\n";
  for (const auto &[id, n] : nodes_) {
    const char *shape = n.kind == NodeKind::kRelation ? "box"
                        : n.kind == NodeKind::kValue  ? "plaintext"
                                                      : "ellipse";
    os << "  \"" << id << "\" [label=\"" << n.ref << "\", shape=" << shape << "];\n";
  }
  for (const auto &[id, e] : edges_) {
    os << "  \"" << e.from << "\" -- \"" << e.to << "\" [label=\"" << e.label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

KbGraph build_kb_graph(const KnowledgeBase &kb) {
  KbGraph g;
  for (const auto &[id, inst] : kb.instances()) {
    g.add_node({instance_node(id), NodeKind::kInstance, id});
  }
  for (const auto &[id, ri] : kb.relations()) {
    const auto schema = kb.schema(ri.schema);
    if (!schema) continue;
    bool members_known = true;
    for (const auto &[role, m] : ri.members) members_known &= g.has_node(instance_node(m));
    if (!members_known) continue;
    if (!schema->complex) {
      auto d = ri.members.find(kDomainRole);
      auto r = ri.members.find(kRangeRole);
      if (d == ri.members.end() || r == ri.members.end()) continue;
      g.add_edge({"e:" + id, instance_node(d->second), instance_node(r->second),
                  ri.schema, id});
      continue;
    }
    const std::string rn = relation_node(id);
    g.add_node({rn, NodeKind::kRelation, id});
    for (const auto &[role, m] : ri.members) {
      g.add_edge({"e:" + id + "/" + role, rn, instance_node(m), role, id});
    }
    for (const auto &[role, value] : ri.attributes) {
      const std::string vn = "v:" + id + "@" + role;
      g.add_node({vn, NodeKind::kValue, value});
      g.add_edge({"e:" + id + "/" + role, rn, vn, role, id});
    }
  }
  for (const auto &ai : kb.attribute_instances()) {
    const std::string in = instance_node(ai.instance);
    if (!g.has_node(in)) continue;
    const std::string vn = "v:" + ai.instance + "#" + ai.attribute + "=" + ai.value;
    g.add_node({vn, NodeKind::kValue, ai.value});
    g.add_edge({"e:" + ai.instance + "#" + ai.attribute + "=" + ai.value, in, vn,
                ai.attribute, ""});
  }
  return g;
}

std::vector<KbGraph> connected_components(const KbGraph &g) {
  std::vector<KbGraph> out;
  std::set<std::string> seen;
  for (const auto &[start, n] : g.nodes()) {
    if (seen.count(start)) continue;
    KbGraph comp;
    std::set<std::string> edge_ids;
    std::vector<std::string> stack{start};
    seen.insert(start);
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      comp.add_node(g.node(cur));
      for (const auto *e : g.incident(cur)) {
        edge_ids.insert(e->id);
        const std::string &other = e->from == cur ? e->to : e->from;
        if (seen.insert(other).second) stack.push_back(other);
      }
    }
    for (const auto &eid : edge_ids) comp.add_edge(g.edges().at(eid));
    out.push_back(std::move(comp));
  }
  return out;
}

}  // namespace inaut::kb
