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


// Independent straight-line reference implementations.
#ifndef INAUT_TESTS_ORACLES_HPP_
#define INAUT_TESTS_ORACLES_HPP_

#include <random>
#include <set>
#include <string>

#include "inaut/geo.hpp"
#include "inaut/kb.hpp"
#include "inaut/kb_graph.hpp"

namespace testing {

struct NodeEdgeSets {
  std::set<std::string> nodes;
  std::set<std::string> edges;
  friend bool operator==(const NodeEdgeSets &, const NodeEdgeSets &) = default;
};

inline NodeEdgeSets sets_of(const inaut::kb::KbGraph &g) {
  NodeEdgeSets s;
  for (const auto &[id, n] : g.nodes()) s.nodes.insert(id);
  for (const auto &[id, e] : g.edges()) s.edges.insert(id);
  return s;
}

// Selection by repeated full sweeps over the edge list until nothing
// changes; `inside` holds for the georeferenced instances whose area is
// included in G_S.
inline NodeEdgeSets straight_line_oracle(const inaut::kb::KnowledgeBase &kb,
                                      const inaut::kb::KbGraph &full,
                                      const std::set<std::string> &inside) {
  using inaut::kb::NodeKind;
  auto georef = [&](const inaut::kb::GraphNode &n) {
    if (n.kind != NodeKind::kInstance) return false;
    const auto *i = kb.find_instance(n.ref);
    return i && i->georeferenced && i->geo_ref && kb.areas().count(*i->geo_ref);
  };
  auto in_gs = [&](const inaut::kb::GraphNode &n) { return georef(n) && inside.count(n.ref) > 0; };

  NodeEdgeSets k;
  for (const auto &[id, n] : full.nodes()) {
    if (in_gs(n)) k.nodes.insert(id);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &[eid, e] : full.edges()) {
      if (k.edges.count(eid)) continue;
      for (int side = 0; side < 2; ++side) {
        const std::string &a = side ? e.to : e.from;
        const std::string &b = side ? e.from : e.to;
        if (!k.nodes.count(a) || k.edges.count(eid)) continue;
        const auto &nb = full.node(b);
        bool take = false;
        if (nb.kind == NodeKind::kValue) take = true;
        if (nb.kind == NodeKind::kInstance && (!georef(nb) || in_gs(nb))) take = true;
        if (nb.kind == NodeKind::kRelation) {
          bool member_inside = false;
          for (const auto &[fid, f] : full.edges()) {
            const std::string *other = f.from == b ? &f.to : f.to == b ? &f.from : nullptr;
            if (other && in_gs(full.node(*other))) member_inside = true;
          }
          if (member_inside) {
            for (const auto &[fid, f] : full.edges()) {
              const std::string *other = f.from == b ? &f.to : f.to == b ? &f.from : nullptr;
              if (!other || full.node(*other).kind != NodeKind::kInstance) continue;
              k.nodes.insert(*other);
              k.edges.insert(fid);
            }
            take = true;
          }
        }
        if (take) {
          k.nodes.insert(b);
          k.edges.insert(eid);
          changed = true;
        }
      }
    }
  }
  return k;
}

// Monte Carlo estimate of the area of a ∩ b, sampling a's bounding box.
inline double mc_intersection(const inaut::geo::GeoPolygon &a, const inaut::geo::GeoPolygon &b,
                              int samples, std::mt19937 &rng) {
  auto inside = [](const inaut::geo::GeoPolygon &p, double x, double y) {
    bool in = false;
    const auto &r = p.ring();
    for (size_t i = 0, j = r.size() - 1; i < r.size(); j = i++) {
      if ((r[i].lat > y) != (r[j].lat > y) &&
          x < (r[j].lon - r[i].lon) * (y - r[i].lat) / (r[j].lat - r[i].lat) + r[i].lon) {
        in = !in;
      }
    }
    return in;
  };
  const auto bb = a.bbox();
  std::uniform_real_distribution<double> ux(bb.min_lon, bb.max_lon), uy(bb.min_lat, bb.max_lat);
  int hits = 0;
  for (int i = 0; i < samples; ++i) {
    const double x = ux(rng), y = uy(rng);
    if (inside(a, x, y) && inside(b, x, y)) ++hits;
  }
  return bb.area() * hits / samples;
}

}  // namespace testing

#endif  // INAUT_TESTS_ORACLES_HPP_
