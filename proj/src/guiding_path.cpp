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

#include "inaut/guiding_path.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace inaut::geo {

namespace {

struct SegmentHit {
  double distance2 = std::numeric_limits<double>::infinity();
  double arc = 0.0;
  size_t segment = 0;
};

SegmentHit closest(const std::vector<Point> &w, const Point &p) {
  SegmentHit best;
  double arc = 0.0;
  for (size_t i = 0; i + 1 < w.size(); ++i) {
    const double dx = w[i + 1].lon - w[i].lon;
    const double dy = w[i + 1].lat - w[i].lat;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((p.lon - w[i].lon) * dx + (p.lat - w[i].lat) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const double qx = w[i].lon + t * dx - p.lon;
    const double qy = w[i].lat + t * dy - p.lat;
    const double d2 = qx * qx + qy * qy;
    const double len = std::sqrt(len2);
    if (d2 < best.distance2) best = {d2, arc + t * len, i};
    arc += len;
  }
  return best;
}

}  // namespace

double GuidingPath::length() const {
  double total = 0.0;
  for (size_t i = 0; i + 1 < waypoints.size(); ++i) {
    total += std::hypot(waypoints[i + 1].lon - waypoints[i].lon,
                        waypoints[i + 1].lat - waypoints[i].lat);
  }
  return total;
}

double GuidingPath::project(const Point &p) const { return closest(waypoints, p).arc; }

Point GuidingPath::direction_at(const Point &p) const {
  if (waypoints.size() < 2) return {0.0, 0.0};
  const size_t i = closest(waypoints, p).segment;
  const double dx = waypoints[i + 1].lon - waypoints[i].lon;
  const double dy = waypoints[i + 1].lat - waypoints[i].lat;
  const double len = std::hypot(dx, dy);
  return len > 0 ? Point{dx / len, dy / len} : Point{0.0, 0.0};
}

GuidingPath guiding_path(const doc::DocTree &doc, const AreaGraph &graph) {
  GuidingPath path;
  path.source = doc.meta().id;
  std::vector<Point> centers;
  for (const auto &id : doc.preorder()) {
    const doc::DocNode &n = doc.node(id);
    if (n.level < 1 || n.level > 3 || !n.geo_link) continue;
    const GeoPolygon *area = nullptr;
    if (graph.contains(*n.geo_link)) {
      area = &graph.area_of(*n.geo_link);
    } else if (auto it = doc.areas().find(*n.geo_link); it != doc.areas().end()) {
      area = &it->second;
    } else {
      throw NoGeoArea("section '" + id + "' links to unknown area '" + *n.geo_link + "'");
    }
    centers.push_back(barycenter(*area));
  }
  if (centers.empty()) {
    throw NoGeoreferencedNodes("volume '" + doc.meta().id +
                               "' has no georeferenced section at levels 1-3");
  }
  const auto &[start, end] = doc.meta().extremities;
  const bool has_extremities = !(start == end);
  auto push = [&](const Point &p) {
    if (path.waypoints.empty() || !(path.waypoints.back() == p)) path.waypoints.push_back(p);
  };
  if (has_extremities) push(start);
  for (const auto &c : centers) push(c);
  if (has_extremities) push(end);
  if (path.waypoints.size() < 2) {
    throw NoGeoreferencedNodes("guiding path of '" + doc.meta().id +
                               "' has fewer than two distinct waypoints");
  }
  return path;
}

}  // namespace inaut::geo
