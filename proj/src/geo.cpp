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

#include "inaut/geo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace inaut::geo {
namespace {

double cross(const Point &o, const Point &a, const Point &b) {
  return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

int sign(double v) { return (v > 0) - (v < 0); }

bool on_segment(const Point &p, const Point &a, const Point &b) {
  return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
         std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

// Closed-segment intersection test, including touching and collinear
// overlap.
bool segments_intersect(const Point &p1, const Point &p2, const Point &q1,
                        const Point &q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

std::string label(const std::string &id) {
  return id.empty() ? std::string("polygon") : "polygon '" + id + "'";
}

std::vector<Point> ccw(std::vector<Point> ring) {
  if (signed_ring_area(ring) < 0) std::reverse(ring.begin(), ring.end());
  return ring;
}

bool is_axis_rectangle(const std::vector<Point> &r) {
  if (r.size() != 4) return false;
  for (size_t i = 0; i < 4; ++i) {
    const Point &a = r[i];
    const Point &b = r[(i + 1) % 4];
    if (a.lon != b.lon && a.lat != b.lat) return false;
  }
  return true;
}

// Sutherland-Hodgman: clips `subject` by the convex counter-clockwise
// `clip` ring.
std::vector<Point> clip_convex(std::vector<Point> subject,
                               const std::vector<Point> &clip) {
  for (size_t i = 0; i < clip.size() && !subject.empty(); ++i) {
    const Point &c1 = clip[i];
    const Point &c2 = clip[(i + 1) % clip.size()];
    std::vector<Point> out;
    out.reserve(subject.size() + 2);
    for (size_t j = 0; j < subject.size(); ++j) {
      const Point &s = subject[j];
      const Point &e = subject[(j + 1) % subject.size()];
      const double cs = cross(c1, c2, s);
      const double ce = cross(c1, c2, e);
      const bool s_in = cs >= 0;
      const bool e_in = ce >= 0;
      if (s_in) out.push_back(s);
      if (s_in != e_in) {
        const double t = cs / (cs - ce);
        out.push_back({s.lon + t * (e.lon - s.lon), s.lat + t * (e.lat - s.lat)});
      }
    }
    subject = std::move(out);
  }
  return subject;
}

double clipped_area(const std::vector<Point> &subject,
                    const std::vector<Point> &convex_ccw_clip) {
  const auto piece = clip_convex(subject, convex_ccw_clip);
  if (piece.size() < 3) return 0.0;
  return std::fabs(signed_ring_area(piece));
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point &a, const Point &b) {
    return a.lon < b.lon || (a.lon == b.lon && a.lat < b.lat);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<Point> hull(2 * pts.size());
  size_t k = 0;
  for (const auto &p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  for (size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    const Point &p = pts[i - 1];
    while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

}  // namespace

// ---------------------------------------------------------------------------

GeoPolygon::GeoPolygon(std::vector<Point> ring, std::string id)
    : ring_(std::move(ring)), id_(std::move(id)) {
  if (ring_.size() >= 2 && ring_.front() == ring_.back()) ring_.pop_back();
  const size_t n = ring_.size();
  if (n < 3) {
    throw DegeneratePolygon(label(id_) + " has fewer than 3 vertices");
  }
  for (size_t i = 0; i < n; ++i) {
    const Point &p = ring_[i];
    if (!std::isfinite(p.lon) || !std::isfinite(p.lat)) {
      throw DegeneratePolygon(label(id_) + " has a non-finite coordinate");
    }
    if (p == ring_[(i + 1) % n]) {
      throw DegeneratePolygon(label(id_) + " repeats vertex " +
                              std::to_string(i));
    }
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) {
        // Adjacent edges share one endpoint; they may only fold back onto
        // each other when collinear.
        const size_t a = (j == i + 1) ? i : j;  // first vertex of first edge
        const Point &p0 = ring_[a];
        const Point &p1 = ring_[(a + 1) % n];
        const Point &p2 = ring_[(a + 2) % n];
        if (cross(p0, p1, p2) == 0) {
          const double dot = (p1.lon - p0.lon) * (p2.lon - p1.lon) +
                             (p1.lat - p0.lat) * (p2.lat - p1.lat);
          if (dot < 0) {
            throw DegeneratePolygon(label(id_) + " folds back at vertex " +
                                    std::to_string((a + 1) % n));
          }
        }
        continue;
      }
      if (segments_intersect(ring_[i], ring_[(i + 1) % n], ring_[j],
                             ring_[(j + 1) % n])) {
        throw DegeneratePolygon(label(id_) + " is self-intersecting (edges " +
                                std::to_string(i) + " and " +
                                std::to_string(j) + ")");
      }
    }
  }
  if (signed_ring_area(ring_) == 0) {
    throw DegeneratePolygon(label(id_) + " has collinear vertices only");
  }
}

GeoPolygon GeoPolygon::Rectangle(double min_lon, double min_lat,
                                 double max_lon, double max_lat,
                                 std::string id) {
  return GeoPolygon({{min_lon, min_lat},
                     {max_lon, min_lat},
                     {max_lon, max_lat},
                     {min_lon, max_lat}},
                    std::move(id));
}

BoundingBox GeoPolygon::bbox() const {
  BoundingBox b{ring_[0].lon, ring_[0].lat, ring_[0].lon, ring_[0].lat};
  for (const auto &p : ring_) {
    b.min_lon = std::min(b.min_lon, p.lon);
    b.min_lat = std::min(b.min_lat, p.lat);
    b.max_lon = std::max(b.max_lon, p.lon);
    b.max_lat = std::max(b.max_lat, p.lat);
  }
  return b;
}

bool GeoPolygon::is_convex() const {
  const size_t n = ring_.size();
  int dir = 0;
  for (size_t i = 0; i < n; ++i) {
    const int s = sign(cross(ring_[i], ring_[(i + 1) % n], ring_[(i + 2) % n]));
    if (s == 0) continue;
    if (dir == 0) dir = s;
    if (s != dir) return false;
  }
  return true;
}

GeoPolygon GeoPolygon::translated(double dlon, double dlat) const {
  std::vector<Point> r = ring_;
  for (auto &p : r) {
    p.lon += dlon;
    p.lat += dlat;
  }
  return GeoPolygon(std::move(r), id_);
}

GeoPolygon GeoPolygon::scaled(double factor) const {
  std::vector<Point> r = ring_;
  for (auto &p : r) {
    p.lon *= factor;
    p.lat *= factor;
  }
  return GeoPolygon(std::move(r), id_);
}

double signed_ring_area(std::span<const Point> ring) {
  if (ring.size() < 3) return 0.0;
  // Relative to the first vertex to limit cancellation on real coordinates.
  const Point &o = ring[0];
  double sum = 0.0;
  for (size_t i = 1; i + 1 < ring.size(); ++i) {
    sum += cross(o, ring[i], ring[i + 1]);
  }
  return sum / 2.0;
}

double polygon_area(const GeoPolygon &p) {
  return std::fabs(signed_ring_area(p.ring()));
}

double intersection_area(const GeoPolygon &a, const GeoPolygon &b) {
  const BoundingBox ba = a.bbox();
  const BoundingBox bb = b.bbox();
  if (ba.max_lon <= bb.min_lon || bb.max_lon <= ba.min_lon ||
      ba.max_lat <= bb.min_lat || bb.max_lat <= ba.min_lat) {
    return 0.0;
  }
  if (is_axis_rectangle(a.ring()) && is_axis_rectangle(b.ring())) {
    return (std::min(ba.max_lon, bb.max_lon) - std::max(ba.min_lon, bb.min_lon)) *
           (std::min(ba.max_lat, bb.max_lat) - std::max(ba.min_lat, bb.min_lat));
  }
  if (b.is_convex()) return clipped_area(a.ring(), ccw(b.ring()));
  if (a.is_convex()) return clipped_area(b.ring(), ccw(a.ring()));
  double total = 0.0;
  for (const auto &tri : triangulate(b)) {
    total += clipped_area(a.ring(), {tri.begin(), tri.end()});
  }
  return total;
}

bool partial_inclusion(const GeoPolygon &a_prime, const GeoPolygon &a) {
  return intersection_area(a_prime, a) > 0.8 * polygon_area(a_prime);
}

Point barycenter(const GeoPolygon &p) {
  const auto &r = p.ring();
  const Point &o = r[0];
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  for (size_t i = 1; i + 1 < r.size(); ++i) {
    const double c = cross(o, r[i], r[i + 1]);
    area2 += c;
    cx += c * ((r[i].lon - o.lon) + (r[i + 1].lon - o.lon));
    cy += c * ((r[i].lat - o.lat) + (r[i + 1].lat - o.lat));
  }
  if (area2 == 0) throw DegeneratePolygon(label(p.id()) + " has zero area");
  return {o.lon + cx / (3.0 * area2), o.lat + cy / (3.0 * area2)};
}

Point barycenter(std::span<const GeoPolygon> polygons) {
  double total = 0.0, lon = 0.0, lat = 0.0;
  for (const auto &p : polygons) {
    const double a = polygon_area(p);
    const Point c = barycenter(p);
    total += a;
    lon += a * c.lon;
    lat += a * c.lat;
  }
  if (total <= 0) throw DegeneratePolygon("empty polygon set has no barycenter");
  return {lon / total, lat / total};
}

std::vector<std::array<Point, 3>> triangulate(const GeoPolygon &p) {
  std::vector<Point> v = ccw(p.ring());
  std::vector<std::array<Point, 3>> out;
  auto inside = [](const Point &q, const Point &a, const Point &b,
                   const Point &c) {
    return cross(a, b, q) >= 0 && cross(b, c, q) >= 0 && cross(c, a, q) >= 0;
  };
  while (v.size() > 3) {
    const size_t n = v.size();
    bool clipped = false;
    for (size_t i = 0; i < n; ++i) {
      const Point &a = v[(i + n - 1) % n];
      const Point &b = v[i];
      const Point &c = v[(i + 1) % n];
      const double turn = cross(a, b, c);
      if (turn < 0) continue;
      if (turn == 0) {
        // Collinear vertex: drop it without emitting a triangle.
        v.erase(v.begin() + static_cast<long>(i));
        clipped = true;
        break;
      }
      bool ear = true;
      for (size_t j = 0; j < n && ear; ++j) {
        if (j == i || j == (i + 1) % n || j == (i + n - 1) % n) continue;
        if (v[j] == a || v[j] == b || v[j] == c) continue;
        if (inside(v[j], a, b, c)) ear = false;
      }
      if (!ear) continue;
      out.push_back({a, b, c});
      v.erase(v.begin() + static_cast<long>(i));
      clipped = true;
      break;
    }
    if (!clipped) {
      throw DegeneratePolygon(label(p.id()) + " could not be triangulated");
    }
  }
  if (cross(v[0], v[1], v[2]) > 0) out.push_back({v[0], v[1], v[2]});
  return out;
}

// ---------------------------------------------------------------------------

ModifierTable::ModifierTable()
    : ModifierTable({
          {"au nord de", ModifierKind::kNorth, 1.0},
          {"au sud de", ModifierKind::kSouth, 1.0},
          {"à l'est de", ModifierKind::kEast, 1.0},
          {"à l'ouest de", ModifierKind::kWest, 1.0},
          {"au nord-est de", ModifierKind::kNorthEast, 1.0},
          {"au nord-ouest de", ModifierKind::kNorthWest, 1.0},
          {"au sud-est de", ModifierKind::kSouthEast, 1.0},
          {"au sud-ouest de", ModifierKind::kSouthWest, 1.0},
          {"au fond de", ModifierKind::kInnermost, 1.0},
          {"à l'entrée de", ModifierKind::kEntrance, 1.0},
          {"aux abords de", ModifierKind::kSurroundings, 1.0},
      }) {}

ModifierTable::ModifierTable(std::vector<Modifier> modifiers)
    : modifiers_(std::move(modifiers)) {}

const Modifier *ModifierTable::find(const std::string &name) const {
  for (const auto &m : modifiers_) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const Modifier &ModifierTable::get(const std::string &name) const {
  const Modifier *m = find(name);
  if (m == nullptr) throw UnknownModifier("unknown modifier '" + name + "'");
  return *m;
}

GeoPolygon apply_modifier(const Modifier &m, const GeoPolygon &p) {
  if (!(m.extent_factor > 0) || !std::isfinite(m.extent_factor)) {
    throw UnknownModifier("modifier '" + m.name + "' has a non-positive extent");
  }
  const BoundingBox b = p.bbox();
  const double w = b.width();
  const double h = b.height();
  const double f = m.extent_factor;
  const std::string id = p.id().empty() ? std::string() : m.name + ":" + p.id();
  switch (m.kind) {
    case ModifierKind::kNorth:
      return GeoPolygon::Rectangle(b.min_lon, b.max_lat, b.max_lon, b.max_lat + f * h, id);
    case ModifierKind::kSouth:
      return GeoPolygon::Rectangle(b.min_lon, b.min_lat - f * h, b.max_lon, b.min_lat, id);
    case ModifierKind::kEast:
      return GeoPolygon::Rectangle(b.max_lon, b.min_lat, b.max_lon + f * w, b.max_lat, id);
    case ModifierKind::kWest:
      return GeoPolygon::Rectangle(b.min_lon - f * w, b.min_lat, b.min_lon, b.max_lat, id);
    case ModifierKind::kNorthEast:
      return GeoPolygon::Rectangle(b.max_lon, b.max_lat, b.max_lon + f * w, b.max_lat + f * h, id);
    case ModifierKind::kNorthWest:
      return GeoPolygon::Rectangle(b.min_lon - f * w, b.max_lat, b.min_lon, b.max_lat + f * h, id);
    case ModifierKind::kSouthEast:
      return GeoPolygon::Rectangle(b.max_lon, b.min_lat - f * h, b.max_lon + f * w, b.min_lat, id);
    case ModifierKind::kSouthWest:
      return GeoPolygon::Rectangle(b.min_lon - f * w, b.min_lat - f * h, b.min_lon, b.min_lat, id);
    case ModifierKind::kInnermost:
    case ModifierKind::kEntrance: {
      const auto hull = convex_hull(p.ring());
      size_t best = 0;
      double best_len = -1;
      for (size_t i = 0; i < hull.size(); ++i) {
        const Point &a = hull[i];
        const Point &c = hull[(i + 1) % hull.size()];
        const double len = std::hypot(c.lon - a.lon, c.lat - a.lat);
        if (len > best_len) {
          best_len = len;
          best = i;
        }
      }
      const Point &a = hull[best];
      const Point &c = hull[(best + 1) % hull.size()];
      const Point mid{(a.lon + c.lon) / 2, (a.lat + c.lat) / 2};
      const double frac = std::min(1.0, f / 3.0);
      const bool along_lon = w >= h;
      const double lo = along_lon ? b.min_lon : b.min_lat;
      const double hi = along_lon ? b.max_lon : b.max_lat;
      const double at = along_lon ? mid.lon : mid.lat;
      const bool opening_high = (hi - at) <= (at - lo);
      const bool want_high = (m.kind == ModifierKind::kEntrance) == opening_high;
      const double span = (hi - lo) * frac;
      const double s0 = want_high ? hi - span : lo;
      const double s1 = want_high ? hi : lo + span;
      if (along_lon) return GeoPolygon::Rectangle(s0, b.min_lat, s1, b.max_lat, id);
      return GeoPolygon::Rectangle(b.min_lon, s0, b.max_lon, s1, id);
    }
    case ModifierKind::kSurroundings: {
      const double mx = f * w / 2, my = f * h / 2;
      const double X0 = b.min_lon - mx, X1 = b.max_lon + mx;
      const double Y0 = b.min_lat - my;
      const double Y1 = b.max_lat + my;
      const double cx = (b.min_lon + b.max_lon) / 2;
      const double slit = w * 1e-6;
      return GeoPolygon({{cx + slit, Y0},
                         {X1, Y0},
                         {X1, Y1},
                         {X0, Y1},
                         {X0, Y0},
                         {cx - slit, Y0},
                         {cx - slit, b.min_lat},
                         {b.min_lon, b.min_lat},
                         {b.min_lon, b.max_lat},
                         {b.max_lon, b.max_lat},
                         {b.max_lon, b.min_lat},
                         {cx + slit, b.min_lat}},
                        id);
    }
  }
  throw UnknownModifier("unhandled modifier kind for '" + m.name + "'");
}

// ---------------------------------------------------------------------------

const GeoPolygon &AreaGraph::area_of(const std::string &node) const {
  auto it = areas_.find(node);
  if (it == areas_.end()) throw NoGeoArea("unknown area node '" + node + "'");
  return it->second;
}

bool AreaGraph::included_in(const std::string &node,
                            const std::string &target) const {
  if (node == target) return contains(node);
  return has_edge(node, target);
}

std::vector<std::string> AreaGraph::successors(const std::string &node) const {
  std::vector<std::string> out;
  for (auto it = edges_.lower_bound({node, std::string()});
       it != edges_.end() && it->first == node; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::string AreaGraph::to_dot() const {
  std::ostringstream os;
  os << "digraph areas {\n";
  for (const auto &[id, poly] : areas_) os << "  \"" << id << "\";\n";
  for (const auto &[from, to] : edges_) {
    os << "  \"" << from << "\" -> \"" << to << "\";\n";
  }
  os << "}\n";
  return os.str();
}

AreaGraph build_area_graph(std::map<std::string, GeoPolygon> areas) {
  AreaGraph g;
  std::map<std::string, double> area;
  std::map<std::string, BoundingBox> box;
  for (auto &[id, poly] : areas) {
    const double a = polygon_area(poly);
    if (!(a > 0)) throw DegeneratePolygon("area node '" + id + "' has zero area");
    area[id] = a;
    box[id] = poly.bbox();
  }
  for (const auto &[from, pf] : areas) {
    for (const auto &[to, pt] : areas) {
      if (from == to) continue;
      const BoundingBox &bf = box[from];
      const BoundingBox &bt = box[to];
      const double ow = std::min(bf.max_lon, bt.max_lon) - std::max(bf.min_lon, bt.min_lon);
      const double oh = std::min(bf.max_lat, bt.max_lat) - std::max(bf.min_lat, bt.min_lat);
      if (ow <= 0 || oh <= 0 || ow * oh <= 0.8 * area[from]) continue;
      if (intersection_area(pf, pt) > 0.8 * area[from]) g.edges_.insert({from, to});
    }
  }
  g.areas_ = std::move(areas);
  return g;
}

// ---------------------------------------------------------------------------

nlohmann::json to_geojson(const GeoPolygon &p) {
  nlohmann::json ring = nlohmann::json::array();
  for (const auto &pt : p.ring()) ring.push_back({pt.lon, pt.lat});
  ring.push_back({p.ring().front().lon, p.ring().front().lat});
  return {{"type", "Polygon"}, {"coordinates", nlohmann::json::array({ring})}};
}

GeoPolygon polygon_from_geojson(const nlohmann::json &geometry, std::string id) {
  if (!geometry.is_object() || geometry.value("type", "") != "Polygon" ||
      !geometry.contains("coordinates") || !geometry["coordinates"].is_array() ||
      geometry["coordinates"].empty()) {
    throw ParseError("expected a GeoJSON Polygon for " + label(id), 0, 0);
  }
  if (geometry["coordinates"].size() > 1) {
    throw ParseError(label(id) + " has holes, which are not supported", 0, 0);
  }
  std::vector<Point> ring;
  for (const auto &c : geometry["coordinates"][0]) {
    if (!c.is_array() || c.size() < 2 || !c[0].is_number() || !c[1].is_number()) {
      throw ParseError("malformed position in " + label(id), 0, 0);
    }
    ring.push_back({c[0].get<double>(), c[1].get<double>()});
  }
  return GeoPolygon(std::move(ring), std::move(id));
}

nlohmann::json areas_to_geojson(const std::map<std::string, GeoPolygon> &areas) {
  nlohmann::json features = nlohmann::json::array();
  for (const auto &[id, poly] : areas) {
    features.push_back({{"type", "Feature"},
                        {"id", id},
                        {"properties", nlohmann::json::object()},
                        {"geometry", to_geojson(poly)}});
  }
  return {{"type", "FeatureCollection"}, {"features", features}};
}

std::map<std::string, GeoPolygon> areas_from_geojson(const nlohmann::json &fc) {
  std::map<std::string, GeoPolygon> out;
  if (!fc.is_object() || fc.value("type", "") != "FeatureCollection" ||
      !fc.contains("features") || !fc["features"].is_array()) {
    throw ParseError("expected a GeoJSON FeatureCollection of areas", 0, 0);
  }
  for (const auto &f : fc["features"]) {
    if (!f.contains("id") || !f["id"].is_string()) {
      throw ParseError("area feature without a string id", 0, 0);
    }
    const std::string id = f["id"].get<std::string>();
    out.emplace(id, polygon_from_geojson(f.value("geometry", nlohmann::json()), id));
  }
  return out;
}

}  // namespace inaut::geo
