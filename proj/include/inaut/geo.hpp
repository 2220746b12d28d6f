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

// Planar geometry on (lon, lat) geopolygons: areas, clipping, partial
// inclusion, modifier-derived areas, and the area graph built from them.
//
// All computations treat degrees as planar coordinates. The fixtures this
// is used with span well under a degree, where the equirectangular error
// stays below test tolerances.

#ifndef INAUT_GEO_HPP_
#define INAUT_GEO_HPP_

#include <array>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "inaut/errors.hpp"
#include "json.hpp"

namespace inaut::geo {

struct Point {
  double lon = 0.0;
  double lat = 0.0;

  friend bool operator==(const Point &, const Point &) = default;
};

struct BoundingBox {
  double min_lon, min_lat, max_lon, max_lat;

  double width() const { return max_lon - min_lon; }
  double height() const { return max_lat - min_lat; }
  double area() const { return width() * height(); }
};

// A simple polygon given by its exterior ring. The ring is closed
// implicitly: the first vertex is not repeated at the end.
//
// The constructor validates the ring and throws DegeneratePolygon when it
// has fewer than three vertices, repeats a vertex consecutively, is
// self-intersecting, or encloses zero area.
class GeoPolygon {
 public:
  GeoPolygon(std::vector<Point> ring, std::string id = {});

  // Axis-aligned rectangle [min_lon, max_lon] x [min_lat, max_lat].
  static GeoPolygon Rectangle(double min_lon, double min_lat, double max_lon,
                              double max_lat, std::string id = {});

  const std::vector<Point> &ring() const { return ring_; }
  const std::string &id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  BoundingBox bbox() const;
  bool is_convex() const;
  GeoPolygon translated(double dlon, double dlat) const;
  GeoPolygon scaled(double factor) const;  // about the origin

  friend bool operator==(const GeoPolygon &a, const GeoPolygon &b) {
    return a.ring_ == b.ring_ && a.id_ == b.id_;
  }

 private:
  std::vector<Point> ring_;
  std::string id_;
};

// Signed shoelace area of a ring; positive for counter-clockwise rings.
// Accepts any ring, valid or not.
double signed_ring_area(std::span<const Point> ring);

// Absolute planar area in square degrees.
double polygon_area(const GeoPolygon &p);

// Area of the intersection of two valid polygons. Uses Sutherland-Hodgman
// when either operand is convex; otherwise the clip polygon is split into
// ear-clipped triangles and the pieces are summed.
double intersection_area(const GeoPolygon &a, const GeoPolygon &b);

// True iff Area(a_prime ∩ a) > 0.8 Area(a_prime). The inequality is strict.
bool partial_inclusion(const GeoPolygon &a_prime, const GeoPolygon &a);

// Area-weighted centroid.
Point barycenter(const GeoPolygon &p);

// Area-weighted mean of the barycenters of several polygons.
Point barycenter(std::span<const GeoPolygon> polygons);

// Ear-clipping triangulation of a valid polygon. Each triangle is returned
// counter-clockwise.
std::vector<std::array<Point, 3>> triangulate(const GeoPolygon &p);

// ---------------------------------------------------------------------------
// Modifiers

enum class ModifierKind {
  kNorth,
  kSouth,
  kEast,
  kWest,
  kNorthEast,
  kNorthWest,
  kSouthEast,
  kSouthWest,
  kInnermost,  // au fond de
  kEntrance,   // à l'entrée de
  kSurroundings,  // aux abords de
};

struct Modifier {
  std::string name;
  ModifierKind kind = ModifierKind::kNorth;
  double extent_factor = 1.0;
};

// The closed list of modifiers. Names are the French surface phrases,
// which is what INAUT text and the KB store.
class ModifierTable {
 public:
  ModifierTable();  // the built-in list with extent factor 1.0
  explicit ModifierTable(std::vector<Modifier> modifiers);

  const Modifier &get(const std::string &name) const;  // UnknownModifier
  const Modifier *find(const std::string &name) const;
  const std::vector<Modifier> &all() const { return modifiers_; }

 private:
  std::vector<Modifier> modifiers_;
};

// Builds the derived area of `m` applied to `p`.
//
// Directional modifiers produce the cell of the 3x3 grid around p's
// bounding box on the named side, stretched by the extent factor away from
// the box. "au fond de" and "à l'entrée de" take the third of the bounding
// box along its long axis farthest from, respectively nearest to, the
// polygon's opening (its longest convex-hull edge). "aux abords de" is the
// bounding box inflated by extent_factor times its size on every side,
// minus the box itself, closed through a slit of negligible width.
GeoPolygon apply_modifier(const Modifier &m, const GeoPolygon &p);

// ---------------------------------------------------------------------------
// Area graph

// Directed graph of partial inclusion between named areas. An edge (from,
// to) means partial_inclusion(area(from), area(to)).
class AreaGraph {
 public:
  AreaGraph() = default;

  const std::map<std::string, GeoPolygon> &areas() const { return areas_; }
  const std::set<std::pair<std::string, std::string>> &edges() const {
    return edges_;
  }

  bool contains(const std::string &node) const { return areas_.count(node); }
  const GeoPolygon &area_of(const std::string &node) const;
  bool has_edge(const std::string &from, const std::string &to) const {
    return edges_.count({from, to}) > 0;
  }
  // Partial inclusion of `node` in `target`, reflexive (a node is included
  // in itself although no self-loop is stored).
  bool included_in(const std::string &node, const std::string &target) const;

  std::vector<std::string> successors(const std::string &node) const;
  std::string to_dot() const;

 private:
  friend AreaGraph build_area_graph(std::map<std::string, GeoPolygon> areas);
  std::map<std::string, GeoPolygon> areas_;
  std::set<std::pair<std::string, std::string>> edges_;
};

// Computes every pairwise partial-inclusion edge. Mutual inclusion keeps
// both directions. DegeneratePolygon carries the offending node id.
AreaGraph build_area_graph(std::map<std::string, GeoPolygon> areas);

// ---------------------------------------------------------------------------
// GeoJSON (RFC 7946 Polygon, exterior ring only)

nlohmann::json to_geojson(const GeoPolygon &p);
GeoPolygon polygon_from_geojson(const nlohmann::json &geometry,
                                std::string id = {});

// FeatureCollection keyed by feature id <-> area map.
nlohmann::json areas_to_geojson(const std::map<std::string, GeoPolygon> &areas);
std::map<std::string, GeoPolygon> areas_from_geojson(const nlohmann::json &fc);

}  // namespace inaut::geo

#endif  // INAUT_GEO_HPP_
