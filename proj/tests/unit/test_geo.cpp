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


#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "inaut/doc.hpp"
#include "inaut/errors.hpp"
#include "inaut/geo.hpp"
#include "inaut/guiding_path.hpp"
#include "oracles.hpp"

using namespace inaut;
using namespace inaut::geo;

namespace {

GeoPolygon random_star(std::mt19937 &rng, int n) {
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> jitter(0, 0.8);
  std::vector<Point> ring;
  for (int i = 0; i < n; ++i) {
    const double a = 2 * std::numbers::pi * (i + jitter(rng)) / n;
    const double r = radius(rng);
    ring.push_back({3 + r * std::cos(a), 1 + r * std::sin(a)});
  }
  return GeoPolygon(ring);
}

// Fan of triangles from the star centre, which sees every vertex.
double fan_area(const GeoPolygon &p) {
  const auto &r = p.ring();
  double a = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    const Point &u = r[i], &v = r[(i + 1) % r.size()];
    a += ((u.lon - 3) * (v.lat - 1) - (v.lon - 3) * (u.lat - 1)) / 2;
  }
  return a;
}

double rect_overlap(const BoundingBox &a, const BoundingBox &b) {
  const double w = std::min(a.max_lon, b.max_lon) - std::max(a.min_lon, b.min_lon);
  const double h = std::min(a.max_lat, b.max_lat) - std::max(a.min_lat, b.min_lat);
  return w > 0 && h > 0 ? w * h : 0;
}

}  // namespace

TEST_CASE("polygon area of simple shapes") {
  CHECK(polygon_area(GeoPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(1.0));
  CHECK(polygon_area(GeoPolygon({{0, 0}, {2, 0}, {0, 2}})) == doctest::Approx(2.0));
  CHECK(polygon_area(GeoPolygon({{0, 1}, {1, 1}, {1, 0}, {0, 0}})) == doctest::Approx(1.0));
}

TEST_CASE("degenerate polygons are rejected") {
  CHECK_THROWS_AS(GeoPolygon({{0, 0}, {1, 1}}), DegeneratePolygon);
  CHECK_THROWS_AS(GeoPolygon({{0, 0}, {1, 1}, {2, 2}}), DegeneratePolygon);
  CHECK_THROWS_AS(GeoPolygon({{0, 0}, {0, 0}, {1, 0}, {1, 1}}), DegeneratePolygon);
  CHECK_THROWS_AS(GeoPolygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), DegeneratePolygon);
}

TEST_CASE("polygon area matches triangle fan on random star polygons") {
  std::mt19937 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const GeoPolygon p = random_star(rng, 8 + i % 9);
    const double oracle = fan_area(p);
    REQUIRE(std::abs(polygon_area(p) - oracle) <= 1e-6 * oracle);
    double tri = 0;
    for (const auto &t : triangulate(p)) tri += std::abs(signed_ring_area(t));
    REQUIRE(std::abs(tri - oracle) <= 1e-6 * oracle);
  }
}

TEST_CASE("polygon area is invariant under rotation and reversal") {
  std::mt19937 rng(11);
  for (int i = 0; i < 100; ++i) {
    const GeoPolygon p = random_star(rng, 8);
    auto ring = p.ring();
    std::rotate(ring.begin(), ring.begin() + 3, ring.end());
    CHECK(polygon_area(GeoPolygon(ring)) == doctest::Approx(polygon_area(p)));
    std::reverse(ring.begin(), ring.end());
    CHECK(polygon_area(GeoPolygon(ring)) == doctest::Approx(polygon_area(p)));
  }
}

TEST_CASE("intersection area matches Monte Carlo") {
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    const GeoPolygon a = random_star(rng, 9);
    const GeoPolygon b = random_star(rng, 7).translated(0.7, -0.4);
    const double mc = testing::mc_intersection(a, b, 200000, rng);
    CHECK(intersection_area(a, b) == doctest::Approx(mc).epsilon(0.03));
  }
}

TEST_CASE("partial inclusion examples") {
  const auto unit = GeoPolygon::Rectangle(0, 0, 1, 1);
  CHECK(partial_inclusion(unit, unit));
  CHECK_FALSE(partial_inclusion(unit, GeoPolygon::Rectangle(2, 0, 3, 1)));
  CHECK(partial_inclusion(unit, GeoPolygon::Rectangle(0, 0, 0.85, 1)));
  CHECK_FALSE(partial_inclusion(unit, GeoPolygon::Rectangle(0, 0, 0.8 - 1e-6, 1)));
  CHECK_FALSE(partial_inclusion(unit, GeoPolygon::Rectangle(0, 0, 0.8, 1)));
  CHECK(partial_inclusion(unit, GeoPolygon::Rectangle(0, 0, 0.8 + 1e-6, 1)));
}

TEST_CASE("partial inclusion holds reflexively and is scale invariant") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> s(0.1, 10);
  for (int i = 0; i < 200; ++i) {
    const GeoPolygon a = random_star(rng, 8);
    const GeoPolygon b = random_star(rng, 8).translated(0.3, 0.2);
    CHECK(partial_inclusion(a, a));
    const double k = s(rng);
    CHECK(partial_inclusion(a.scaled(k), b.scaled(k)) == partial_inclusion(a, b));
  }
}

TEST_CASE("barycenter") {
  const Point sq = barycenter(GeoPolygon::Rectangle(0, 0, 1, 1));
  CHECK(sq.lon == doctest::Approx(0.5));
  CHECK(sq.lat == doctest::Approx(0.5));
  const Point tri = barycenter(GeoPolygon({{0, 0}, {3, 0}, {0, 3}}));
  CHECK(tri.lon == doctest::Approx(1.0));
  CHECK(tri.lat == doctest::Approx(1.0));

  const GeoPolygon l({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  double sx = 0, sy = 0;
  int hits = 0;
  for (int i = 0; i < 1000000; ++i) {
    const double x = (i % 1000 + u(rng)) / 500, y = (i / 1000 + u(rng)) / 500;
    if (x > 1 && y > 1) continue;
    sx += x;
    sy += y;
    ++hits;
  }
  const Point c = barycenter(l);
  CHECK(std::abs(c.lon - sx / hits) < 1e-3);
  CHECK(std::abs(c.lat - sy / hits) < 1e-3);

  const Point moved = barycenter(l.translated(4.5, -2.25));
  CHECK(moved.lon == doctest::Approx(c.lon + 4.5));
  CHECK(moved.lat == doctest::Approx(c.lat - 2.25));
}

TEST_CASE("area graph equals the pairwise predicate") {
  CHECK(build_area_graph({{"a", GeoPolygon::Rectangle(0, 0, 1, 1)},
                          {"b", GeoPolygon::Rectangle(2, 2, 3, 3)}})
            .edges()
            .empty());
  const auto nested = build_area_graph(
      {{"small", GeoPolygon::Rectangle(1, 1, 2, 2)}, {"big", GeoPolygon::Rectangle(0, 0, 5, 5)}});
  CHECK(nested.edges() == std::set<std::pair<std::string, std::string>>{{"small", "big"}});

  std::mt19937 rng(99);
  std::uniform_real_distribution<double> u(0, 1);
  for (int round = 0; round < 20; ++round) {
    std::map<std::string, GeoPolygon> areas;
    const int n = round < 10 ? 10 : 12;
    for (int i = 0; i < n; ++i) {
      // Nested-ish: shrinking boxes around a common region, with jitter.
      const double m = 0.3 * i / n + 0.05 * u(rng);
      const double x0 = m + 0.1 * u(rng), y0 = m + 0.1 * u(rng);
      const double x1 = 3 - m - 0.1 * u(rng), y1 = 3 - m - 0.1 * u(rng);
      areas.emplace("n" + std::to_string(i), GeoPolygon::Rectangle(x0, y0, x1, y1));
    }
    const auto g = build_area_graph(areas);
    std::set<std::pair<std::string, std::string>> oracle;
    for (const auto &[ia, a] : areas) {
      for (const auto &[ib, b] : areas) {
        if (ia != ib && rect_overlap(a.bbox(), b.bbox()) > 0.8 * a.bbox().area()) oracle.insert({ia, ib});
      }
    }
    CHECK(g.edges() == oracle);
  }
}

TEST_CASE("directional modifiers on the unit square") {
  const ModifierTable table;
  const auto unit = GeoPolygon::Rectangle(0, 0, 1, 1);
  const auto north = apply_modifier(table.get("au nord de"), unit).bbox();
  CHECK(north.min_lon == doctest::Approx(0));
  CHECK(north.max_lon == doctest::Approx(1));
  CHECK(north.min_lat == doctest::Approx(1));
  CHECK(north.max_lat == doctest::Approx(2));
  const auto south = apply_modifier(table.get("au sud de"), unit).bbox();
  CHECK(south.min_lat == doctest::Approx(-1));
  CHECK(south.max_lat == doctest::Approx(0));
  CHECK_THROWS_AS(table.get("au milieu de"), UnknownModifier);
}

TEST_CASE("directional modifiers stay on their side and outside the box") {
  std::mt19937 rng(21);
  for (int i = 0; i < 50; ++i) {
    const GeoPolygon p = random_star(rng, 8);
    const BoundingBox bb = p.bbox();
    const auto box = GeoPolygon::Rectangle(bb.min_lon, bb.min_lat, bb.max_lon, bb.max_lat);
    const ModifierTable table;
    for (const auto &base : table.all()) {
      for (double ext : {1.0, 2.0}) {
        Modifier m = base;
        m.extent_factor = ext;
        const GeoPolygon r = apply_modifier(m, p);
        CHECK(polygon_area(r) > 0);
        const double eps = 1e-9;
        for (const Point &v : r.ring()) {
          switch (m.kind) {
            case ModifierKind::kNorth: CHECK(v.lat >= bb.max_lat - eps); break;
            case ModifierKind::kSouth: CHECK(v.lat <= bb.min_lat + eps); break;
            case ModifierKind::kEast: CHECK(v.lon >= bb.max_lon - eps); break;
            case ModifierKind::kWest: CHECK(v.lon <= bb.min_lon + eps); break;
            case ModifierKind::kNorthEast: CHECK((v.lat >= bb.max_lat - eps && v.lon >= bb.max_lon - eps)); break;
            case ModifierKind::kNorthWest: CHECK((v.lat >= bb.max_lat - eps && v.lon <= bb.min_lon + eps)); break;
            case ModifierKind::kSouthEast: CHECK((v.lat <= bb.min_lat + eps && v.lon >= bb.max_lon - eps)); break;
            case ModifierKind::kSouthWest: CHECK((v.lat <= bb.min_lat + eps && v.lon <= bb.min_lon + eps)); break;
            default: break;
          }
        }
        const bool directional = m.kind <= ModifierKind::kSouthWest;
        const bool cardinal = m.kind <= ModifierKind::kWest;
        if (directional) CHECK(intersection_area(r, box) == doctest::Approx(0).epsilon(1e-9));
        if (cardinal) CHECK(polygon_area(r) == doctest::Approx(ext * bb.area()));
        if (m.kind == ModifierKind::kInnermost || m.kind == ModifierKind::kEntrance) {
          CHECK(polygon_area(r) == doctest::Approx(ext * bb.area() / 3));
        }
      }
    }
  }
}

TEST_CASE("guiding path on the fixture runs south-east to north-west") {
  const auto &doc = testing::banyuls_doc();
  const auto graph = build_area_graph(doc.areas());
  const GuidingPath path = guiding_path(doc, graph);
  REQUIRE(path.waypoints.size() >= 3);
  for (size_t i = 1; i < path.waypoints.size(); ++i) {
    CHECK(path.waypoints[i].lon < path.waypoints[i - 1].lon);
    CHECK(path.waypoints[i].lat > path.waypoints[i - 1].lat);
  }
  CHECK(path.length() > 0);
}

TEST_CASE("guiding path with one georeferenced node") {
  const doc::VolumeMeta meta{"V", "Volume", {{0, 0}, {4, 4}}};
  std::map<std::string, doc::DocNode> nodes;
  nodes["V"] = {"V", 0, "Volume", "subdivision", {"1"}, std::nullopt, std::nullopt, false, std::nullopt};
  nodes["1"] = {"1", 1, "Zone", "subdivision", {}, "V", "z1", false, std::nullopt};
  std::map<std::string, GeoPolygon> areas{{"z1", GeoPolygon::Rectangle(1, 1, 2, 3)}};
  const doc::DocTree doc(meta, nodes, "V", areas);
  const GuidingPath path = guiding_path(doc, build_area_graph(areas));
  REQUIRE(path.waypoints.size() == 3);
  CHECK(path.waypoints[1].lon == doctest::Approx(1.5));
  CHECK(path.waypoints[1].lat == doctest::Approx(2.0));

  nodes["1"].geo_link.reset();
  const doc::DocTree bare(meta, nodes, "V", {});
  CHECK_THROWS_AS(guiding_path(bare, build_area_graph({})), NoGeoreferencedNodes);
}

TEST_CASE("geojson round trip") {
  const auto &doc = testing::banyuls_doc();
  CHECK(areas_from_geojson(areas_to_geojson(doc.areas())) == doc.areas());
}
