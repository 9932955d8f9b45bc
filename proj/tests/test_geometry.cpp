#include "obm/geometry.hpp"

#include <doctest.h>

#include <cmath>

using namespace obm;

TEST_CASE("orientation predicates decide exact collinearity") {
  CHECK(orient2d(P2(0, 0), P2(1, 0), P2(0, 1)) > 0);
  CHECK(orient2d(P2(0, 0), P2(0, 1), P2(1, 0)) < 0);
  // collinear points whose float determinant is pure rounding noise
  CHECK(orient2d(P2(0.1, 0.1), P2(0.3, 0.3), P2(0.7, 0.7)) == 0);
  CHECK(orient3d(P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(0, 0, 1)) > 0);
  CHECK(orient3d(P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(0.3, 0.2, 0)) == 0);
}

TEST_CASE("2D hull drops interior and collinear points") {
  std::vector<P2> pts = {{0, 0}, {2, 0}, {1, 0}, {2, 2}, {0, 2}, {1, 1}, {0, 1}};
  const auto h = convex_hull_2d(pts);
  REQUIRE(h.size() == 4);
  double area = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const P2& a = h[i];
    const P2& b = h[(i + 1) % h.size()];
    area += a.x() * b.y() - a.y() * b.x();
  }
  CHECK(area / 2 == doctest::Approx(4.0));
}

TEST_CASE("3D hull of a cube") {
  std::vector<P3> pts;
  for (int i = 0; i < 8; ++i) pts.emplace_back(i & 1, (i >> 1) & 1, (i >> 2) & 1);
  pts.emplace_back(0.5, 0.5, 0.5);
  const Hull3 h = convex_hull_3d(pts);
  CHECK(h.tris.size() == 12);
  const Polytope P = polytope_from_points(3, std::vector<Vec>{vec3(0, 0, 0), vec3(1, 0, 0), vec3(0, 1, 0), vec3(1, 1, 0),
                                                              vec3(0, 0, 1), vec3(1, 0, 1), vec3(0, 1, 1), vec3(1, 1, 1)});
  CHECK(P.volume == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(P.facets.size() == 6);
  CHECK_THROWS_AS(convex_hull_3d({P3(0, 0, 0), P3(1, 0, 0), P3(0, 1, 0), P3(1, 1, 0)}), Error);
}

TEST_CASE("circle grid directions are unit and uniformly spaced") {
  const DirectionGrid g = DirectionGrid::circle(720);
  REQUIRE(g.size() == 720);
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(std::fabs(g[k].norm() - 1) < 1e-14);
    const double a = 2 * M_PI * static_cast<double>(k) / 720;
    CHECK(std::fabs(g[k][0] - std::cos(a)) < 1e-14);
    CHECK(std::fabs(g[k][1] - std::sin(a)) < 1e-14);
  }
}

TEST_CASE("icosphere grid is antipodal and distinct") {
  const DirectionGrid g = DirectionGrid::icosphere(3);
  for (const auto& u : g.directions()) {
    CHECK(std::fabs(u.norm() - 1) < 1e-14);
    double best_neg = 1e9;
    for (const auto& v : g.directions()) best_neg = std::min(best_neg, (u + v).norm());
    CHECK(best_neg < 1e-12);
  }
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j) CHECK((g[i] - g[j]).norm() > 1e-6);
}

TEST_CASE("merged grid keeps angle order and dedups") {
  const DirectionGrid g = DirectionGrid::circle(8).merged({vec2(1, 1).normalized(), vec2(1, 0), vec2(2, 1).normalized()});
  CHECK(g.size() == 9);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(angle_of(g[i]) > angle_of(g[i - 1]));
}

TEST_CASE("outer polygon from supports of a square") {
  std::vector<P2> dirs;
  std::vector<double> h;
  const DirectionGrid g = DirectionGrid::circle(16);
  for (const auto& u : g.directions()) {
    dirs.emplace_back(u[0], u[1]);
    h.push_back(std::fabs(u[0]) + std::fabs(u[1]));
  }
  const auto P = outer_polygon_from_supports(dirs, h);
  REQUIRE(P.has_value());
  CHECK(P->volume == doctest::Approx(4.0).epsilon(1e-12));
  // a non-support function (too small on the diagonal) is rejected
  std::vector<double> bad = h;
  for (std::size_t i = 0; i < bad.size(); ++i)
    if (i % 4 == 2) bad[i] = 0.3;
  CHECK_FALSE(outer_polygon_from_supports(dirs, bad).has_value());
}

TEST_CASE("minkowski sum of polygons") {
  const std::vector<P2> sq = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const std::vector<P2> seg = {{0, 0}, {2, 0}};
  const auto s = minkowski_sum_polygons(sq, seg);
  const Polytope P = polygon_from_ordered(convex_hull_2d(s));
  CHECK(P.volume == doctest::Approx(3.0));
  const auto pt = minkowski_sum_polygons(sq, {P2(5, 5)});
  CHECK(polygon_from_ordered(convex_hull_2d(pt)).support(vec2(1, 1)) == doctest::Approx(12.0));
}

TEST_CASE("halfspace polytope") {
  const Polytope P = polytope_from_halfspaces(2, {vec2(1, 0), vec2(-1, 0), vec2(0, 1), vec2(0, -1), vec2(1, 1).normalized()},
                                              {1, 1, 1, 1, 10});
  CHECK(P.volume == doctest::Approx(4.0));
  CHECK(P.vertices.size() == 4);
}
