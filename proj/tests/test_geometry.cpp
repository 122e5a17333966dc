#include <gtest/gtest.h>

#include <random>

#include "lgot/errors.hpp"
#include "lgot/geometry.hpp"
#include "support.hpp"

using namespace lgot;
using namespace lgot::testing;

namespace {

// Plain even-odd ray casting, independent of the library's winding code.
bool inside_polygon(const std::vector<Point2>& v, Point2 p) {
  bool in = false;
  for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
    if ((v[i].y > p.y) != (v[j].y > p.y)) {
      double x = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
      if (p.x < x) in = !in;
    }
  }
  return in;
}

std::vector<Point2> rect_vertices(double a, double b) {
  return {{-1, 0}, {-a, 0}, {-a, b}, {a, b}, {a, 0}, {1, 0}, {1, 1}, {-1, 1}};
}

}  // namespace

TEST(Geometry, PointAtSquareAndCircle) {
  BoundaryCurve sq = unit_square();
  Point2 p = sq.point_at(0.5);
  EXPECT_DOUBLE_EQ(p.x, 0.5);
  EXPECT_DOUBLE_EQ(p.y, 0.0);
  EXPECT_THROW(sq.point_at(4.0), ParameterDomainError);
  EXPECT_THROW(sq.point_at(-0.1), ParameterDomainError);
  Point2 q = unit_circle().point_at(kPi / 2);
  EXPECT_NEAR(q.x, 0.0, 1e-14);
  EXPECT_NEAR(q.y, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(sq.length(), 4.0);
  EXPECT_NEAR(unit_circle().signed_area(), kPi, 1e-12);
}

TEST(Geometry, PointAtIsOneLipschitzAndWraps) {
  for (const BoundaryCurve& c : {unit_square(), unit_circle(), make_builtin("circ_cshape").curve}) {
    const double L = c.length();
    const int n = 4000;
    for (int i = 0; i < n; ++i) {
      double s0 = L * i / n, s1 = L * (i + 1) / n;
      EXPECT_LE(distance(c.point_at_wrapped(s0), c.point_at_wrapped(s1)), (s1 - s0) * (1 + 1e-12));
    }
    EXPECT_LT(distance(c.point_at_wrapped(L - 1e-12), c.point_at(0.0)), 1e-10);
  }
}

TEST(Geometry, ClassifyExamples) {
  BoundaryCurve sq = unit_square();
  EXPECT_EQ(classify_point(sq, {0.5, 0.5}, 1e-9), PointLocation::inside);
  EXPECT_EQ(classify_point(sq, {1.5, 0.5}, 1e-9), PointLocation::outside);
  EXPECT_EQ(classify_point(sq, {1.0, 0.5}, 1e-9), PointLocation::boundary);
}

TEST(Geometry, ClassifyAgreesWithMonteCarloOnBuiltins) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2.2, 2.2);
  auto check = [&](const BoundaryCurve& c, auto&& truth) {
    int disagreements = 0;
    for (int i = 0; i < 10000; ++i) {
      Point2 p{U(rng), U(rng)};
      if (c.distance_to(p) < 1e-6) continue;
      bool in = classify_point(c, p, 1e-9) == PointLocation::inside;
      if (in != truth(p)) ++disagreements;
    }
    EXPECT_EQ(disagreements, 0);
  };
  std::vector<Point2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  check(make_builtin("delta_square").curve, [&](Point2 p) { return inside_polygon(sq, p); });
  check(make_builtin("disk_cosine").curve, [](Point2 p) { return norm(p) < 1; });
  auto rv = rect_vertices(0.25, 0.5);
  check(make_builtin("rect_cshape").curve, [&](Point2 p) { return inside_polygon(rv, p); });
  check(make_builtin("circ_cshape").curve, [](Point2 p) { return p.y > 0 && norm(p) > 1 && norm(p) < 2; });
  std::vector<Point2> nu{{1, 1}, {-1, 1}, {-2, 2}, {-2, -2}, {-1, -1}, {1, -1}, {2, -2}, {2, 2}};
  check(make_builtin("nonuniq_squares").curve, [&](Point2 p) { return inside_polygon(nu, p); });
}

TEST(Geometry, OpenSegmentExamples) {
  BoundaryCurve sq = unit_square();
  EXPECT_TRUE(open_segment_in_domain(sq, {0.25, 0}, {0, 0.25}));
  EXPECT_FALSE(open_segment_in_domain(sq, {0.25, 0}, {0.75, 0}));
  EXPECT_THROW(open_segment_in_domain(sq, {0.3, 0}, {0.3, 0}), GeometryError);
  BoundaryCurve rect = make_builtin("rect_cshape").curve;
  EXPECT_FALSE(open_segment_in_domain(rect, {0.25, 0}, {-0.25, 0}));
  // Independent check: the midpoint (0,0) lies in the removed notch's closure.
  auto rv = rect_vertices(0.25, 0.5);
  EXPECT_FALSE(inside_polygon(rv, {0.0, 0.01}));
}

TEST(Geometry, OpenSegmentSymmetricAndMatchesSampling) {
  std::mt19937_64 rng(11);
  for (const BoundaryCurve& c : {unit_square(), unit_circle()}) {
    std::uniform_real_distribution<double> U(0.0, c.length());
    for (int i = 0; i < 300; ++i) {
      Point2 p = c.point_at(U(rng)), q = c.point_at(U(rng));
      if (distance(p, q) < 1e-6) continue;
      bool pq = open_segment_in_domain(c, p, q);
      EXPECT_EQ(pq, open_segment_in_domain(c, q, p));
      bool touches = false;
      for (int k = 1; k < 1024; ++k)
        if (c.distance_to(lerp(p, q, k / 1024.0)) < 1e-9) touches = true;
      EXPECT_EQ(pq, !touches) << p.x << "," << p.y << " -> " << q.x << "," << q.y;
    }
  }
}

TEST(Geometry, SegmentsCrossInterior) {
  EXPECT_TRUE(segments_cross_interior({{0, 0}, {1, 1}}, {{1, 0}, {0, 1}}));
  EXPECT_FALSE(segments_cross_interior({{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}));
  EXPECT_FALSE(segments_cross_interior({{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}));
}

TEST(Geometry, ConvexityReports) {
  ConvexityReport sq = convexity_report(unit_square());
  EXPECT_EQ(sq.cls, ConvexityClass::convex);
  ASSERT_EQ(sq.singular_params.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(sq.singular_params[k], k, 1e-12);
  EXPECT_EQ(sq.flat_spans.size(), 4u);

  ConvexityReport ci = convexity_report(unit_circle());
  EXPECT_EQ(ci.cls, ConvexityClass::strictly_convex);
  EXPECT_TRUE(ci.singular_params.empty());

  const double a = 0.25, b = 0.5;
  ConvexityReport rc = convexity_report(make_builtin("rect_cshape").curve);
  EXPECT_EQ(rc.cls, ConvexityClass::non_convex);
  // The two reflex corners are the top of the notch, (−a,b) and (a,b).
  ASSERT_EQ(rc.reflex_spans.size(), 2u);
  EXPECT_NEAR(rc.reflex_spans[0].start, (1 - a) + b, 1e-12);
  EXPECT_NEAR(rc.reflex_spans[1].start, (1 - a) + b + 2 * a, 1e-12);
}

TEST(Geometry, ConvexPolygonSingularParamsAreVertices) {
  std::vector<Point2> v{{0, 0}, {2, 0}, {3, 1}, {1.5, 2.5}, {-0.5, 1}};
  BoundaryCurve c = polygon(v);
  ConvexityReport r = convexity_report(c);
  ASSERT_EQ(r.singular_params.size(), v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(r.singular_params[i], s, 1e-12);
    s += distance(v[i], v[(i + 1) % v.size()]);
  }
}

TEST(Geometry, HullOfCornerChiPair) {
  BoundaryCurve sq = unit_square();
  std::vector<BoundaryArc> arcs{{0.0, 0.25}, {3.75, 0.25}};
  ConvexPolygon h = convex_hull_region(sq, arcs);
  EXPECT_EQ(h.vertices().size(), 3u);
  EXPECT_NEAR(h.area(), 0.25 * 0.25 / 2, 1e-14);
  for (Point2 p : {Point2{0, 0}, Point2{0.25, 0}, Point2{0, 0.25}}) EXPECT_TRUE(h.contains(p, 1e-12));
  EXPECT_THROW(convex_hull_region(sq, std::vector<BoundaryArc>{}), Error);

  std::vector<BoundaryArc> second{{0.75, 0.5}};  // χ₂ around (1,0)
  ConvexPolygon h2 = convex_hull_region(sq, second);
  EXPECT_TRUE(polygons_separated(h, h2, 8e-9));
}

TEST(Geometry, OppositeQuarterArcsHullContainsCenter) {
  BoundaryCurve c = unit_circle();
  std::vector<BoundaryArc> arcs{{0.0, kPi / 2}, {kPi, kPi / 2}};
  EXPECT_TRUE(convex_hull_region(c, arcs).contains({0, 0}));
}

TEST(Geometry, RejectsCuspsAndOpenCurves) {
  EXPECT_THROW(polygon({{0, 0}, {1, 0}, {0, 1e-14}}), GeometryError);
  EXPECT_THROW(BoundaryCurve({BoundaryPiece::line({0, 0}, {1, 0}), BoundaryPiece::line({1, 0}, {1, 1})}),
               GeometryError);
}
