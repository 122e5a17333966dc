#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace lgot {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point2 operator*(double k, Point2 a) { return {k * a.x, k * a.y}; }
  friend constexpr Point2 operator*(Point2 a, double k) { return {k * a.x, k * a.y}; }
  friend constexpr bool operator==(Point2, Point2) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 rotate90(Point2 v) { return {-v.y, v.x}; }
inline Point2 lerp(Point2 a, Point2 b, double t) { return a + t * (b - a); }

struct Segment {
  Point2 a;
  Point2 b;
  double length() const { return distance(a, b); }
};

struct Box {
  Point2 lo;
  Point2 hi;
  double diameter() const { return distance(lo, hi); }
};

enum class PieceKind { line, arc };

// One boundary piece. Arcs are stored by center, radius, start angle and
// signed sweep; positive sweep runs counterclockwise.
class BoundaryPiece {
 public:
  static BoundaryPiece line(Point2 from, Point2 to);
  static BoundaryPiece arc(Point2 from, Point2 center, double sweep);

  PieceKind kind() const { return kind_; }
  Point2 from() const { return from_; }
  Point2 to() const { return to_; }
  Point2 center() const { return center_; }
  double radius() const { return radius_; }
  double start_angle() const { return start_angle_; }
  double sweep() const { return sweep_; }
  double length() const { return length_; }

  // t is arclength inside the piece, clamped to [0, length].
  Point2 point_at(double t) const;
  Point2 tangent_at(double t) const;
  double distance_to(Point2 p) const;
  double closest_param(Point2 p) const;
  // Signed curvature: 0 for lines, +1/r for ccw arcs, -1/r for cw arcs.
  double curvature() const;
  // Contribution to the signed area, 1/2 ∮ (x dy - y dx).
  double area_term() const;
  // Change of arg(q - p) while q runs along the piece; p must not lie on it.
  double winding_angle(Point2 p) const;
  // Arclength offset of the point on the supporting circle at angle phi,
  // or a negative value when phi is outside the sweep (angular tolerance tol).
  double arc_offset_of_angle(double phi, double tol) const;

 private:
  PieceKind kind_ = PieceKind::line;
  Point2 from_;
  Point2 to_;
  Point2 center_;
  double radius_ = 0.0;
  double start_angle_ = 0.0;
  double sweep_ = 0.0;
  double length_ = 0.0;
};

// Arc of the curve starting at `start` and running `length` along the
// orientation. Wrapping past L is allowed; length is in (0, L].
struct BoundaryArc {
  double start = 0.0;
  double length = 0.0;

  double end_unwrapped() const { return start + length; }
  double end(double L) const;
  bool wraps(double L) const { return start + length > L; }
  // Closed containment of s (any representative) with tolerance tol.
  bool contains(double s, double L, double tol = 0.0) const;
  // Offset of s from start along the orientation, in [0, L).
  double offset_of(double s, double L) const;
};

enum class PointLocation { inside, boundary, outside };

class BoundaryCurve {
 public:
  // Validates closure, simplicity, orientation and rejects cusps.
  explicit BoundaryCurve(std::vector<BoundaryPiece> pieces, double eps_geo_rel = 1e-9);

  std::span<const BoundaryPiece> pieces() const { return pieces_; }
  std::size_t piece_count() const { return pieces_.size(); }
  double length() const { return length_; }
  double diameter() const { return bbox_.diameter(); }
  double eps_geo() const { return eps_geo_; }
  Box bbox() const { return bbox_; }
  double signed_area() const { return area_; }

  // Requires 0 <= s < L.
  Point2 point_at(double s) const;
  // Any real s, reduced modulo L.
  Point2 point_at_wrapped(double s) const;
  Point2 tangent_at(double s) const;
  double wrap(double s) const;
  double piece_start(std::size_t i) const { return offsets_[i]; }
  std::size_t piece_index(double s) const;

  double distance_to(Point2 p) const;
  double closest_param(Point2 p) const;
  PointLocation classify(Point2 p, double tol) const;
  double winding_number(Point2 p) const;

 private:
  std::vector<BoundaryPiece> pieces_;
  std::vector<double> offsets_;
  double length_ = 0.0;
  double area_ = 0.0;
  double eps_geo_ = 0.0;
  Box bbox_;
};

PointLocation classify_point(const BoundaryCurve& curve, Point2 p, double tol);

// True iff the open segment ]p,q[ lies in the open domain.
bool open_segment_in_domain(const BoundaryCurve& curve, Point2 p, Point2 q);

// True iff the segments meet at a point interior to at least one of them.
bool segments_cross_interior(const Segment& r1, const Segment& r2);

// Distance from z along the unit direction dir to the first boundary contact.
double boundary_hit_distance(const BoundaryCurve& curve, Point2 z, Point2 dir);

// Length of segment [p,q] lying on the curve (collinear/concentric overlap).
double overlap_with_boundary(const BoundaryCurve& curve, Point2 p, Point2 q);

enum class ConvexityClass { strictly_convex, convex, non_convex };

struct ConvexityReport {
  ConvexityClass cls = ConvexityClass::strictly_convex;
  std::vector<BoundaryArc> flat_spans;
  std::vector<BoundaryArc> reflex_spans;
  std::vector<double> singular_params;
};

ConvexityReport convexity_report(const BoundaryCurve& curve);

class ConvexPolygon {
 public:
  ConvexPolygon() = default;
  // Convex hull (monotone chain) of arbitrary points.
  static ConvexPolygon hull_of(std::vector<Point2> pts);

  std::span<const Point2> vertices() const { return v_; }
  double area() const;
  bool contains(Point2 p, double tol = 0.0) const;
  bool empty() const { return v_.empty(); }

 private:
  std::vector<Point2> v_;
};

// Convex hull of the given arcs; arc pieces contribute `arc_samples` points.
ConvexPolygon convex_hull_region(const BoundaryCurve& curve, std::span<const BoundaryArc> arcs,
                                 int arc_samples = 64);

// Points on the arc: its endpoints, interior vertices, and arc samples.
std::vector<Point2> sample_arc(const BoundaryCurve& curve, const BoundaryArc& arc, int arc_samples = 64);

// Separating-axis test: true iff some axis separates the hulls by more than margin.
bool polygons_separated(const ConvexPolygon& a, const ConvexPolygon& b, double margin);

}  // namespace lgot
