#include "lgot/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "lgot/errors.hpp"

namespace lgot {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle_pos(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// Contacts of the segment p + λ(q-p), λ ∈ [0,1], with one piece.
struct Contacts {
  std::vector<double> lambdas;
  std::vector<std::pair<double, double>> overlaps;
};

double project_lambda(Point2 p, Point2 q, Point2 x) {
  Point2 d = q - p;
  return dot(x - p, d) / dot(d, d);
}

double point_segment_distance(Point2 x, Point2 a, Point2 b) {
  Point2 d = b - a;
  double dd = dot(d, d);
  if (dd == 0.0) return distance(x, a);
  double t = std::clamp(dot(x - a, d) / dd, 0.0, 1.0);
  return distance(x, a + t * d);
}

Contacts segment_piece_contacts(Point2 p, Point2 q, const BoundaryPiece& pc, double eps) {
  Contacts out;
  Point2 d = q - p;
  double len = norm(d);
  double tl = eps / len;
  auto push = [&](double lam) {
    if (lam >= -tl && lam <= 1.0 + tl) out.lambdas.push_back(lam);
  };
  // Piece endpoints touching the segment count regardless of angle.
  for (Point2 e : {pc.from(), pc.to()}) {
    if (point_segment_distance(e, p, q) <= eps) push(project_lambda(p, q, e));
  }
  if (pc.kind() == PieceKind::line) {
    Point2 a = pc.from(), b = pc.to();
    Point2 e = b - a;
    double elen = norm(e);
    double den = cross(d, e);
    if (std::abs(den) <= 1e-14 * len * elen) {
      double h = std::abs(cross(d, a - p)) / len;
      if (h <= eps) {
        double la = project_lambda(p, q, a), lb = project_lambda(p, q, b);
        double lo = std::max(0.0, std::min(la, lb));
        double hi = std::min(1.0, std::max(la, lb));
        if (hi - lo > tl) out.overlaps.emplace_back(lo, hi);
      }
      return out;
    }
    double lam = cross(a - p, e) / den;
    double mu = cross(a - p, d) / den;
    double tm = eps / elen;
    if (mu >= -tm && mu <= 1.0 + tm) push(lam);
    return out;
  }
  Point2 c = pc.center();
  double r = pc.radius();
  double h = std::abs(cross(d, c - p)) / len;
  if (h > r + eps) return out;
  double foot = project_lambda(p, q, c);
  std::vector<double> roots;
  if (h >= r - eps) {
    roots.push_back(foot);
  } else {
    double half = std::sqrt(r * r - h * h) / len;
    roots.push_back(foot - half);
    roots.push_back(foot + half);
  }
  for (double lam : roots) {
    Point2 x = p + lam * d;
    double phi = std::atan2(x.y - c.y, x.x - c.x);
    if (pc.arc_offset_of_angle(phi, eps / r) >= 0.0) push(lam);
  }
  return out;
}

// Intersections of two pieces, used by the simplicity check.
std::vector<Point2> piece_intersections(const BoundaryPiece& a, const BoundaryPiece& b, double eps,
                                        bool& overlap) {
  overlap = false;
  std::vector<Point2> pts;
  if (a.kind() == PieceKind::line || b.kind() == PieceKind::line) {
    const BoundaryPiece& ln = a.kind() == PieceKind::line ? a : b;
    const BoundaryPiece& other = a.kind() == PieceKind::line ? b : a;
    Contacts c = segment_piece_contacts(ln.from(), ln.to(), other, eps);
    if (!c.overlaps.empty()) overlap = true;
    for (double lam : c.lambdas) pts.push_back(lerp(ln.from(), ln.to(), lam));
    // Endpoints of the line on the other piece.
    for (Point2 e : {ln.from(), ln.to()}) {
      if (other.distance_to(e) <= eps) pts.push_back(e);
    }
    return pts;
  }
  Point2 c1 = a.center(), c2 = b.center();
  double r1 = a.radius(), r2 = b.radius();
  double dd = distance(c1, c2);
  if (dd <= eps && std::abs(r1 - r2) <= eps) {
    auto strictly_inside = [&](const BoundaryPiece& arc, Point2 x) {
      double phi = std::atan2(x.y - arc.center().y, x.x - arc.center().x);
      double off = arc.arc_offset_of_angle(phi, 0.0);
      return off > eps && off < arc.length() - eps;
    };
    for (Point2 x : {b.from(), b.to(), b.point_at(0.5 * b.length())})
      if (strictly_inside(a, x)) overlap = true;
    for (Point2 x : {a.from(), a.to(), a.point_at(0.5 * a.length())})
      if (strictly_inside(b, x)) overlap = true;
    for (Point2 x : {a.from(), a.to()})
      if (b.distance_to(x) <= eps) pts.push_back(x);
    return pts;
  }
  if (dd > r1 + r2 + eps || dd < std::abs(r1 - r2) - eps || dd <= eps) return pts;
  double along = (dd * dd + r1 * r1 - r2 * r2) / (2.0 * dd);
  double hh = std::sqrt(std::max(0.0, r1 * r1 - along * along));
  Point2 u = (1.0 / dd) * (c2 - c1);
  Point2 base = c1 + along * u;
  for (double sgn : {-1.0, 1.0}) {
    Point2 x = base + (sgn * hh) * rotate90(u);
    if (a.distance_to(x) <= 2 * eps && b.distance_to(x) <= 2 * eps) pts.push_back(x);
  }
  return pts;
}

}  // namespace

BoundaryPiece BoundaryPiece::line(Point2 from, Point2 to) {
  BoundaryPiece p;
  p.kind_ = PieceKind::line;
  p.from_ = from;
  p.to_ = to;
  p.length_ = distance(from, to);
  if (!(p.length_ > 0.0) || !std::isfinite(p.length_))
    throw GeometryError("line piece has zero or non-finite length");
  return p;
}

BoundaryPiece BoundaryPiece::arc(Point2 from, Point2 center, double sweep) {
  BoundaryPiece p;
  p.kind_ = PieceKind::arc;
  p.from_ = from;
  p.center_ = center;
  p.radius_ = distance(from, center);
  p.sweep_ = sweep;
  if (!(p.radius_ > 0.0) || !std::isfinite(p.radius_))
    throw GeometryError("arc piece has zero radius");
  if (!(std::abs(sweep) < kTwoPi) || sweep == 0.0)
    throw GeometryError("arc sweep must lie in (-2π, 2π) and be nonzero");
  p.start_angle_ = std::atan2(from.y - center.y, from.x - center.x);
  double a1 = p.start_angle_ + sweep;
  p.to_ = {center.x + p.radius_ * std::cos(a1), center.y + p.radius_ * std::sin(a1)};
  p.length_ = p.radius_ * std::abs(sweep);
  return p;
}

Point2 BoundaryPiece::point_at(double t) const {
  t = std::clamp(t, 0.0, length_);
  if (kind_ == PieceKind::line) {
    if (t == length_) return to_;
    return lerp(from_, to_, t / length_);
  }
  if (t == length_) return to_;
  if (t == 0.0) return from_;
  double a = start_angle_ + std::copysign(t / radius_, sweep_);
  return {center_.x + radius_ * std::cos(a), center_.y + radius_ * std::sin(a)};
}

Point2 BoundaryPiece::tangent_at(double t) const {
  if (kind_ == PieceKind::line) return (1.0 / length_) * (to_ - from_);
  t = std::clamp(t, 0.0, length_);
  double a = start_angle_ + std::copysign(t / radius_, sweep_);
  Point2 radial{std::cos(a), std::sin(a)};
  return sweep_ > 0 ? rotate90(radial) : -1.0 * rotate90(radial);
}

double BoundaryPiece::arc_offset_of_angle(double phi, double tol) const {
  double d = sweep_ > 0 ? wrap_angle_pos(phi - start_angle_) : wrap_angle_pos(start_angle_ - phi);
  double w = std::abs(sweep_);
  if (d <= w + tol) return std::min(d, w) * radius_;
  if (d >= kTwoPi - tol) return 0.0;
  return -1.0;
}

double BoundaryPiece::closest_param(Point2 p) const {
  if (kind_ == PieceKind::line) {
    Point2 d = to_ - from_;
    double t = std::clamp(dot(p - from_, d) / dot(d, d), 0.0, 1.0);
    return t * length_;
  }
  if (distance(p, center_) > 0.0) {
    double off = arc_offset_of_angle(std::atan2(p.y - center_.y, p.x - center_.x), 0.0);
    if (off >= 0.0) return off;
  }
  return distance(p, from_) <= distance(p, to_) ? 0.0 : length_;
}

double BoundaryPiece::distance_to(Point2 p) const {
  if (kind_ == PieceKind::line) return point_segment_distance(p, from_, to_);
  double off = -1.0;
  if (distance(p, center_) > 0.0)
    off = arc_offset_of_angle(std::atan2(p.y - center_.y, p.x - center_.x), 0.0);
  if (off >= 0.0) return std::abs(distance(p, center_) - radius_);
  return std::min(distance(p, from_), distance(p, to_));
}

double BoundaryPiece::curvature() const {
  if (kind_ == PieceKind::line) return 0.0;
  return sweep_ > 0 ? 1.0 / radius_ : -1.0 / radius_;
}

double BoundaryPiece::area_term() const {
  if (kind_ == PieceKind::line) return 0.5 * cross(from_, to_);
  double p0 = start_angle_, p1 = start_angle_ + sweep_;
  double r = radius_;
  return 0.5 * (r * r * sweep_ + center_.x * r * (std::sin(p1) - std::sin(p0)) -
                center_.y * r * (std::cos(p1) - std::cos(p0)));
}

double BoundaryPiece::winding_angle(Point2 p) const {
  auto chord = [&](Point2 a, Point2 b) { return std::atan2(cross(a - p, b - p), dot(a - p, b - p)); };
  if (kind_ == PieceKind::line) return chord(from_, to_);
  int m = std::max(1, static_cast<int>(std::ceil(std::abs(sweep_) / (0.5 * kPi))));
  bool inside_circle = distance(p, center_) < radius_;
  // A point on a chord makes the chord angle ±π ambiguous; halve that sub-arc.
  auto sub = [&](auto&& self, double t0, double t1, int depth) -> double {
    Point2 a = point_at(t0), b = point_at(t1);
    double sp = cross(b - a, p - a);
    if (inside_circle && depth < 8 && std::abs(sp) <= 1e-9 * dot(b - a, b - a))
      return self(self, t0, 0.5 * (t0 + t1), depth + 1) + self(self, 0.5 * (t0 + t1), t1, depth + 1);
    double w = chord(a, b);
    if (inside_circle && sp * cross(b - a, center_ - a) < 0) w += std::copysign(kTwoPi, sweep_);
    return w;
  };
  double total = 0.0;
  for (int i = 0; i < m; ++i) total += sub(sub, length_ * i / m, length_ * (i + 1) / m, 0);
  return total;
}

double BoundaryArc::end(double L) const {
  double e = start + length;
  return e >= L ? e - L : e;
}

double BoundaryArc::offset_of(double s, double L) const {
  double d = std::fmod(s - start, L);
  if (d < 0) d += L;
  if (d >= L) d = 0.0;
  return d;
}

bool BoundaryArc::contains(double s, double L, double tol) const {
  double d = offset_of(s, L);
  return d <= length + tol || d >= L - tol;
}

BoundaryCurve::BoundaryCurve(std::vector<BoundaryPiece> pieces, double eps_geo_rel)
    : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw GeometryError("boundary has no pieces");
  if (!(eps_geo_rel > 0.0)) throw ParameterDomainError("eps_geo must be positive");
  double inf = std::numeric_limits<double>::infinity();
  bbox_ = {{inf, inf}, {-inf, -inf}};
  offsets_.reserve(pieces_.size() + 1);
  for (const auto& pc : pieces_) {
    offsets_.push_back(length_);
    length_ += pc.length();
    int m = pc.kind() == PieceKind::arc ? 256 : 1;
    for (int i = 0; i <= m; ++i) {
      Point2 x = pc.point_at(pc.length() * i / m);
      bbox_.lo = {std::min(bbox_.lo.x, x.x), std::min(bbox_.lo.y, x.y)};
      bbox_.hi = {std::max(bbox_.hi.x, x.x), std::max(bbox_.hi.y, x.y)};
    }
    area_ += pc.area_term();
  }
  offsets_.push_back(length_);
  eps_geo_ = eps_geo_rel * bbox_.diameter();
  const std::size_t n = pieces_.size();
  const double join_tol = 1e3 * eps_geo_;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pieces_[i];
    const auto& b = pieces_[(i + 1) % n];
    if (distance(a.to(), b.from()) > join_tol)
      throw GeometryError("boundary is not closed: piece " + std::to_string(i) + " does not meet its successor");
    Point2 tin = a.tangent_at(a.length()), tout = b.tangent_at(0.0);
    double turn = std::atan2(cross(tin, tout), dot(tin, tout));
    if (std::abs(turn) > kPi - 1e-9) throw GeometryError("boundary has a cusp at piece " + std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool overlap = false;
      auto pts = piece_intersections(pieces_[i], pieces_[j], eps_geo_, overlap);
      if (overlap) throw GeometryError("boundary pieces " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      std::vector<Point2> allowed;
      if (j == i + 1) allowed.push_back(pieces_[i].to());
      if (i == 0 && j == n - 1) allowed.push_back(pieces_[j].to());
      for (Point2 x : pts) {
        bool ok = std::any_of(allowed.begin(), allowed.end(),
                              [&](Point2 y) { return distance(x, y) <= join_tol; });
        if (!ok)
          throw GeometryError("boundary self-intersects between pieces " + std::to_string(i) + " and " +
                              std::to_string(j));
      }
    }
  }
  if (!(area_ > 0.0)) throw GeometryError("boundary must be positively oriented (counterclockwise)");
}

double BoundaryCurve::wrap(double s) const {
  double r = std::fmod(s, length_);
  if (r < 0) r += length_;
  if (r >= length_) r = 0.0;
  return r;
}

std::size_t BoundaryCurve::piece_index(double s) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end() - 1, s);
  std::size_t i = static_cast<std::size_t>(it - offsets_.begin());
  return i == 0 ? 0 : std::min(i - 1, pieces_.size() - 1);
}

Point2 BoundaryCurve::point_at(double s) const {
  if (!(s >= 0.0 && s < length_))
    throw ParameterDomainError("arclength " + std::to_string(s) + " outside [0, L)");
  std::size_t i = piece_index(s);
  return pieces_[i].point_at(s - offsets_[i]);
}

Point2 BoundaryCurve::point_at_wrapped(double s) const { return point_at(wrap(s)); }

Point2 BoundaryCurve::tangent_at(double s) const {
  s = wrap(s);
  std::size_t i = piece_index(s);
  return pieces_[i].tangent_at(s - offsets_[i]);
}

double BoundaryCurve::distance_to(Point2 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pc : pieces_) best = std::min(best, pc.distance_to(p));
  return best;
}

double BoundaryCurve::closest_param(Point2 p) const {
  double best = std::numeric_limits<double>::infinity(), s = 0.0;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    double d = pieces_[i].distance_to(p);
    if (d < best) {
      best = d;
      s = offsets_[i] + pieces_[i].closest_param(p);
    }
  }
  return wrap(s);
}

double BoundaryCurve::winding_number(Point2 p) const {
  double total = 0.0;
  for (const auto& pc : pieces_) total += pc.winding_angle(p);
  return total / kTwoPi;
}

PointLocation BoundaryCurve::classify(Point2 p, double tol) const {
  if (!(tol > 0.0)) throw ParameterDomainError("classification tolerance must be positive");
  if (distance_to(p) <= tol) return PointLocation::boundary;
  return std::abs(winding_number(p)) > 0.5 ? PointLocation::inside : PointLocation::outside;
}

PointLocation classify_point(const BoundaryCurve& curve, Point2 p, double tol) { return curve.classify(p, tol); }

bool open_segment_in_domain(const BoundaryCurve& curve, Point2 p, Point2 q) {
  double len = distance(p, q);
  double eps = curve.eps_geo();
  if (len <= eps) throw GeometryError("degenerate segment: endpoints coincide");
  double tl = eps / len;
  for (const auto& pc : curve.pieces()) {
    Contacts c = segment_piece_contacts(p, q, pc, eps);
    for (auto [lo, hi] : c.overlaps)
      if (hi > tl && lo < 1.0 - tl) return false;
    for (double lam : c.lambdas)
      if (lam > tl && lam < 1.0 - tl) return false;
  }
  Point2 mid = lerp(p, q, 0.5);
  return curve.classify(mid, eps) == PointLocation::inside;
}

bool segments_cross_interior(const Segment& r1, const Segment& r2) {
  double scale = std::max({norm(r1.a), norm(r1.b), norm(r2.a), norm(r2.b), r1.length(), r2.length()});
  double eps = 1e-12 * std::max(scale, 1e-300);
  if (!(r1.length() > eps) || !(r2.length() > eps)) throw GeometryError("degenerate segment");
  Point2 d1 = r1.b - r1.a, d2 = r2.b - r2.a;
  double o1 = cross(d1, r2.a - r1.a), o2 = cross(d1, r2.b - r1.a);
  double o3 = cross(d2, r1.a - r2.a), o4 = cross(d2, r1.b - r2.a);
  double t1 = eps * r1.length(), t2 = eps * r2.length();
  bool strict1 = (o1 > t1 && o2 < -t1) || (o1 < -t1 && o2 > t1);
  bool strict2 = (o3 > t2 && o4 < -t2) || (o3 < -t2 && o4 > t2);
  if (strict1 && strict2) return true;
  auto interior_of = [&](Point2 x, const Segment& s) {
    if (point_segment_distance(x, s.a, s.b) > eps) return false;
    return distance(x, s.a) > eps && distance(x, s.b) > eps;
  };
  if (interior_of(r2.a, r1) || interior_of(r2.b, r1) || interior_of(r1.a, r2) || interior_of(r1.b, r2)) return true;
  // Identical segments overlap without any endpoint in the other's interior.
  bool same = (distance(r1.a, r2.a) <= eps && distance(r1.b, r2.b) <= eps) ||
              (distance(r1.a, r2.b) <= eps && distance(r1.b, r2.a) <= eps);
  return same;
}

double boundary_hit_distance(const BoundaryCurve& curve, Point2 z, Point2 dir) {
  double reach = 2.0 * curve.diameter() + curve.distance_to(z);
  Point2 q = z + reach * dir;
  double eps = curve.eps_geo();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& pc : curve.pieces()) {
    Contacts c = segment_piece_contacts(z, q, pc, eps);
    for (double lam : c.lambdas)
      if (lam * reach > eps) best = std::min(best, lam * reach);
    for (auto [lo, hi] : c.overlaps)
      best = std::min(best, std::max(lo * reach, 0.0));
  }
  return best;
}

double overlap_with_boundary(const BoundaryCurve& curve, Point2 p, Point2 q) {
  double len = distance(p, q);
  if (len <= curve.eps_geo()) return 0.0;
  double total = 0.0;
  for (const auto& pc : curve.pieces()) {
    if (pc.kind() != PieceKind::line) continue;
    Contacts c = segment_piece_contacts(p, q, pc, curve.eps_geo());
    for (auto [lo, hi] : c.overlaps) total += (hi - lo) * len;
  }
  return std::min(total, len);
}

ConvexityReport convexity_report(const BoundaryCurve& curve) {
  ConvexityReport rep;
  auto pcs = curve.pieces();
  const std::size_t n = pcs.size();
  const double ang_tol = 1e-9;
  std::vector<double> turn(n);  // turning at the end of piece i
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = pcs[i];
    const auto& b = pcs[(i + 1) % n];
    Point2 tin = a.tangent_at(a.length()), tout = b.tangent_at(0.0);
    turn[i] = std::atan2(cross(tin, tout), dot(tin, tout));
    double s = curve.piece_start((i + 1) % n);
    if (std::abs(turn[i]) > ang_tol) rep.singular_params.push_back(s);
    if (turn[i] < -ang_tol) rep.reflex_spans.push_back({s, 0.0});
  }
  std::sort(rep.singular_params.begin(), rep.singular_params.end());
  for (std::size_t i = 0; i < n; ++i)
    if (pcs[i].kind() == PieceKind::arc && pcs[i].sweep() < 0)
      rep.reflex_spans.push_back({curve.piece_start(i), pcs[i].length()});
  // Maximal runs of line pieces joined without turning.
  std::vector<bool> is_line(n);
  for (std::size_t i = 0; i < n; ++i) is_line[i] = pcs[i].kind() == PieceKind::line;
  std::size_t first = n;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t prev = (i + n - 1) % n;
    if (is_line[i] && !(is_line[prev] && std::abs(turn[prev]) <= ang_tol)) {
      first = i;
      break;
    }
  }
  if (first == n && is_line[0]) {
    rep.flat_spans.push_back({0.0, curve.length()});  // cannot happen for a closed simple curve
  } else if (first != n) {
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t i = (first + k) % n;
      std::size_t prev = (i + n - 1) % n;
      if (!is_line[i]) continue;
      if (is_line[prev] && std::abs(turn[prev]) <= ang_tol && !rep.flat_spans.empty() && k != 0) {
        rep.flat_spans.back().length += pcs[i].length();
      } else {
        rep.flat_spans.push_back({curve.piece_start(i), pcs[i].length()});
      }
    }
  }
  bool reflex = !rep.reflex_spans.empty();
  if (reflex)
    rep.cls = ConvexityClass::non_convex;
  else if (!rep.flat_spans.empty())
    rep.cls = ConvexityClass::convex;
  else
    rep.cls = ConvexityClass::strictly_convex;
  return rep;
}

ConvexPolygon ConvexPolygon::hull_of(std::vector<Point2> pts) {
  ConvexPolygon poly;
  std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) {
    poly.v_ = pts;
    return poly;
  }
  std::vector<Point2> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], pts[i] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 1] - h[k - 2], pts[i - 1] - h[k - 2]) <= 0) --k;
    h[k++] = pts[i - 1];
  }
  h.resize(k - 1);
  poly.v_ = std::move(h);
  return poly;
}

double ConvexPolygon::area() const {
  double a = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) a += cross(v_[i], v_[(i + 1) % v_.size()]);
  return 0.5 * a;
}

bool ConvexPolygon::contains(Point2 p, double tol) const {
  if (v_.empty()) return false;
  if (v_.size() == 1) return distance(p, v_[0]) <= tol;
  if (v_.size() == 2) return point_segment_distance(p, v_[0], v_[1]) <= tol;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    Point2 a = v_[i], b = v_[(i + 1) % v_.size()];
    if (cross(b - a, p - a) < -tol * distance(a, b)) return false;
  }
  return true;
}

std::vector<Point2> sample_arc(const BoundaryCurve& curve, const BoundaryArc& arc, int arc_samples) {
  std::vector<Point2> pts;
  const double L = curve.length();
  double u0 = arc.start, u1 = arc.start + arc.length;
  pts.push_back(curve.point_at_wrapped(u0));
  // Walk pieces over the unwrapped range [u0, u1].
  double base = std::floor(u0 / L) * L;
  for (int lap = 0; lap < 3; ++lap) {
    for (std::size_t i = 0; i < curve.piece_count(); ++i) {
      double a = base + lap * L + curve.piece_start(i);
      double b = base + lap * L + curve.piece_start(i + 1);
      double lo = std::max(a, u0), hi = std::min(b, u1);
      if (hi <= lo) continue;
      const auto& pc = curve.pieces()[i];
      pts.push_back(pc.point_at(lo - a));
      if (pc.kind() == PieceKind::arc) {
        for (int k = 1; k < arc_samples; ++k) pts.push_back(pc.point_at(lo - a + (hi - lo) * k / arc_samples));
      }
      pts.push_back(pc.point_at(hi - a));
    }
  }
  pts.push_back(curve.point_at_wrapped(u1));
  return pts;
}

ConvexPolygon convex_hull_region(const BoundaryCurve& curve, std::span<const BoundaryArc> arcs, int arc_samples) {
  if (arcs.empty()) throw ParameterDomainError("convex hull of an empty arc list");
  std::vector<Point2> pts;
  for (const auto& a : arcs) {
    auto s = sample_arc(curve, a, arc_samples);
    pts.insert(pts.end(), s.begin(), s.end());
  }
  return ConvexPolygon::hull_of(std::move(pts));
}

bool polygons_separated(const ConvexPolygon& a, const ConvexPolygon& b, double margin) {
  auto va = a.vertices(), vb = b.vertices();
  if (va.empty() || vb.empty()) return true;
  std::vector<Point2> axes;
  auto add_edges = [&](std::span<const Point2> v) {
    for (std::size_t i = 0; i + 1 < v.size() || (v.size() > 2 && i < v.size()); ++i) {
      Point2 e = v[(i + 1) % v.size()] - v[i];
      if (norm(e) > 0) {
        axes.push_back(rotate90(e));
        if (v.size() == 2) axes.push_back(e);
      }
    }
  };
  add_edges(va);
  add_edges(vb);
  // Closest vertex pair covers vertex-vertex configurations.
  double best = std::numeric_limits<double>::infinity();
  Point2 ax;
  for (Point2 p : va)
    for (Point2 q : vb)
      if (distance(p, q) < best) {
        best = distance(p, q);
        ax = q - p;
      }
  if (norm(ax) > 0) axes.push_back(ax);
  for (Point2 n : axes) {
    n = (1.0 / norm(n)) * n;
    double amin = std::numeric_limits<double>::infinity(), amax = -amin, bmin = amin, bmax = -amin;
    for (Point2 p : va) {
      amin = std::min(amin, dot(p, n));
      amax = std::max(amax, dot(p, n));
    }
    for (Point2 p : vb) {
      bmin = std::min(bmin, dot(p, n));
      bmax = std::max(bmax, dot(p, n));
    }
    if (bmin - amax > margin || amin - bmax > margin) return true;
  }
  return false;
}

}  // namespace lgot
