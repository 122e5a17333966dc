#include "lgot/reconstruction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "lgot/errors.hpp"

namespace lgot {
namespace {

double side(const TransportRay& r, Point2 z) {
  Point2 d = r.p_minus - r.p_plus;
  double len = norm(d);
  if (len == 0.0) return 0.0;
  return cross(d, z - r.p_plus) / len;
}

// Parameter along [a,b] where it meets [c,d], or nothing.
std::optional<double> segment_hit(Point2 a, Point2 b, Point2 c, Point2 d) {
  Point2 e = b - a, f = d - c;
  double den = cross(e, f);
  if (std::abs(den) <= 1e-14 * norm(e) * norm(f)) return std::nullopt;
  double t = cross(c - a, f) / den;
  double s = cross(c - a, e) / den;
  if (t < 0.0 || t > 1.0 || s < -1e-12 || s > 1.0 + 1e-12) return std::nullopt;
  return t;
}

Point2 grad_at(const ScalarField& u, int i, int j) {
  auto diff = [&](int di, int dj, double h) {
    bool lo = i - di >= 0 && j - dj >= 0 && u.valid(i - di, j - dj);
    bool hi = i + di < u.nx && j + dj < u.ny && u.valid(i + di, j + dj);
    double c = u.u[u.index(i, j)];
    if (lo && hi) return (u.u[u.index(i + di, j + dj)] - u.u[u.index(i - di, j - dj)]) / (2 * h);
    if (hi) return (u.u[u.index(i + di, j + dj)] - c) / h;
    if (lo) return (c - u.u[u.index(i - di, j - dj)]) / h;
    return 0.0;
  };
  return {diff(1, 0, u.hx), diff(0, 1, u.hy)};
}

std::vector<Point2> blur(const std::vector<Point2>& in, int nx, int ny) {
  std::array<double, 7> w{};
  double tot = 0.0;
  for (int k = -3; k <= 3; ++k) tot += w[k + 3] = std::exp(-0.5 * k * k);
  for (double& x : w) x /= tot;
  std::vector<Point2> tmp(in.size()), out(in.size());
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Point2 acc{};
      for (int k = -3; k <= 3; ++k)
        if (i + k >= 0 && i + k < nx) acc = acc + w[k + 3] * in[static_cast<std::size_t>(j) * nx + i + k];
      tmp[static_cast<std::size_t>(j) * nx + i] = acc;
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Point2 acc{};
      for (int k = -3; k <= 3; ++k)
        if (j + k >= 0 && j + k < ny) acc = acc + w[k + 3] * tmp[static_cast<std::size_t>(j + k) * nx + i];
      out[static_cast<std::size_t>(j) * nx + i] = acc;
    }
  return out;
}

}  // namespace

FoliationField::FoliationField(const TransportMap& map, int samples_per_pair) : map_(&map) {
  const double len_tol = 8 * map.curve().eps_geo();
  level_tol_ = 1e-9 * std::max(1.0, map.measure().total_variation());
  for (std::size_t q = 0; q < map.pairs().size(); ++q) {
    const auto& t = map.pairs()[q];
    PairCache c;
    // Keep clear of the exact ends, where χ rays shrink to a point.
    double e = 1e-7 * t.tv;
    for (int j = 0; j <= samples_per_pair; ++j) {
      double lam = e + (t.tv - 2 * e) * j / samples_per_pair;
      c.lambda.push_back(lam);
      c.rays.push_back(map.ray_at(q, lam));
    }
    std::vector<Point2> pts = sample_arc(map.curve(), t.plus_arc, 32);
    auto more = sample_arc(map.curve(), t.minus_arc, 32);
    pts.insert(pts.end(), more.begin(), more.end());
    c.box = {pts[0], pts[0]};
    for (Point2 p : pts) {
      c.box.lo = {std::min(c.box.lo.x, p.x), std::min(c.box.lo.y, p.y)};
      c.box.hi = {std::max(c.box.hi.x, p.x), std::max(c.box.hi.y, p.y)};
    }
    cache_.push_back(std::move(c));
    for (double lam : {0.0, t.tv}) {
      TransportRay r = map.ray_at(q, lam);
      if (r.length <= len_tol) continue;
      extreme_.push_back({r.p_plus, r.p_minus});
      extreme_level_.push_back(r.level);
    }
  }
}

std::optional<double> FoliationField::on_some_ray(Point2 z) const {
  const double diam = map_->curve().diameter();
  const double pad = 1e-9 * diam;
  for (std::size_t q = 0; q < cache_.size(); ++q) {
    const PairCache& c = cache_[q];
    if (z.x < c.box.lo.x - pad || z.x > c.box.hi.x + pad || z.y < c.box.lo.y - pad || z.y > c.box.hi.y + pad)
      continue;
    std::vector<double> h(c.rays.size());
    for (std::size_t j = 0; j < c.rays.size(); ++j) h[j] = side(c.rays[j], z);
    for (std::size_t j = 0; j + 1 < c.rays.size(); ++j) {
      if ((h[j] > 0) == (h[j + 1] > 0) && h[j] != 0.0 && h[j + 1] != 0.0) continue;
      double lo = c.lambda[j], hi = c.lambda[j + 1];
      bool lo_pos = h[j] > 0;
      TransportRay r = c.rays[j];
      if (h[j] != 0.0) {
        for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
          double mid = 0.5 * (lo + hi);
          double hm = side(map_->ray_at(q, mid), z);
          if ((hm > 0) == lo_pos && hm != 0.0)
            lo = mid;
          else
            hi = mid;
        }
        r = map_->ray_at(q, 0.5 * (lo + hi));
      }
      if (r.length == 0.0) continue;
      double t = dot(z - r.p_plus, r.p_minus - r.p_plus) / (r.length * r.length);
      if (t < -1e-9 || t > 1.0 + 1e-9) continue;
      if (std::abs(side(r, z)) > 1e-7 * diam) continue;
      return r.level;
    }
  }
  return std::nullopt;
}

double FoliationField::flat_level(Point2 z) const {
  const BoundaryCurve& curve = map_->curve();
  const TraceFunction& g = map_->measure().trace();
  std::vector<double> levels;
  for (int k = 0; k < 8; ++k) {
    double a = (k + 0.5) * std::numbers::pi / 4.0;
    Point2 d{std::cos(a), std::sin(a)};
    double reach = boundary_hit_distance(curve, z, d);
    if (!std::isfinite(reach)) continue;
    Point2 b = z + reach * d;
    double best_t = 1.0;
    double level = g(curve.closest_param(b));
    for (std::size_t e = 0; e < extreme_.size(); ++e) {
      auto t = segment_hit(z, b, extreme_[e].a, extreme_[e].b);
      if (t && *t < best_t) {
        best_t = *t;
        level = extreme_level_[e];
      }
    }
    levels.push_back(level);
  }
  if (levels.empty()) throw DegenerateRegionError("no probe direction reached the boundary");
  auto [lo, hi] = std::minmax_element(levels.begin(), levels.end());
  if (*hi - *lo > 1e3 * level_tol_)
    throw DegenerateRegionError("flat region levels disagree at (" + std::to_string(z.x) + ", " +
                                std::to_string(z.y) + "): " + std::to_string(*lo) + " vs " + std::to_string(*hi));
  return levels.front();
}

double FoliationField::evaluate(Point2 z) const {
  const BoundaryCurve& curve = map_->curve();
  PointLocation loc = curve.classify(z, curve.eps_geo());
  if (loc == PointLocation::outside) throw ParameterDomainError("point lies outside the domain");
  if (loc == PointLocation::boundary) return map_->measure().trace()(curve.closest_param(z));
  if (auto v = on_some_ray(z)) return *v;
  return flat_level(z);
}

double evaluate_u(const TransportMap& map, Point2 z) { return FoliationField(map).evaluate(z); }

ScalarField u_grid(const FoliationField& field, const Box& box, int nx, int ny) {
  if (nx < 2 || ny < 2) throw ParameterDomainError("u grid needs at least 2x2 cells");
  const BoundaryCurve& curve = field.map().curve();
  ScalarField s;
  s.nx = nx;
  s.ny = ny;
  s.origin = box.lo;
  s.hx = (box.hi.x - box.lo.x) / nx;
  s.hy = (box.hi.y - box.lo.y) / ny;
  s.u.assign(static_cast<std::size_t>(nx) * ny, std::numeric_limits<double>::quiet_NaN());
  s.mask.assign(s.u.size(), CellMask::exterior);
  const double half_diag = 0.5 * std::hypot(s.hx, s.hy);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      Point2 z = s.center(i, j);
      if (curve.classify(z, curve.eps_geo()) != PointLocation::inside) continue;
      std::size_t c = s.index(i, j);
      try {
        s.u[c] = field.evaluate(z);
        s.mask[c] = curve.distance_to(z) < half_diag ? CellMask::boundary_adjacent : CellMask::interior;
      } catch (const Error& e) {
        s.mask[c] = CellMask::invalid;
        if (s.diagnostics.size() < 16) s.diagnostics.push_back(e.what());
      }
    }
  return s;
}

TVResult total_variation(const ScalarField& u) {
  TVResult r{0.0, u.nx, u.ny};
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i)
      if (u.valid(i, j)) r.value += norm(grad_at(u, i, j)) * u.hx * u.hy;
  return r;
}

double rotation_check(const ScalarField& u, const FieldRaster& v) {
  if (u.nx != v.nx || u.ny != v.ny) throw ParameterDomainError("rotation check needs matching resolutions");
  std::vector<Point2> du(u.u.size(), Point2{});
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i)
      if (u.valid(i, j)) du[u.index(i, j)] = (u.hx * u.hy) * rotate90(grad_at(u, i, j));
  auto a = blur(du, u.nx, u.ny), b = blur(v.v, v.nx, v.ny);
  double num = 0.0, den = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    if (u.mask[c] != CellMask::interior) continue;
    num += norm(a[c] - b[c]);
    den += norm(b[c]);
  }
  return den > 0.0 ? num / den : num;
}

}  // namespace lgot
