#include "lgot/plan_fields.hpp"

#include <algorithm>
#include <cmath>

#include "lgot/errors.hpp"

namespace lgot {

double TransportPlan::mass() const {
  double m = 0.0;
  for (const auto& a : atoms) m += a.mass;
  return m;
}

TransportPlan make_plan(const TransportMap& map, int n) {
  if (n < 1) throw ParameterDomainError("plan needs at least one atom");
  TransportPlan plan;
  plan.source_map = &map;
  const SignedBoundaryMeasure& f = map.measure();
  if (f.positive_mass() <= 0.0) return plan;
  for (const Atom& a : f.inverse_cdf_sample(Sign::plus, n)) {
    TransportRay r = map.ray(a.s);
    plan.atoms.push_back({r.p_plus, r.p_minus, r.s_plus, r.s_minus, a.mass, r.level});
    plan.cost += a.mass * r.length;
  }
  return plan;
}

double FieldRaster::sigma_total() const {
  double t = 0.0;
  for (double s : sigma) t += s;
  return t;
}

FieldRaster make_raster(const Box& box, int nx, int ny) {
  if (nx < 1 || ny < 1) throw ParameterDomainError("raster needs a positive resolution");
  FieldRaster r;
  r.nx = nx;
  r.ny = ny;
  r.origin = box.lo;
  r.hx = (box.hi.x - box.lo.x) / nx;
  r.hy = (box.hi.y - box.lo.y) / ny;
  if (!(r.hx > 0 && r.hy > 0)) throw ParameterDomainError("raster box is degenerate");
  r.sigma.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  r.v.assign(r.sigma.size(), Point2{});
  return r;
}

void deposit_segment(FieldRaster& r, Point2 a, Point2 b, double mass) {
  Point2 d = b - a;
  double len = norm(d);
  if (len == 0.0) return;
  Point2 dir = (1.0 / len) * d;
  // Parameters where the segment crosses grid lines; every sub-interval lies
  // in one cell, so the clipped lengths telescope to len.
  std::vector<double> ts{0.0, 1.0};
  auto crossings = [&](double p0, double dp, double o, double h, int n) {
    if (dp == 0.0) return;
    double lo = std::min(p0, p0 + dp), hi = std::max(p0, p0 + dp);
    int k0 = static_cast<int>(std::ceil((lo - o) / h)), k1 = static_cast<int>(std::floor((hi - o) / h));
    for (int k = std::max(k0, 0); k <= std::min(k1, n); ++k) {
      double t = (o + k * h - p0) / dp;
      if (t > 0.0 && t < 1.0) ts.push_back(t);
    }
  };
  crossings(a.x, d.x, r.origin.x, r.hx, r.nx);
  crossings(a.y, d.y, r.origin.y, r.hy, r.ny);
  std::sort(ts.begin(), ts.end());
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    double piece = (ts[k + 1] - ts[k]) * len;
    if (piece <= 0.0) continue;
    Point2 mid = lerp(a, b, 0.5 * (ts[k] + ts[k + 1]));
    int i = std::clamp(static_cast<int>(std::floor((mid.x - r.origin.x) / r.hx)), 0, r.nx - 1);
    int j = std::clamp(static_cast<int>(std::floor((mid.y - r.origin.y) / r.hy)), 0, r.ny - 1);
    std::size_t c = r.index(i, j);
    r.sigma[c] += mass * piece;
    r.v[c] = r.v[c] + (mass * piece) * dir;
  }
}

FieldRaster rasterize(const TransportPlan& plan, const Box& box, int nx, int ny) {
  FieldRaster r = make_raster(box, nx, ny);
  for (const auto& a : plan.atoms) deposit_segment(r, a.source, a.target, a.mass);
  return r;
}

double boundary_mass(const TransportPlan& plan, const BoundaryCurve& curve) {
  double m = 0.0;
  for (const auto& a : plan.atoms) m += a.mass * overlap_with_boundary(curve, a.source, a.target);
  return m;
}

std::vector<TestFunction> standard_battery(const Box& box) {
  const Point2 c = 0.5 * (box.lo + box.hi);
  const double R = 0.5 * box.diameter();
  std::vector<TestFunction> out;
  out.push_back({"1", [](Point2) { return 1.0; }, [](Point2) { return Point2{}; }});
  // x^i y^j in scaled coordinates.
  for (int deg = 1; deg <= 3; ++deg) {
    for (int i = deg; i >= 0; --i) {
      int j = deg - i;
      std::string name = (i ? "x" + (i > 1 ? "^" + std::to_string(i) : std::string()) : std::string()) +
                         (j ? "y" + (j > 1 ? "^" + std::to_string(j) : std::string()) : std::string());
      out.push_back({name,
                     [=](Point2 p) {
                       double x = (p.x - c.x) / R, y = (p.y - c.y) / R;
                       return std::pow(x, i) * std::pow(y, j);
                     },
                     [=](Point2 p) {
                       double x = (p.x - c.x) / R, y = (p.y - c.y) / R;
                       double gx = i ? i * std::pow(x, i - 1) * std::pow(y, j) : 0.0;
                       double gy = j ? j * std::pow(x, i) * std::pow(y, j - 1) : 0.0;
                       return Point2{gx / R, gy / R};
                     }});
    }
  }
  auto gaussian = [&](std::string name, Point2 m, double w) {
    out.push_back({std::move(name),
                   [=](Point2 p) { return std::exp(-dot(p - m, p - m) / (w * w)); },
                   [=](Point2 p) {
                     double e = std::exp(-dot(p - m, p - m) / (w * w));
                     return (-2.0 * e / (w * w)) * (p - m);
                   }});
  };
  gaussian("gauss_center", c, 0.5 * R);
  gaussian("gauss_offset", c + Point2{0.3 * R, -0.2 * R}, 0.35 * R);
  return out;
}

std::vector<double> divergence_residual(const FieldRaster& raster, const SignedBoundaryMeasure& f,
                                        const BoundaryCurve& curve, const std::vector<TestFunction>& tests) {
  std::vector<double> out;
  for (const auto& t : tests) {
    double flow = 0.0;
    for (int j = 0; j < raster.ny; ++j)
      for (int i = 0; i < raster.nx; ++i) {
        const Point2& v = raster.v[raster.index(i, j)];
        if (v.x == 0.0 && v.y == 0.0) continue;
        flow += dot(t.grad(raster.center(i, j)), v);
      }
    out.push_back(std::abs(flow + f.integrate(curve, t.phi)));
  }
  return out;
}

}  // namespace lgot
