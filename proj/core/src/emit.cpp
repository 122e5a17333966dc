#include "lgot/emit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lgot/errors.hpp"
#include "lgot/pipeline.hpp"

namespace lgot {

std::string fmt_num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

namespace fs = std::filesystem;

class Csv {
 public:
  Csv(const std::string& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw Error("cannot write " + path);
    out_ << header << "\n";
  }
  template <class... T>
  void row(const T&... cols) {
    std::size_t k = 0;
    ((out_ << (k++ ? "," : "") << cols), ...);
    out_ << "\n";
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

const char* mask_name(CellMask m) {
  switch (m) {
    case CellMask::interior: return "interior";
    case CellMask::boundary_adjacent: return "boundary";
    case CellMask::exterior: return "exterior";
    case CellMask::invalid: return "invalid";
  }
  return "?";
}

constexpr int kRaysPerPair = 8;

}  // namespace

std::vector<std::string> emit_csv(const PipelineResult& r, const std::string& dir) {
  std::vector<std::string> files;
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
  if (r.map) {
    const TransportMap& m = *r.map;
    {
      Csv c(path("decomposition.csv"), "pair,kind,cell,side,start,length,offset");
      for (std::size_t q = 0; q < m.pairs().size(); ++q) {
        const auto& t = m.pairs()[q];
        c.row(q, to_string(t.kind), t.cell, "plus", fmt_exact(t.plus_arc.start), fmt_exact(t.plus_arc.length),
              fmt_exact(t.plus_offset));
        c.row(q, to_string(t.kind), t.cell, "minus", fmt_exact(t.minus_arc.start), fmt_exact(t.minus_arc.length),
              fmt_exact(t.minus_offset));
      }
      if (r.decomposition)
        for (const auto& fl : r.decomposition->flats)
          c.row(-1, "flat", -1, "flat", fmt_exact(fl.start), fmt_exact(fl.length), fmt_exact(0.0));
      files.push_back(c.path());
    }
    {
      Csv c(path("rays.csv"), "pair,kind,lambda,s_plus,s_minus,x_plus,y_plus,x_minus,y_minus,level");
      for (std::size_t q = 0; q < m.pairs().size(); ++q) {
        const auto& t = m.pairs()[q];
        for (int j = 0; j < kRaysPerPair; ++j) {
          double lam = t.tv * (j + 0.5) / kRaysPerPair;
          TransportRay ray = m.ray_at(q, lam);
          c.row(q, to_string(t.kind), fmt_exact(lam), fmt_exact(ray.s_plus), fmt_exact(ray.s_minus),
                fmt_exact(ray.p_plus.x), fmt_exact(ray.p_plus.y), fmt_exact(ray.p_minus.x), fmt_exact(ray.p_minus.y),
                fmt_exact(ray.level));
        }
      }
      files.push_back(c.path());
    }
  }
  {
    Csv c(path("conditions.csv"), "condition,verdict,margin,witnesses");
    for (const auto& a : r.report.conditions)
      c.row(to_string(a.id), to_string(a.verdict), std::isfinite(a.margin) ? fmt_num(a.margin) : "inf",
            a.witnesses.size());
    files.push_back(c.path());
  }
  if (r.plan) {
    Csv c(path("plan.csv"), "atom,s_plus,s_minus,x_plus,y_plus,x_minus,y_minus,mass,level");
    for (std::size_t i = 0; i < r.plan->atoms.size(); ++i) {
      const auto& a = r.plan->atoms[i];
      c.row(i, fmt_exact(a.s_plus), fmt_exact(a.s_minus), fmt_exact(a.source.x), fmt_exact(a.source.y),
            fmt_exact(a.target.x), fmt_exact(a.target.y), fmt_num(a.mass), fmt_num(a.level));
    }
    files.push_back(c.path());
  }
  if (r.raster) {
    const FieldRaster& f = *r.raster;
    Csv c(path("raster.csv"), "i,j,x_center,y_center,sigma,vx,vy");
    for (int j = 0; j < f.ny; ++j)
      for (int i = 0; i < f.nx; ++i) {
        std::size_t k = f.index(i, j);
        if (f.sigma[k] == 0.0) continue;
        Point2 z = f.center(i, j);
        c.row(i, j, fmt_num(z.x), fmt_num(z.y), fmt_num(f.sigma[k]), fmt_num(f.v[k].x), fmt_num(f.v[k].y));
      }
    files.push_back(c.path());
  }
  if (r.u) {
    const ScalarField& u = *r.u;
    Csv c(path("u.csv"), "i,j,x_center,y_center,u,mask");
    for (int j = 0; j < u.ny; ++j)
      for (int i = 0; i < u.nx; ++i) {
        std::size_t k = u.index(i, j);
        if (u.mask[k] == CellMask::exterior) continue;
        Point2 z = u.center(i, j);
        c.row(i, j, fmt_num(z.x), fmt_num(z.y), u.valid(i, j) ? fmt_num(u.u[k]) : "nan", mask_name(u.mask[k]));
      }
    files.push_back(c.path());
  }
  if (r.oracle) {
    const DiscretePlan& d = *r.oracle;
    Csv c(path("oracle.csv"), "source,target,s_source,s_target,cost,u,v");
    for (std::size_t i = 0; i < d.sources.size(); ++i) {
      int j = d.assignment[i];
      c.row(i, j, fmt_exact(d.sources[i].s), fmt_exact(d.targets[j].s), fmt_num(d.c(i, j)),
            d.u.empty() ? "" : fmt_num(d.u[i]), d.v.empty() ? "" : fmt_num(d.v[j]));
    }
    files.push_back(c.path());
  }
  return files;
}

namespace {

struct View {
  Box box;
  double scale = 1.0;
  double pad = 16.0;
  double sx(double x) const { return pad + (x - box.lo.x) * scale; }
  double sy(double y) const { return pad + (box.hi.y - y) * scale; }
  std::string pt(Point2 p) const { return fmt_num(std::round(sx(p.x) * 100) / 100) + "," + fmt_num(std::round(sy(p.y) * 100) / 100); }
};

std::string polyline_of(const View& v, std::span<const BoundaryPiece> pieces) {
  std::string d;
  for (const auto& pc : pieces) {
    int n = pc.kind() == PieceKind::line ? 1 : 48;
    if (d.empty()) d = "M" + v.pt(pc.point_at(0.0));
    for (int k = 1; k <= n; ++k) d += " L" + v.pt(pc.point_at(pc.length() * k / n));
  }
  return d + " Z";
}

std::string arc_path(const View& v, const BoundaryCurve& c, const BoundaryArc& a) {
  std::string d;
  int n = 64;
  for (int k = 0; k <= n; ++k) d += (k ? " L" : "M") + v.pt(c.point_at_wrapped(a.start + a.length * k / n));
  return d;
}

// Segments of the level set u = t over valid cell centers.
void contour_segments(const ScalarField& u, double t, std::vector<std::pair<Point2, Point2>>& out) {
  for (int j = 0; j + 1 < u.ny; ++j)
    for (int i = 0; i + 1 < u.nx; ++i) {
      if (!u.valid(i, j) || !u.valid(i + 1, j) || !u.valid(i, j + 1) || !u.valid(i + 1, j + 1)) continue;
      Point2 p[4] = {u.center(i, j), u.center(i + 1, j), u.center(i + 1, j + 1), u.center(i, j + 1)};
      double w[4] = {u.u[u.index(i, j)], u.u[u.index(i + 1, j)], u.u[u.index(i + 1, j + 1)], u.u[u.index(i, j + 1)]};
      std::vector<Point2> hits;
      for (int e = 0; e < 4; ++e) {
        double a = w[e] - t, b = w[(e + 1) % 4] - t;
        if ((a < 0) != (b < 0)) hits.push_back(lerp(p[e], p[(e + 1) % 4], a / (a - b)));
      }
      if (hits.size() >= 2) out.emplace_back(hits[0], hits[1]);
      if (hits.size() == 4) out.emplace_back(hits[2], hits[3]);
    }
}

}  // namespace

std::string emit_svg(const PipelineResult& r, const std::string& dir) {
  if (!r.scenario) throw Error("no scenario to draw");
  const BoundaryCurve& curve = r.scenario->curve;
  View v;
  v.box = curve.bbox();
  double w = v.box.hi.x - v.box.lo.x, h = v.box.hi.y - v.box.lo.y;
  v.scale = 512.0 / std::max(w, h);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_num(std::ceil(w * v.scale + 2 * v.pad))
    << "\" height=\"" << fmt_num(std::ceil(h * v.scale + 2 * v.pad)) << "\">\n";

  s << "<g id=\"partition\">\n";
  if (r.partition)
    for (const auto& c : r.partition->cells) {
      const char* fill = c.kind == CellKind::X ? "#9e9e9e" : c.kind == CellKind::C ? "#e53935" : "#1e88e5";
      s << "<path d=\"" << polyline_of(v, c.region.pieces()) << "\" fill=\"" << fill
        << "\" fill-opacity=\"0.25\" stroke=\"#555\" stroke-width=\"0.5\"/>\n";
    }
  s << "</g>\n";

  s << "<g id=\"sigma\">\n";
  if (r.raster) {
    const FieldRaster& f = *r.raster;
    int bx = std::max(1, f.nx / 128), by = std::max(1, f.ny / 128);
    std::vector<double> agg;
    int ax = (f.nx + bx - 1) / bx, ay = (f.ny + by - 1) / by;
    agg.assign(static_cast<std::size_t>(ax) * ay, 0.0);
    for (int j = 0; j < f.ny; ++j)
      for (int i = 0; i < f.nx; ++i) agg[static_cast<std::size_t>(j / by) * ax + i / bx] += f.sigma[f.index(i, j)];
    double mx = *std::max_element(agg.begin(), agg.end());
    for (int j = 0; j < ay && mx > 0; ++j)
      for (int i = 0; i < ax; ++i) {
        double a = agg[static_cast<std::size_t>(j) * ax + i] / mx;
        if (a <= 0.0) continue;
        double x0 = f.origin.x + i * bx * f.hx, y1 = f.origin.y + (j + 1) * by * f.hy;
        s << "<rect x=\"" << fmt_num(v.sx(x0)) << "\" y=\"" << fmt_num(v.sy(y1)) << "\" width=\""
          << fmt_num(bx * f.hx * v.scale) << "\" height=\"" << fmt_num(by * f.hy * v.scale)
          << "\" fill=\"#ff6f00\" fill-opacity=\"" << fmt_num(std::round(a * 1000) / 1000) << "\"/>\n";
      }
  }
  s << "</g>\n";

  s << "<g id=\"boundary\">\n<path d=\"" << polyline_of(v, curve.pieces())
    << "\" fill=\"none\" stroke=\"#000\" stroke-width=\"1.5\"/>\n</g>\n";

  s << "<g id=\"decomposition\" fill=\"none\" stroke-width=\"4\" stroke-opacity=\"0.7\">\n";
  if (r.map)
    for (const auto& t : r.map->pairs()) {
      s << "<path d=\"" << arc_path(v, curve, t.plus_arc) << "\" stroke=\"#c62828\"/>\n";
      s << "<path d=\"" << arc_path(v, curve, t.minus_arc) << "\" stroke=\"#1565c0\"/>\n";
    }
  if (r.decomposition)
    for (const auto& fl : r.decomposition->flats)
      s << "<path d=\"" << arc_path(v, curve, fl) << "\" stroke=\"#2e7d32\"/>\n";
  s << "</g>\n";

  s << "<g id=\"rays\" stroke=\"#37474f\" stroke-width=\"0.6\">\n";
  if (r.map)
    for (std::size_t q = 0; q < r.map->pairs().size(); ++q) {
      const auto& t = r.map->pairs()[q];
      for (int j = 0; j < 12; ++j) {
        TransportRay ray = r.map->ray_at(q, t.tv * (j + 0.5) / 12);
        s << "<line x1=\"" << fmt_num(v.sx(ray.p_plus.x)) << "\" y1=\"" << fmt_num(v.sy(ray.p_plus.y)) << "\" x2=\""
          << fmt_num(v.sx(ray.p_minus.x)) << "\" y2=\"" << fmt_num(v.sy(ray.p_minus.y)) << "\"/>\n";
      }
    }
  s << "</g>\n";

  s << "<g id=\"u_contours\" stroke=\"#6a1b9a\" stroke-width=\"0.8\" fill=\"none\">\n";
  if (r.u) {
    const TraceFunction& g = r.scenario->g;
    double lo = g.min_value(), hi = g.max_value();
    const int levels = 15;
    for (int k = 1; k <= levels && hi > lo; ++k) {
      std::vector<std::pair<Point2, Point2>> segs;
      contour_segments(*r.u, lo + (hi - lo) * k / (levels + 1), segs);
      if (segs.empty()) continue;
      s << "<path d=\"";
      for (const auto& [a, b] : segs) s << "M" << v.pt(a) << " L" << v.pt(b) << " ";
      s << "\"/>\n";
    }
  }
  s << "</g>\n</svg>\n";
  std::string path = (fs::path(dir) / "scene.svg").string();
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << s.str();
  return path;
}

}  // namespace lgot
