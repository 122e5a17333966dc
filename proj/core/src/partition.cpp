#include "lgot/partition.hpp"

#include <algorithm>
#include <cmath>

namespace lgot {

const char* to_string(CellKind k) {
  switch (k) {
    case CellKind::C: return "C";
    case CellKind::E: return "E";
    case CellKind::X: return "X";
  }
  return "?";
}

std::vector<BoundaryPiece> sub_pieces(const BoundaryCurve& curve, double u0, double u1) {
  std::vector<BoundaryPiece> out;
  const double L = curve.length();
  const double tiny = 10 * curve.eps_geo();
  double base = std::floor(u0 / L) * L;
  for (int lap = 0; lap < 3; ++lap) {
    for (std::size_t i = 0; i < curve.piece_count(); ++i) {
      double a = base + lap * L + curve.piece_start(i);
      double b = base + lap * L + curve.piece_start(i + 1);
      double lo = std::max(a, u0), hi = std::min(b, u1);
      if (hi - lo <= tiny) continue;
      const auto& pc = curve.pieces()[i];
      Point2 p0 = pc.point_at(lo - a);
      if (pc.kind() == PieceKind::line) {
        out.push_back(BoundaryPiece::line(p0, pc.point_at(hi - a)));
      } else {
        out.push_back(BoundaryPiece::arc(p0, pc.center(), pc.sweep() * (hi - lo) / pc.length()));
      }
    }
  }
  return out;
}

namespace {

double near_mod(double a, double b, double L) {
  double x = std::fmod(std::abs(a - b), L);
  return std::min(x, L - x);
}

// Offsets so that the induced datum is continuous across interior edges.
void assign_offsets(std::vector<TraceComponent>& comps, const TraceFunction& g) {
  if (comps.empty()) return;
  comps[0].offset = 0.0;
  for (std::size_t j = 0; j + 1 < comps.size(); ++j) {
    double end_level = g.value(comps[j].arc.start + comps[j].arc.length) + comps[j].offset;
    comps[j + 1].offset = end_level - g.value(comps[j + 1].arc.start);
  }
}

std::vector<TraceComponent> detect_trace(const BoundaryCurve& region, const BoundaryCurve& curve) {
  const double L = curve.length();
  const double tol = 1e3 * curve.eps_geo();
  std::vector<TraceComponent> pieces;
  for (const auto& pc : region.pieces()) {
    bool on = true;
    for (int k = 0; k <= 4 && on; ++k) on = curve.distance_to(pc.point_at(pc.length() * k / 4.0)) <= tol;
    if (!on) {
      pieces.push_back({{-1.0, 0.0}, 0.0});  // interior edge marker
      continue;
    }
    Point2 mid = pc.point_at(0.5 * pc.length());
    double s_mid = curve.closest_param(mid);
    if (dot(pc.tangent_at(0.5 * pc.length()), curve.tangent_at(s_mid)) <= 0)
      throw PartitionError("cell runs along the boundary against its orientation");
    pieces.push_back({{curve.wrap(s_mid - 0.5 * pc.length()), pc.length()}, 0.0});
  }
  // Merge contiguous boundary pieces, cyclically, in cell order.
  const std::size_t n = pieces.size();
  std::size_t first = 0;
  bool any_interior = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (pieces[i].arc.start < 0) {
      any_interior = true;
      first = (i + 1) % n;
    }
  }
  std::vector<TraceComponent> out;
  bool open = false;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& pc = pieces[(first + k) % n];
    if (pc.arc.start < 0) {
      open = false;
      continue;
    }
    if (open && near_mod(out.back().arc.start + out.back().arc.length, pc.arc.start, L) <= tol) {
      out.back().arc.length += pc.arc.length;
    } else {
      out.push_back(pc);
      open = true;
    }
  }
  if (!any_interior && out.size() > 1) {
    // The whole cell boundary is on ∂Ω: fold into one full arc.
    double total = 0.0;
    for (const auto& c : out) total += c.arc.length;
    out = {{{out.front().arc.start, std::min(total, L)}, 0.0}};
  }
  if (!any_interior && out.size() == 1 && std::abs(out[0].arc.length - L) <= tol) out[0].arc = {0.0, L};
  return out;
}

Cell make_slice(const FamilySpec& fam, int family, int i, const BoundaryCurve& curve, const TraceFunction& g) {
  const double pu0 = fam.plus_arc.start, pu1 = fam.plus_arc.end_unwrapped();
  const double mu0 = fam.minus_arc.start, mu1 = fam.minus_arc.end_unwrapped();
  double lo = g.value(pu0), hi = g.value(pu1);
  double l0 = lo + (hi - lo) * (i - 1) / fam.n;
  double l1 = i == fam.n ? hi : lo + (hi - lo) * i / fam.n;
  double p0 = i == 1 ? pu0 : g.solve_monotone(pu0, pu1, l0);
  double p1 = i == fam.n ? pu1 : g.solve_monotone(pu0, pu1, l1);
  double m0 = i == fam.n ? mu0 : g.solve_monotone(mu0, mu1, l1);
  double m1 = i == 1 ? mu1 : g.solve_monotone(mu0, mu1, l0);
  std::vector<BoundaryPiece> pcs = sub_pieces(curve, p0, p1);
  Point2 M0 = curve.point_at_wrapped(m0);
  const double tiny = 10 * curve.eps_geo();
  if (distance(pcs.back().to(), M0) > tiny) pcs.push_back(BoundaryPiece::line(pcs.back().to(), M0));
  auto mp = sub_pieces(curve, m0, m1);
  pcs.insert(pcs.end(), mp.begin(), mp.end());
  if (distance(pcs.back().to(), pcs.front().from()) > tiny) pcs.push_back(BoundaryPiece::line(pcs.back().to(), pcs.front().from()));
  Cell cell{fam.name + "[" + std::to_string(i) + "]", fam.kind, BoundaryCurve(std::move(pcs)), {}, std::nullopt,
            family, i};
  BoundaryArc pa{curve.wrap(p0), p1 - p0}, ma{curve.wrap(m0), m1 - m0};
  cell.trace = {{pa, 0.0}, {ma, 0.0}};
  assign_offsets(cell.trace, g);
  if (fam.kind == CellKind::E) cell.e_pair = EPair{pa, ma, cell.trace[0].offset, cell.trace[1].offset};
  return cell;
}

}  // namespace

Partition materialize(const PartitionSpec& spec, const BoundaryCurve& curve, const SignedBoundaryMeasure& f) {
  Partition p{spec, {}, Provenance::user_supplied, curve, f};
  const TraceFunction& g = f.trace();
  for (const auto& cs : spec.cells) {
    BoundaryCurve region(cs.pieces);
    Cell cell{cs.name, cs.kind, region, detect_trace(region, curve), std::nullopt, -1, -1};
    assign_offsets(cell.trace, g);
    if (cs.kind == CellKind::E) {
      if (cell.trace.size() != 2) throw PartitionError("E cell " + cs.name + " must have exactly two trace arcs");
      bool first_plus = f.measure(cell.trace[0].arc) > 0;
      const auto& tp = cell.trace[first_plus ? 0 : 1];
      const auto& tm = cell.trace[first_plus ? 1 : 0];
      cell.e_pair = EPair{tp.arc, tm.arc, tp.offset, tm.offset};
    }
    p.cells.push_back(std::move(cell));
  }
  for (std::size_t fi = 0; fi < spec.families.size(); ++fi) {
    const auto& fam = spec.families[fi];
    if (fam.n < 1) throw ParameterDomainError("family " + fam.name + " needs n >= 1");
    if (fam.kind == CellKind::X) throw PartitionError("family " + fam.name + " cannot be of kind X");
    double lo = g.value(fam.plus_arc.start), hi = g.value(fam.plus_arc.end_unwrapped());
    double mlo = g.value(fam.minus_arc.end_unwrapped()), mhi = g.value(fam.minus_arc.start);
    double tol = 1e-9 * std::max(g.total_variation(), 1e-300);
    if (!(hi > lo) || std::abs(mlo - lo) > tol || std::abs(mhi - hi) > tol)
      throw PartitionError("family " + fam.name + " is not sliceable: its arcs do not span matching levels");
    for (int i = 1; i <= fam.n; ++i) p.cells.push_back(make_slice(fam, static_cast<int>(fi), i, curve, g));
  }
  return p;
}

PartitionReport validate(const Partition& p) { return validate(p, p.f, p.curve); }

PartitionReport validate(const Partition& p, const SignedBoundaryMeasure& f, const BoundaryCurve& curve) {
  PartitionReport rep;
  const TraceFunction& g = f.trace();
  const double tvg = std::max(g.total_variation(), 1e-300);
  double area = 0.0;
  for (const auto& c : p.cells) area += c.region.signed_area();
  rep.area_rel_error = std::abs(area - curve.signed_area()) / curve.signed_area();
  if (rep.area_rel_error > 1e-6)
    throw PartitionError("cells do not cover the domain: area mismatch " + std::to_string(rep.area_rel_error));

  // Overlap probe on a grid; cell bounding boxes prune the work.
  const int m = 64;
  Box bb = curve.bbox();
  const double tol = 10 * curve.eps_geo();
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      Point2 z{bb.lo.x + (bb.hi.x - bb.lo.x) * (i + 0.5) / m, bb.lo.y + (bb.hi.y - bb.lo.y) * (j + 0.5) / m};
      int count = 0;
      for (const auto& c : p.cells) {
        Box cb = c.region.bbox();
        if (z.x < cb.lo.x || z.x > cb.hi.x || z.y < cb.lo.y || z.y > cb.hi.y) continue;
        if (c.region.classify(z, tol) == PointLocation::inside) ++count;
      }
      if (count > 1) throw PartitionError("cells overlap near (" + std::to_string(z.x) + ", " + std::to_string(z.y) + ")");
    }
  }

  for (std::size_t ci = 0; ci < p.cells.size(); ++ci) {
    const Cell& c = p.cells[ci];
    CellReport cr;
    cr.cell = ci;
    auto issue = [&](std::string s) {
      cr.ok = false;
      cr.issues.push_back(c.name + ": " + s);
    };
    if (c.kind == CellKind::X) {
      for (const auto& t : c.trace)
        if (f.tv(t.arc) > 1e-12 * tvg) issue("g is not constant on the trace of an X cell");
    } else {
      if (!c.trace.empty()) {
        const auto& last = c.trace.back();
        double close = g.value(last.arc.start + last.arc.length) + last.offset -
                       (g.value(c.trace.front().arc.start) + c.trace.front().offset);
        if (std::abs(close) > 1e-9 * tvg) issue("f(∂cell) = " + std::to_string(close) + " is not zero");
      }
      if (c.kind == CellKind::C) {
        if (convexity_report(c.region).cls == ConvexityClass::non_convex) issue("C cell is not convex");
        try {
          cr.decomposition = decompose_cycle(f, curve, c.trace);
        } catch (const DecompositionError& e) {
          issue(std::string("(H1) fails on the induced datum: ") + e.what());
        } catch (const TraceError& e) {
          issue(e.what());
        }
      } else if (c.kind == CellKind::E) {
        if (!c.e_pair) {
          issue("E cell without a plus/minus pair");
        } else {
          double tp = f.tv(c.e_pair->plus_arc), tm = f.tv(c.e_pair->minus_arc);
          if (std::abs(tp - tm) > 1e-9 * tvg) issue("E arcs carry different total variation");
        }
      }
    }
    if (!cr.ok) {
      rep.pass = false;
      rep.issues.insert(rep.issues.end(), cr.issues.begin(), cr.issues.end());
    }
    rep.cells.push_back(std::move(cr));
  }
  return rep;
}

Partition refine(const Partition& p, std::size_t family, int n) {
  if (family >= p.spec.families.size()) throw PartitionError("no such cell family");
  if (n < 1) throw ParameterDomainError("subdivision count must be at least 1");
  PartitionSpec spec = p.spec;
  spec.families[family].n = n;
  Partition out = materialize(spec, p.curve, p.f);
  out.provenance = Provenance::refined;
  return out;
}

TransportMap partition_map(const Partition& p, const PartitionReport& rep) {
  TransportMap m(p.curve, p.f);
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    const Cell& c = p.cells[i];
    if (c.kind == CellKind::C && i < rep.cells.size() && rep.cells[i].decomposition)
      m.add(*rep.cells[i].decomposition, static_cast<int>(i));
    if (c.kind == CellKind::E && c.e_pair) m.add_e_pair(*c.e_pair, static_cast<int>(i));
  }
  return m;
}

Partition auto_refine_until(const Partition& p, const std::function<RefineVerdict(const Partition&)>& check,
                            int n_max) {
  Partition cur = p;
  for (;;) {
    RefineVerdict v = check(cur);
    if (v.pass) return cur;
    bool can = !cur.spec.families.empty();
    for (const auto& fam : cur.spec.families) can = can && 2 * fam.n <= n_max;
    if (!can) throw RefinementExhausted("refinement exhausted before the conditions held", cur, v.summary);
    PartitionSpec spec = cur.spec;
    for (auto& fam : spec.families) fam.n *= 2;
    cur = materialize(spec, p.curve, p.f);
    cur.provenance = Provenance::refined;
  }
}

}  // namespace lgot
