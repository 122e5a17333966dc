#include "lgot/arc_decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lgot {
namespace {

enum class ItemType { run, flat, gap };

// A maximal monotone (or constant) stretch of the trace cycle, in unwrapped
// main-curve coordinates [u0, u1].
struct Item {
  ItemType type = ItemType::run;
  int sign = 0;
  double u0 = 0.0, u1 = 0.0;
  double offset = 0.0;
  double lv0 = 0.0, lv1 = 0.0;
  double tv = 0.0;
  double claim_front = 0.0, claim_back = 0.0;
};

int slope_sign(const TraceFunction& g, std::size_t k) {
  double d = g.segment_value_end(k) - g.segment_value_start(k);
  return d > 0 ? 1 : (d < 0 ? -1 : 0);
}

std::vector<Item> build_items(const TraceFunction& g, std::span<const TraceComponent> cycle, bool& single_full) {
  const double L = g.length();
  single_full = cycle.size() == 1 && std::abs(cycle[0].arc.length - L) <= 1e-12 * L;
  std::vector<Item> items;
  for (const auto& comp : cycle) {
    double a = comp.arc.start, b = comp.arc.start + comp.arc.length;
    double u = a;
    std::size_t first_of_comp = items.size();
    for (std::size_t guard = 0; u < b && guard < 4 * g.segment_count() + 8; ++guard) {
      double laps = std::floor(u / L);
      double s = u - laps * L;
      if (s >= L) {
        s = 0.0;
        laps += 1;
      }
      std::size_t k = g.segment_of(s);
      double e = std::min(laps * L + g.segment_end(k), b);
      if (e <= u) break;
      int sg = slope_sign(g, k);
      ItemType t = sg == 0 ? ItemType::flat : ItemType::run;
      if (items.size() > first_of_comp && items.back().type == t && items.back().sign == sg) {
        items.back().u1 = e;
      } else {
        Item it;
        it.type = t;
        it.sign = sg;
        it.u0 = u;
        it.u1 = e;
        it.offset = comp.offset;
        items.push_back(it);
      }
      u = e;
    }
    if (!single_full) {
      Item gap;
      gap.type = ItemType::gap;
      gap.u0 = gap.u1 = b;
      items.push_back(gap);
    }
  }
  if (single_full && items.size() > 1 && items.front().type == items.back().type &&
      items.front().sign == items.back().sign) {
    items.back().u1 = items.front().u1 + L;
    items.erase(items.begin());
  }
  for (auto& it : items) {
    if (it.type == ItemType::gap) continue;
    it.lv0 = g.value(it.u0) + it.offset;
    it.lv1 = g.value(it.u1) + it.offset;
    it.tv = std::abs(it.lv1 - it.lv0);
  }
  return items;
}

double u_at_tv(const TraceFunction& g, const Item& it, double t) {
  if (t <= 0.0) return it.u0;
  if (t >= it.tv) return it.u1;
  double level = it.lv0 + it.sign * t - it.offset;
  return g.solve_monotone(it.u0, it.u1, level);
}

BoundaryArc arc_between(double ua, double ub, double L) {
  double s = std::fmod(ua, L);
  if (s < 0) s += L;
  if (s >= L) s = 0.0;
  return {s, ub - ua};
}

double interval_overlap(const BoundaryArc& a, const BoundaryArc& b, double L) {
  double total = 0.0;
  for (int k = -1; k <= 1; ++k) {
    double b0 = b.start + k * L, b1 = b0 + b.length;
    total += std::max(0.0, std::min(a.start + a.length, b1) - std::max(a.start, b0));
  }
  return total;
}

double segment_distance(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto pd = [](Point2 x, Point2 p, Point2 q) {
    Point2 e = q - p;
    double ee = dot(e, e);
    double t = ee > 0 ? std::clamp(dot(x - p, e) / ee, 0.0, 1.0) : 0.0;
    return distance(x, p + t * e);
  };
  Segment s1{a, b}, s2{c, d};
  // Near-point segments are fully handled by the endpoint distances below.
  double tiny = 1e-10 * std::max({norm(a), norm(b), norm(c), norm(d), 1.0});
  if (s1.length() > tiny && s2.length() > tiny && segments_cross_interior(s1, s2)) return 0.0;
  return std::min({pd(a, c, d), pd(b, c, d), pd(c, a, b), pd(d, a, b)});
}

// Whether every trace segment inside the arc has the given strict sign.
bool strictly_monotone_on(const TraceFunction& g, const BoundaryArc& arc, int sign) {
  const double L = g.length();
  double u = arc.start, b = arc.start + arc.length;
  for (std::size_t guard = 0; u < b && guard < 4 * g.segment_count() + 8; ++guard) {
    double laps = std::floor(u / L);
    double s = u - laps * L;
    if (s >= L) {
      s = 0.0;
      laps += 1;
    }
    std::size_t k = g.segment_of(s);
    double e = std::min(laps * L + g.segment_end(k), b);
    if (e - u > 1e-12 * L && slope_sign(g, k) != sign) return false;
    if (e <= u) break;
    u = e;
  }
  return true;
}

}  // namespace

double arc_distance(const BoundaryCurve& curve, const BoundaryArc& a, const BoundaryArc& b, int arc_samples) {
  auto pa = sample_arc(curve, a, arc_samples);
  auto pb = sample_arc(curve, b, arc_samples);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pa.size(); ++i)
    for (std::size_t j = 0; j + 1 < pb.size(); ++j)
      best = std::min(best, segment_distance(pa[i], pa[i + 1], pb[j], pb[j + 1]));
  return best;
}

ConvexPolygon pair_hull(const BoundaryCurve& curve, const BoundaryArc& plus, const BoundaryArc& minus,
                        int arc_samples) {
  std::vector<BoundaryArc> arcs{plus, minus};
  return convex_hull_region(curve, arcs, arc_samples);
}

ArcDecomposition decompose(const SignedBoundaryMeasure& f, const BoundaryCurve& curve, DecomposeOptions opts) {
  TraceComponent whole{{0.0, curve.length()}, 0.0};
  return decompose_cycle(f, curve, std::span<const TraceComponent>(&whole, 1), opts);
}

ArcDecomposition decompose_cycle(const SignedBoundaryMeasure& f, const BoundaryCurve& curve,
                                 std::span<const TraceComponent> cycle, DecomposeOptions opts) {
  const TraceFunction& g = f.trace();
  const double L = g.length();
  if (std::abs(L - curve.length()) > 1e-9 * curve.length())
    throw TraceError("trace length does not match the boundary length");
  if (cycle.empty()) throw ParameterDomainError("empty trace cycle");
  const double tol = opts.tv_rel_tol * std::max(g.total_variation(), 1e-300);
  ArcDecomposition out;
  out.cycle.assign(cycle.begin(), cycle.end());

  bool single_full = false;
  std::vector<Item> items = build_items(g, cycle, single_full);
  const std::size_t N = items.size();

  // Levels must close up around the cycle.
  {
    double level = std::numeric_limits<double>::quiet_NaN();
    double first_level = level;
    for (const auto& it : items) {
      if (it.type == ItemType::gap) continue;
      if (std::isnan(first_level)) first_level = it.lv0;
      if (!std::isnan(level) && std::abs(level - it.lv0) > tol)
        throw TraceError("induced datum jumps across an interior edge: f(∂cell) != 0");
      level = it.lv1;
    }
    if (!std::isnan(level) && std::abs(level - first_level) > tol)
      throw TraceError("induced datum does not close up: f(∂cell) != 0");
  }

  // Extrema: direct junctions of opposite runs, processed by corner arclength.
  struct Extremum {
    std::size_t before, after;
    double corner;
  };
  std::vector<Extremum> ext;
  if (N >= 2) {
    for (std::size_t i = 0; i < N; ++i) {
      std::size_t j = (i + 1) % N;
      const Item &a = items[i], &b = items[j];
      if (a.type == ItemType::run && b.type == ItemType::run && a.sign == -b.sign)
        ext.push_back({i, j, std::fmod(a.u1, L)});
    }
  }
  std::stable_sort(ext.begin(), ext.end(), [](const Extremum& x, const Extremum& y) { return x.corner < y.corner; });
  for (const auto& e : ext) {
    Item &a = items[e.before], &b = items[e.after];
    double avail_a = a.tv - a.claim_front - a.claim_back;
    double avail_b = b.tv - b.claim_front - b.claim_back;
    double tau = std::min(avail_a, avail_b);
    if (tau <= tol) continue;
    // Exhausting both sides at (nearly) equal TV closes the pair there.
    if (std::abs(avail_a - avail_b) <= tol) tau = std::max(avail_a, avail_b);
    double old_back = a.claim_back, old_front = b.claim_front;
    a.claim_back += std::min(tau, avail_a);
    b.claim_front += std::min(tau, avail_b);
    double ua = u_at_tv(g, a, a.tv - a.claim_back);
    double ua_end = u_at_tv(g, a, a.tv - old_back);
    double ub_start = u_at_tv(g, b, old_front);
    double ub = u_at_tv(g, b, b.claim_front);
    ChiPair chi;
    chi.corner = e.corner < 0 ? e.corner + L : e.corner;
    chi.tv = std::min(tau, std::min(avail_a, avail_b));
    BoundaryArc arc_a = arc_between(ua, ua_end, L), arc_b = arc_between(ub_start, ub, L);
    if (a.sign > 0) {
      chi.plus_arc = arc_a;
      chi.plus_offset = a.offset;
      chi.minus_arc = arc_b;
      chi.minus_offset = b.offset;
    } else {
      chi.minus_arc = arc_a;
      chi.minus_offset = a.offset;
      chi.plus_arc = arc_b;
      chi.plus_offset = b.offset;
    }
    out.chis.push_back(chi);
  }

  // Leftover monotone mass, matched like balanced parentheses.
  struct Piece {
    std::size_t item;
    double f0, f1;  // TV-from-item-begin range
    double level_begin;
  };
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i < N; ++i) {
    const Item& it = items[i];
    if (it.type == ItemType::run) {
      double f0 = it.claim_front, f1 = it.tv - it.claim_back;
      if (f1 - f0 > tol) pieces.push_back({i, f0, f1, it.lv0 + it.sign * f0});
    } else if (it.type == ItemType::flat) {
      out.flats.push_back(arc_between(it.u0, it.u1, L));
    }
  }
  if (!pieces.empty()) {
    std::size_t start = pieces.size();
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      if (items[pieces[p].item].sign < 0) continue;
      if (start == pieces.size() || pieces[p].level_begin < pieces[start].level_begin - tol) start = p;
    }
    auto offending = [&] {
      std::vector<BoundaryArc> arcs;
      for (const auto& pc : pieces) {
        const Item& it = items[pc.item];
        arcs.push_back(arc_between(u_at_tv(g, it, pc.f0), u_at_tv(g, it, pc.f1), L));
      }
      return arcs;
    };
    if (start == pieces.size())
      throw DecompositionError("decreasing mass has no increasing counterpart", offending());
    struct Open {
      std::size_t piece;
      double rem;
    };
    std::vector<Open> stack;
    for (std::size_t n = 0; n < pieces.size(); ++n) {
      const Piece& pc = pieces[(start + n) % pieces.size()];
      const Item& it = items[pc.item];
      double amount = pc.f1 - pc.f0;
      if (it.sign > 0) {
        stack.push_back({(start + n) % pieces.size(), amount});
        continue;
      }
      double used = 0.0;
      while (amount - used > tol) {
        if (stack.empty())
          throw DecompositionError("decreasing mass cannot be matched along the orientation", offending());
        Open& top = stack.back();
        const Piece& pp = pieces[top.piece];
        const Item& pit = items[pp.item];
        double left = amount - used;
        double t = top.rem <= left + tol ? top.rem : left;
        bool pop = top.rem <= left + tol;
        bool last = left <= top.rem + tol;
        double m_hi = last ? pc.f1 : pc.f0 + used + t;
        GammaPair gp;
        gp.tv = t;
        gp.plus_arc = arc_between(u_at_tv(g, pit, pp.f0 + top.rem - t), u_at_tv(g, pit, pp.f0 + top.rem), L);
        gp.minus_arc = arc_between(u_at_tv(g, it, pc.f0 + used), u_at_tv(g, it, m_hi), L);
        gp.plus_offset = pit.offset;
        gp.minus_offset = it.offset;
        gp.hull = pair_hull(curve, gp.plus_arc, gp.minus_arc, opts.hull_samples);
        out.gammas.push_back(gp);
        used += t;
        if (pop)
          stack.pop_back();
        else
          top.rem -= t;
        if (last) break;
      }
    }
    for (const auto& o : stack) {
      if (o.rem > tol)
        throw DecompositionError("increasing mass left unmatched", offending());
    }
  }

  H1Report rep = verify_H1(out, curve, f, opts.tv_rel_tol);
  if (!rep.pass) {
    std::vector<BoundaryArc> arcs;
    std::string msg = "no (H1) decomposition found by the pairing algorithm";
    for (const auto& v : rep.violations) {
      arcs.insert(arcs.end(), v.arcs.begin(), v.arcs.end());
      msg += "; " + v.clause + ": " + v.detail;
    }
    throw DecompositionError(msg, arcs);
  }
  return out;
}

H1Report verify_H1(const ArcDecomposition& d, const BoundaryCurve& curve, const SignedBoundaryMeasure& f, double tol) {
  H1Report rep;
  const TraceFunction& g = f.trace();
  const double L = curve.length();
  const double tv_tol = tol * std::max(g.total_variation(), 1e-300);
  const double margin = 8.0 * curve.eps_geo();
  const double s_tol = 1e-9 * L;
  auto fail = [&](std::string clause, std::string detail, std::vector<BoundaryArc> arcs) {
    rep.pass = false;
    rep.violations.push_back({std::move(clause), std::move(detail), std::move(arcs)});
  };
  auto check_pair = [&](const BoundaryArc& p, const BoundaryArc& m, double tv, const std::string& name) {
    double tp = f.tv(p), tm = f.tv(m);
    if (std::abs(tp - tm) > tv_tol || std::abs(tp - tv) > tv_tol)
      fail("tv-equality", name + ": TV(plus)=" + std::to_string(tp) + " TV(minus)=" + std::to_string(tm), {p, m});
    if (!strictly_monotone_on(g, p, +1)) fail("monotonicity", name + ": g not strictly increasing on plus arc", {p});
    if (!strictly_monotone_on(g, m, -1)) fail("monotonicity", name + ": g not strictly decreasing on minus arc", {m});
  };

  std::vector<ConvexPolygon> hulls;
  std::vector<std::pair<BoundaryArc, BoundaryArc>> pair_arcs;
  for (std::size_t i = 0; i < d.chis.size(); ++i) {
    const auto& c = d.chis[i];
    std::string name = "chi " + std::to_string(i);
    check_pair(c.plus_arc, c.minus_arc, c.tv, name);
    auto near = [&](double a, double b) {
      double x = std::fmod(std::abs(a - b), L);
      return std::min(x, L - x) <= s_tol;
    };
    bool meet = (near(c.plus_arc.end(L), c.corner) && near(c.minus_arc.start, c.corner)) ||
                (near(c.minus_arc.end(L), c.corner) && near(c.plus_arc.start, c.corner));
    if (!meet) fail("chi-contact", name + ": arcs do not meet at the corner", {c.plus_arc, c.minus_arc});
    bool far_touch = (near(c.plus_arc.start, c.minus_arc.end(L)) && near(c.plus_arc.end(L), c.corner)) ||
                     (near(c.minus_arc.start, c.plus_arc.end(L)) && near(c.minus_arc.end(L), c.corner));
    if (far_touch)
      rep.notes.push_back(name + ": far ends also meet (the pair covers the whole cycle); accepted as a degenerate contact");
    hulls.push_back(pair_hull(curve, c.plus_arc, c.minus_arc));
    pair_arcs.emplace_back(c.plus_arc, c.minus_arc);
  }
  for (std::size_t i = 0; i < d.gammas.size(); ++i) {
    const auto& gp = d.gammas[i];
    std::string name = "gamma " + std::to_string(i);
    check_pair(gp.plus_arc, gp.minus_arc, gp.tv, name);
    double dist = arc_distance(curve, gp.plus_arc, gp.minus_arc);
    if (!(dist > margin)) fail("gamma-distance", name + ": dist(plus, minus) = " + std::to_string(dist), {gp.plus_arc, gp.minus_arc});
    hulls.push_back(pair_hull(curve, gp.plus_arc, gp.minus_arc));
    pair_arcs.emplace_back(gp.plus_arc, gp.minus_arc);
  }

  std::vector<BoundaryArc> all;
  for (auto& [p, m] : pair_arcs) {
    all.push_back(p);
    all.push_back(m);
  }
  all.insert(all.end(), d.flats.begin(), d.flats.end());
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (interval_overlap(all[i], all[j], L) > s_tol) fail("disjointness", "arcs overlap", {all[i], all[j]});

  for (std::size_t i = 0; i < hulls.size(); ++i)
    for (std::size_t j = i + 1; j < hulls.size(); ++j)
      if (!polygons_separated(hulls[i], hulls[j], margin))
        fail("hull-disjointness", "hulls of pairs " + std::to_string(i) + " and " + std::to_string(j) + " meet",
             {pair_arcs[i].first, pair_arcs[i].second, pair_arcs[j].first, pair_arcs[j].second});

  for (const auto& fl : d.flats) {
    if (std::abs(f.tv(fl)) > tv_tol) fail("flat", "g not constant on a flat arc", {fl});
    bool whole = fl.length >= L - s_tol;
    if (whole) continue;
    // A flat bounded by an interior edge of a cell is maximal there.
    auto at_cycle_end = [&](double s) {
      for (const auto& c : d.cycle) {
        double a = c.arc.start, b = c.arc.end(L);
        auto near = [&](double x, double y) {
          double z = std::fmod(std::abs(x - y), L);
          return std::min(z, L - z) <= s_tol;
        };
        if (c.arc.length < L - s_tol && (near(s, a) || near(s, b))) return true;
      }
      return false;
    };
    double before = fl.start - 1e-7 * L, after = fl.start + fl.length + 1e-7 * L;
    bool ok_before = at_cycle_end(fl.start) || g.value(before) != g.value(fl.start);
    bool ok_after = at_cycle_end(fl.end(L)) || g.value(after) != g.value(fl.start + fl.length);
    if (!ok_before || !ok_after) fail("flat-maximality", "flat arc is not maximal", {fl});
  }
  return rep;
}

}  // namespace lgot
