#include "lgot/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace lgot {

const char* to_string(ConditionId id) {
  switch (id) {
    case ConditionId::H1: return "H1";
    case ConditionId::H2: return "H2";
    case ConditionId::H3: return "H3";
    case ConditionId::H3prime: return "H3'";
    case ConditionId::S: return "S";
    case ConditionId::L1: return "L1";
    case ConditionId::L2: return "L2";
    case ConditionId::A1: return "A1";
    case ConditionId::A2: return "A2";
    case ConditionId::A3: return "A3";
    case ConditionId::A3tilde: return "A3~";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::satisfied: return "satisfied";
    case Verdict::violated: return "violated";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

std::optional<ConditionId> parse_condition(const std::string& s) {
  static const std::map<std::string, ConditionId> names = {
      {"H1", ConditionId::H1}, {"H2", ConditionId::H2},   {"H3", ConditionId::H3}, {"H3'", ConditionId::H3prime},
      {"S", ConditionId::S},   {"L1", ConditionId::L1},   {"L2", ConditionId::L2}, {"A1", ConditionId::A1},
      {"A2", ConditionId::A2}, {"A3", ConditionId::A3},   {"A3~", ConditionId::A3tilde}};
  auto it = names.find(s);
  if (it == names.end()) return std::nullopt;
  return it->second;
}

std::pair<double, double> cycle_sums(std::span<const Point2> plus, std::span<const Point2> minus) {
  const std::size_t m = plus.size();
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    lhs += distance(plus[k], minus[k]);
    rhs += distance(plus[k], minus[(k + 1) % m]);
  }
  return {lhs, rhs};
}

bool replay_violation(const CycleWitness& w, bool strict, double tol) {
  auto [lhs, rhs] = cycle_sums(w.plus_points, w.minus_points);
  return strict ? lhs >= rhs - tol : lhs > rhs + tol;
}

AdmissibilityReport report_from_h1(const H1Report& h1) {
  AdmissibilityReport r;
  r.id = ConditionId::H1;
  r.verdict = h1.pass ? Verdict::satisfied : Verdict::violated;
  for (const auto& v : h1.violations) {
    CycleWitness w;
    w.note = v.clause + ": " + v.detail;
    for (const auto& a : v.arcs) w.points.emplace_back(a.start, a.start + a.length);
    r.witnesses.push_back(std::move(w));
  }
  r.notes = h1.notes;
  return r;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cycle_tol(const BoundaryCurve& c) { return 1e-12 * c.diameter(); }

struct Node {
  int pair = -1;
  int cell = -1;
  TransportRay ray;
};

std::vector<int> selected_pairs(const TransportMap& map, int cell) {
  std::vector<int> out;
  for (std::size_t i = 0; i < map.pairs().size(); ++i)
    if (cell < 0 || map.pairs()[i].cell == cell) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> cell_pairs(const TransportMap& map) {
  std::vector<int> out;
  for (std::size_t i = 0; i < map.pairs().size(); ++i)
    if (map.pairs()[i].cell >= 0) out.push_back(static_cast<int>(i));
  return out;
}

// TV-quantile midpoints of every pair plus the two endpoint rays, skipping
// degenerate rays and endpoints shared with another pair.
std::vector<Node> sample_nodes(const TransportMap& map, const std::vector<int>& pairs, int k) {
  const double L = map.curve().length();
  const double s_tol = 1e-9 * L;
  const double len_tol = 8 * map.curve().eps_geo();
  std::vector<Node> nodes;
  auto shared = [&](double s, int self) {
    for (int q : pairs) {
      if (q == self) continue;
      const auto& t = map.pairs()[q];
      for (double e : {t.plus_arc.start, t.plus_arc.end(L), t.minus_arc.start, t.minus_arc.end(L)}) {
        double d = std::fmod(std::abs(e - s), L);
        if (std::min(d, L - d) <= s_tol) return true;
      }
    }
    return false;
  };
  for (int q : pairs) {
    const auto& t = map.pairs()[q];
    for (int j = 0; j < k; ++j) nodes.push_back({q, t.cell, map.ray_at(q, t.tv * (j + 0.5) / k)});
    for (double lam : {0.0, t.tv}) {
      TransportRay r = map.ray_at(q, lam);
      if (r.length <= len_tol) continue;
      if (shared(r.s_plus, q) || shared(r.s_minus, q)) continue;
      nodes.push_back({q, t.cell, r});
    }
  }
  return nodes;
}

CycleWitness witness_from_nodes(const std::vector<Node>& nodes, const std::vector<int>& cyc) {
  CycleWitness w;
  for (int v : cyc) {
    w.points.emplace_back(nodes[v].ray.s_plus, nodes[v].ray.s_minus);
    w.plus_points.push_back(nodes[v].ray.p_plus);
    w.minus_points.push_back(nodes[v].ray.p_minus);
  }
  auto [l, r] = cycle_sums(w.plus_points, w.minus_points);
  w.lhs = l;
  w.rhs = r;
  return w;
}

struct MinCycle {
  double weight = kInf;
  std::vector<int> cycle;
};

// Minimum-weight cycle of the complete digraph W (kInf = no edge).
// Returns the weight found by Floyd–Warshall and, when it is <= report_below,
// a simple cycle extracted by a length-bounded walk search.
MinCycle min_cycle(const std::vector<double>& W, std::size_t N, double report_below) {
  MinCycle out;
  if (N == 0) return out;
  std::vector<double> D = W;
  for (std::size_t k = 0; k < N; ++k) {
    for (std::size_t i = 0; i < N; ++i) {
      double dik = D[i * N + k];
      if (dik == kInf) continue;
      double* di = &D[i * N];
      const double* dk = &D[k * N];
      for (std::size_t j = 0; j < N; ++j) {
        double v = dik + dk[j];
        if (v < di[j]) di[j] = v;
      }
    }
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i < N; ++i)
    if (D[i * N + i] < out.weight) {
      out.weight = D[i * N + i];
      start = i;
    }
  if (!(out.weight <= report_below)) return out;
  // Walks from `start` of length 1..N; keep the best closed one.
  std::vector<double> best(N, kInf), next(N);
  std::vector<std::vector<int>> parent(N + 1, std::vector<int>(N, -1));
  for (std::size_t v = 0; v < N; ++v) {
    best[v] = W[start * N + v];
    parent[1][v] = static_cast<int>(start);
  }
  double closed = best[start];
  std::size_t closed_len = 1;
  for (std::size_t len = 2; len <= N; ++len) {
    std::fill(next.begin(), next.end(), kInf);
    for (std::size_t u = 0; u < N; ++u) {
      if (best[u] == kInf) continue;
      for (std::size_t v = 0; v < N; ++v) {
        double w = W[u * N + v];
        if (w == kInf) continue;
        if (best[u] + w < next[v]) {
          next[v] = best[u] + w;
          parent[len][v] = static_cast<int>(u);
        }
      }
    }
    best.swap(next);
    if (best[start] < closed) {
      closed = best[start];
      closed_len = len;
    }
  }
  std::vector<int> walk(closed_len + 1);
  walk[closed_len] = static_cast<int>(start);
  for (std::size_t len = closed_len; len >= 1; --len) walk[len - 1] = parent[len][walk[len]];
  // Split the closed walk into simple cycles; keep the lightest.
  std::vector<int> stack;
  std::vector<int> pos(N, -1);
  double best_w = kInf;
  for (int v : walk) {
    if (pos[v] >= 0) {
      std::vector<int> cyc(stack.begin() + pos[v], stack.end());
      double w = 0.0;
      for (std::size_t i = 0; i < cyc.size(); ++i) w += W[cyc[i] * N + cyc[(i + 1) % cyc.size()]];
      if (w < best_w) {
        best_w = w;
        out.cycle = cyc;
      }
      for (std::size_t i = pos[v] + 1; i < stack.size(); ++i) pos[stack[i]] = -1;
      stack.resize(pos[v] + 1);
    } else {
      pos[v] = static_cast<int>(stack.size());
      stack.push_back(v);
    }
  }
  // With negative cycles the Floyd–Warshall diagonal compounds them; report
  // the weight of the extracted simple cycle instead.
  if (!out.cycle.empty()) out.weight = best_w;
  return out;
}

std::vector<double> ray_weights(const std::vector<Node>& nodes, bool by_cell) {
  const std::size_t N = nodes.size();
  std::vector<double> W(N * N, kInf);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      bool same = by_cell ? nodes[i].cell == nodes[j].cell : nodes[i].pair == nodes[j].pair;
      if (same) continue;
      W[i * N + j] = distance(nodes[i].ray.p_plus, nodes[j].ray.p_minus) - nodes[i].ray.length;
    }
  return W;
}

}  // namespace

AdmissibilityReport check_H2(const TransportMap& map, int n, int cell) {
  if (n < 2) throw ParameterDomainError("H2 needs at least 2 samples per pair");
  AdmissibilityReport r;
  r.id = ConditionId::H2;
  const double len_tol = 8 * map.curve().eps_geo();
  int tested = 0, failed = 0;
  double clearance = kInf;
  for (int q : selected_pairs(map, cell)) {
    const auto& t = map.pairs()[q];
    // Open arcs only: the limiting rays at the ends may run along a flat edge.
    // Not much closer than 1e-3 though; a tiny chord under a kinked peak on an
    // arc has a sagitta below eps_geo and looks like it hugs the boundary.
    std::vector<double> lams{1e-3 * t.tv, (1 - 1e-3) * t.tv};
    for (int j = 0; j < n; ++j) lams.push_back(t.tv * (j + 0.5) / n);
    for (double lam : lams) {
      TransportRay ray = map.ray_at(q, lam);
      if (ray.length <= len_tol) continue;
      ++tested;
      if (!open_segment_in_domain(map.curve(), ray.p_plus, ray.p_minus)) {
        ++failed;
        if (r.witnesses.size() < 16) {
          CycleWitness w;
          w.points.emplace_back(ray.s_plus, ray.s_minus);
          w.plus_points.push_back(ray.p_plus);
          w.minus_points.push_back(ray.p_minus);
          w.note = "open segment leaves the domain or runs along its boundary";
          r.witnesses.push_back(std::move(w));
        }
      } else {
        clearance = std::min(clearance, map.curve().distance_to(lerp(ray.p_plus, ray.p_minus, 0.5)));
      }
    }
  }
  r.verdict = failed == 0 ? Verdict::satisfied : Verdict::violated;
  r.margin = failed == 0 ? (tested ? clearance : 0.0) : -static_cast<double>(failed) / tested;
  r.notes.push_back(std::to_string(tested) + " rays tested, " + std::to_string(failed) + " failed");
  r.notes.push_back("margin: midpoint clearance when satisfied, minus the failing fraction otherwise");
  return r;
}

AdmissibilityReport check_H3(const TransportMap& map, int k, int cell) {
  if (k < 1) throw ParameterDomainError("H3 needs at least one sample per arc");
  AdmissibilityReport r;
  r.id = ConditionId::H3;
  auto pairs = selected_pairs(map, cell);
  const double tol = cycle_tol(map.curve());
  if (pairs.size() < 2) {
    r.verdict = Verdict::satisfied;
    r.margin = kInf;
    r.notes.push_back("fewer than two pairs: no multi-pair cycles");
    return r;
  }
  auto nodes = sample_nodes(map, pairs, k);
  auto W = ray_weights(nodes, false);
  MinCycle mc = min_cycle(W, nodes.size(), tol);
  r.margin = mc.weight;
  if (mc.weight <= tol) {
    r.verdict = Verdict::violated;
    CycleWitness w = witness_from_nodes(nodes, mc.cycle);
    w.note = "cycle over " + std::to_string(mc.cycle.size()) + " rays";
    r.witnesses.push_back(std::move(w));
  } else {
    r.verdict = Verdict::satisfied;
  }
  r.notes.push_back("verdict relies on sampling: " + std::to_string(k) +
                    " TV-quantile rays per pair plus endpoint rays, all cycle lengths");
  return r;
}

AdmissibilityReport check_H3prime(const AdmissibilityReport& h3, double strict_margin) {
  AdmissibilityReport r;
  r.id = ConditionId::H3prime;
  r.margin = h3.margin;
  r.witnesses = h3.witnesses;
  bool ok = h3.verdict == Verdict::satisfied && h3.margin > std::max(strict_margin, 0.0);
  r.verdict = ok ? Verdict::satisfied : (h3.verdict == Verdict::undecided ? Verdict::undecided : Verdict::violated);
  r.notes.push_back("delta_m = " + std::to_string(h3.margin));
  return r;
}

AdmissibilityReport check_S(const BoundaryCurve& curve, const SignedBoundaryMeasure& f, const TransportMap& map) {
  AdmissibilityReport r;
  r.id = ConditionId::S;
  const double L = curve.length();
  const double eps = curve.eps_geo();
  double mass = 0.0;
  int counted = 0;
  for (double s : convexity_report(curve).singular_params) {
    bool inside = false;
    for (const auto& t : map.pairs()) inside = inside || t.plus_arc.contains(s, L) || t.minus_arc.contains(s, L);
    if (!inside) continue;
    ++counted;
    mass += f.tv({curve.wrap(s - eps), 2 * eps});
  }
  r.verdict = Verdict::satisfied;
  r.margin = 0.0;
  r.notes.push_back(std::to_string(counted) + " singular points inside pair arcs; epsilon-window mass " +
                    std::to_string(mass));
  r.notes.push_back("piecewise-linear g is atomless, so |f| of the finite singular set is exactly 0");
  return r;
}

namespace {

struct Reps {
  int cell = -1;
  std::vector<Point2> plus, minus;
  std::vector<double> plus_s, minus_s;
};

std::vector<Reps> cell_reps(const TransportMap& map, int k) {
  std::map<int, Reps> by_cell;
  for (std::size_t q = 0; q < map.pairs().size(); ++q) {
    const auto& t = map.pairs()[q];
    if (t.cell < 0) continue;
    Reps& r = by_cell[t.cell];
    r.cell = t.cell;
    for (int j = 0; j < k; ++j) {
      TransportRay ray = map.ray_at(q, t.tv * (j + 0.5) / k);
      r.plus.push_back(ray.p_plus);
      r.plus_s.push_back(ray.s_plus);
      r.minus.push_back(ray.p_minus);
      r.minus_s.push_back(ray.s_minus);
    }
  }
  std::vector<Reps> out;
  for (auto& [c, r] : by_cell) out.push_back(std::move(r));
  return out;
}

ConditionId variant_id(L2Variant v) {
  switch (v) {
    case L2Variant::L2: return ConditionId::L2;
    case L2Variant::A3: return ConditionId::A3;
    case L2Variant::A3tilde: return ConditionId::A3tilde;
  }
  return ConditionId::L2;
}

AdmissibilityReport check_matched(const TransportMap& map, const L2Options& o) {
  AdmissibilityReport r;
  r.id = variant_id(o.variant);
  const bool strict = o.variant != L2Variant::A3tilde;
  const double tol = cycle_tol(map.curve());
  auto pairs = cell_pairs(map);
  std::set<int> cells;
  for (int q : pairs) cells.insert(map.pairs()[q].cell);
  if (cells.size() < 2) {
    r.verdict = Verdict::satisfied;
    r.margin = kInf;
    r.notes.push_back("fewer than two cells: no cycles");
    return r;
  }
  int k = o.k;
  while (k > 1 && static_cast<int>(pairs.size()) * (k + 2) > o.max_nodes) --k;
  auto nodes = sample_nodes(map, pairs, k);
  auto W = ray_weights(nodes, true);
  double report_below = strict ? tol : -tol;
  MinCycle mc = min_cycle(W, nodes.size(), report_below);
  r.margin = mc.weight;
  bool bad = strict ? mc.weight <= tol : mc.weight < -tol;
  r.verdict = bad ? Verdict::violated : Verdict::satisfied;
  if (bad && !mc.cycle.empty()) {
    CycleWitness w = witness_from_nodes(nodes, mc.cycle);
    w.note = "matched rays e- = T(e+) across " + std::to_string(mc.cycle.size()) + " cells";
    r.witnesses.push_back(std::move(w));
  }
  r.notes.push_back("representatives: matched rays, " + std::to_string(k) + " per pair plus unshared endpoints");
  return r;
}

AdmissibilityReport check_arbitrary(const TransportMap& map, const L2Options& o) {
  AdmissibilityReport r;
  r.id = variant_id(o.variant);
  const bool strict = o.variant != L2Variant::A3tilde;
  const double tol = cycle_tol(map.curve());
  auto reps = cell_reps(map, o.k);
  const std::size_t P = reps.size();
  if (P < 2) {
    r.verdict = Verdict::satisfied;
    r.margin = kInf;
    r.notes.push_back("fewer than two cells: no cycles");
    return r;
  }
  // W[i][j][q][q'] = min_p |p − minus_j[q']| − |p − minus_i[q]| over plus reps p of cell i.
  std::vector<std::size_t> m(P);
  std::size_t mmax = 0;
  for (std::size_t i = 0; i < P; ++i) {
    m[i] = reps[i].minus.size();
    mmax = std::max(mmax, m[i]);
  }
  auto idx = [&](std::size_t i, std::size_t j, std::size_t q, std::size_t q2) {
    return ((i * P + j) * mmax + q) * mmax + q2;
  };
  std::vector<double> W(P * P * mmax * mmax, kInf);
  std::vector<int> arg(W.size(), -1);
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < P; ++j) {
      if (i == j) continue;
      for (std::size_t q = 0; q < m[i]; ++q)
        for (std::size_t q2 = 0; q2 < m[j]; ++q2) {
          double best = kInf;
          int bp = -1;
          for (std::size_t p = 0; p < reps[i].plus.size(); ++p) {
            double v = distance(reps[i].plus[p], reps[j].minus[q2]) - distance(reps[i].plus[p], reps[i].minus[q]);
            if (v < best) {
              best = v;
              bp = static_cast<int>(p);
            }
          }
          W[idx(i, j, q, q2)] = best;
          arg[idx(i, j, q, q2)] = bp;
        }
    }
  using Cyc = std::vector<std::pair<std::size_t, std::size_t>>;  // (cell, minus rep)
  double best_val = kInf;
  Cyc best_cyc;
  auto consider = [&](const Cyc& c) {
    double v = 0.0;
    for (std::size_t t = 0; t < c.size(); ++t) {
      auto [i, q] = c[t];
      auto [j, q2] = c[(t + 1) % c.size()];
      v += W[idx(i, j, q, q2)];
    }
    if (v < best_val) {
      best_val = v;
      best_cyc = c;
    }
  };
  bool exact = static_cast<int>(P) <= o.max_exact_cells;
  if (exact) {
    // Held–Karp style DP over subsets of cells above the start cell.
    struct Arg {
      std::size_t s = 0, qs = 0, mask = 0, r = 0, q = 0;
    } where;
    auto run = [&](std::size_t s, std::size_t qs, std::vector<double>& dp, std::size_t& nb) {
      nb = P - s - 1;
      std::size_t masks = std::size_t{1} << nb;
      dp.assign(masks * nb * mmax, kInf);
      auto at = [&](std::size_t mask, std::size_t rr, std::size_t q) -> double& {
        return dp[(mask * nb + rr) * mmax + q];
      };
      for (std::size_t rr = 0; rr < nb; ++rr)
        for (std::size_t q = 0; q < m[s + 1 + rr]; ++q) at(std::size_t{1} << rr, rr, q) = W[idx(s, s + 1 + rr, qs, q)];
      double local = kInf;
      Arg la;
      for (std::size_t mask = 1; mask < masks; ++mask) {
        for (std::size_t rr = 0; rr < nb; ++rr) {
          if (!(mask >> rr & 1)) continue;
          std::size_t c = s + 1 + rr;
          for (std::size_t q = 0; q < m[c]; ++q) {
            double val = at(mask, rr, q);
            if (val == kInf) continue;
            double closed = val + W[idx(c, s, q, qs)];
            if (closed < local) {
              local = closed;
              la = {s, qs, mask, rr, q};
            }
            for (std::size_t r2 = 0; r2 < nb; ++r2) {
              if (mask >> r2 & 1) continue;
              std::size_t c2 = s + 1 + r2;
              std::size_t nm = mask | (std::size_t{1} << r2);
              for (std::size_t q2 = 0; q2 < m[c2]; ++q2) {
                double v = val + W[idx(c, c2, q, q2)];
                double& slot = at(nm, r2, q2);
                if (v < slot) slot = v;
              }
            }
          }
        }
      }
      return std::make_pair(local, la);
    };
    std::vector<double> dp;
    std::size_t nb = 0;
    for (std::size_t s = 0; s + 1 < P; ++s)
      for (std::size_t qs = 0; qs < m[s]; ++qs) {
        auto [v, a] = run(s, qs, dp, nb);
        if (v < best_val) {
          best_val = v;
          where = a;
        }
      }
    // Recompute the winning table and walk back through it.
    run(where.s, where.qs, dp, nb);
    auto at = [&](std::size_t mask, std::size_t rr, std::size_t q) { return dp[(mask * nb + rr) * mmax + q]; };
    Cyc rev;
    std::size_t mask = where.mask, rr = where.r, q = where.q;
    for (;;) {
      std::size_t c = where.s + 1 + rr;
      rev.emplace_back(c, q);
      std::size_t prev_mask = mask & ~(std::size_t{1} << rr);
      if (prev_mask == 0) break;
      double target = at(mask, rr, q);
      bool found = false;
      for (std::size_t r2 = 0; r2 < nb && !found; ++r2) {
        if (!(prev_mask >> r2 & 1)) continue;
        std::size_t c2 = where.s + 1 + r2;
        for (std::size_t q2 = 0; q2 < m[c2]; ++q2) {
          double v = at(prev_mask, r2, q2);
          if (v == kInf) continue;
          if (std::abs(v + W[idx(c2, c, q2, q)] - target) <= 1e-12 * (1.0 + std::abs(target))) {
            mask = prev_mask;
            rr = r2;
            q = q2;
            found = true;
            break;
          }
        }
      }
      if (!found) break;
    }
    rev.emplace_back(where.s, where.qs);
    std::reverse(rev.begin(), rev.end());
    best_cyc = rev;
  } else {
    for (std::size_t i = 0; i < P; ++i)
      for (std::size_t j = i + 1; j < P; ++j)
        for (std::size_t q = 0; q < m[i]; ++q)
          for (std::size_t q2 = 0; q2 < m[j]; ++q2) consider({{i, q}, {j, q2}});
    if (P <= 40) {
      for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = 0; j < P; ++j)
          for (std::size_t l = 0; l < P; ++l) {
            if (i == j || j == l || i == l || i > j || i > l) continue;
            for (std::size_t q = 0; q < m[i]; ++q)
              for (std::size_t q2 = 0; q2 < m[j]; ++q2)
                for (std::size_t q3 = 0; q3 < m[l]; ++q3) consider({{i, q}, {j, q2}, {l, q3}});
          }
    }
    std::mt19937_64 rng(o.seed);
    std::vector<std::size_t> order(P);
    for (std::size_t i = 0; i < P; ++i) order[i] = i;
    std::uniform_int_distribution<std::size_t> len_d(4, std::min<std::size_t>(P, 8));
    for (int t = 0; t < o.random_cycles && P >= 4; ++t) {
      std::size_t len = len_d(rng);
      std::shuffle(order.begin(), order.end(), rng);
      Cyc c;
      for (std::size_t u = 0; u < len; ++u) {
        std::uniform_int_distribution<std::size_t> qd(0, m[order[u]] - 1);
        c.emplace_back(order[u], qd(rng));
      }
      consider(c);
    }
    r.notes.push_back("more than " + std::to_string(o.max_exact_cells) +
                      " cells: exhaustive 2- and 3-cycles plus " + std::to_string(o.random_cycles) +
                      " random cycles (seed " + std::to_string(o.seed) + ")");
  }
  r.margin = best_val;
  bool bad = strict ? best_val <= tol : best_val < -tol;
  if (bad)
    r.verdict = Verdict::violated;
  else
    r.verdict = exact ? Verdict::satisfied : Verdict::undecided;
  if (bad) {
    CycleWitness w;
    for (std::size_t t = 0; t < best_cyc.size(); ++t) {
      auto [i, q] = best_cyc[t];
      auto [j, q2] = best_cyc[(t + 1) % best_cyc.size()];
      int p = arg[idx(i, j, q, q2)];
      w.plus_points.push_back(reps[i].plus[p]);
      w.minus_points.push_back(reps[i].minus[q]);
      w.points.emplace_back(reps[i].plus_s[p], reps[i].minus_s[q]);
    }
    auto [l, rr] = cycle_sums(w.plus_points, w.minus_points);
    w.lhs = l;
    w.rhs = rr;
    w.note = "arbitrary representatives over " + std::to_string(best_cyc.size()) + " distinct cells";
    r.witnesses.push_back(std::move(w));
  }
  r.notes.push_back("representatives: " + std::to_string(o.k) + " open-arc TV-quantile points per arc side");
  return r;
}

}  // namespace

AdmissibilityReport check_L2_A3(const TransportMap& map, const L2Options& opts) {
  if (opts.k < 1) throw ParameterDomainError("need at least one representative per cell");
  return opts.mode == RepMode::matched ? check_matched(map, opts) : check_arbitrary(map, opts);
}

AdmissibilityReport check_L2_A3(const Partition&, const TransportMap& map, const L2Options& opts) {
  return check_L2_A3(map, opts);
}

AdmissibilityReport check_A1(const Partition& p, const PartitionReport& rep) {
  AdmissibilityReport r;
  r.id = ConditionId::A1;
  const BoundaryCurve& curve = p.curve;
  const double L = curve.length();
  auto conv = convexity_report(curve);
  auto nonconvex_on = [&](const BoundaryArc& a) {
    for (const auto& span : conv.reflex_spans) {
      if (span.length == 0.0) {
        double off = a.offset_of(span.start, L);
        if (off > 1e-12 * L && off < a.length - 1e-12 * L) return true;
      } else {
        for (int k = -1; k <= 1; ++k) {
          double s0 = span.start + k * L;
          double lo = std::max(a.start, s0), hi = std::min(a.start + a.length, s0 + span.length);
          if (hi - lo > 1e-12 * L) return true;
        }
      }
    }
    return false;
  };
  int e_cells = 0;
  bool ok = true;
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    const Cell& c = p.cells[i];
    if (c.kind == CellKind::C && i < rep.cells.size() && !rep.cells[i].ok) {
      ok = false;
      CycleWitness w;
      w.note = c.name + ": C cell fails (L1)";
      r.witnesses.push_back(w);
    }
    if (c.kind != CellKind::E || !c.e_pair) continue;
    ++e_cells;
    if (!nonconvex_on(c.e_pair->plus_arc) && !nonconvex_on(c.e_pair->minus_arc)) {
      ok = false;
      CycleWitness w;
      w.note = c.name + ": neither E arc has negative curvature";
      w.points.emplace_back(c.e_pair->plus_arc.start, c.e_pair->minus_arc.start);
      r.witnesses.push_back(w);
    }
  }
  r.verdict = ok ? Verdict::satisfied : Verdict::violated;
  r.notes.push_back(std::to_string(e_cells) + " E cells examined");
  return r;
}

AdmissibilityReport check_A2(const Partition& p, const BoundaryCurve& curve, int k) {
  if (k < 1) throw ParameterDomainError("A2 needs at least one sample");
  AdmissibilityReport r;
  r.id = ConditionId::A2;
  int tested = 0, failed = 0;
  auto positions = [&](const BoundaryArc& a) {
    std::vector<std::pair<double, Point2>> pts;
    std::vector<double> offs{1e-6 * a.length, (1 - 1e-6) * a.length};
    for (int j = 0; j < k; ++j) offs.push_back(a.length * (j + 0.5) / k);
    for (double o : offs) {
      double s = curve.wrap(a.start + o);
      pts.emplace_back(s, curve.point_at(s));
    }
    return pts;
  };
  for (const auto& c : p.cells) {
    if (c.kind != CellKind::E || !c.e_pair) continue;
    auto P = positions(c.e_pair->plus_arc), M = positions(c.e_pair->minus_arc);
    for (auto& [sp, xp] : P)
      for (auto& [sm, xm] : M) {
        ++tested;
        if (distance(xp, xm) <= curve.eps_geo() || open_segment_in_domain(curve, xp, xm)) continue;
        ++failed;
        if (r.witnesses.size() < 16) {
          CycleWitness w;
          w.points.emplace_back(sp, sm);
          w.plus_points.push_back(xp);
          w.minus_points.push_back(xm);
          w.note = c.name + ": segment leaves the domain";
          r.witnesses.push_back(std::move(w));
        }
      }
  }
  r.verdict = failed == 0 ? Verdict::satisfied : Verdict::violated;
  r.margin = failed ? -static_cast<double>(failed) / tested : 0.0;
  r.notes.push_back(std::to_string(tested) + " segments tested, " + std::to_string(failed) + " failed");
  return r;
}

AdmissibilityReport check_L1(const Partition& p, const PartitionReport& rep, const TransportMap& map, int h2_samples,
                             int k) {
  AdmissibilityReport r;
  r.id = ConditionId::L1;
  bool ok = rep.pass;
  for (const auto& s : rep.issues) {
    CycleWitness w;
    w.note = s;
    r.witnesses.push_back(w);
  }
  double margin = kInf;
  for (std::size_t i = 0; i < p.cells.size(); ++i) {
    if (p.cells[i].kind != CellKind::C) continue;
    auto h2 = check_H2(map, h2_samples, static_cast<int>(i));
    auto h3 = check_H3(map, k, static_cast<int>(i));
    for (auto* sub : {&h2, &h3}) {
      if (sub->verdict != Verdict::violated) continue;
      ok = false;
      for (auto w : sub->witnesses) {
        w.note = p.cells[i].name + " " + to_string(sub->id) + ": " + w.note;
        r.witnesses.push_back(std::move(w));
      }
    }
    margin = std::min(margin, h3.margin);
  }
  r.verdict = ok ? Verdict::satisfied : Verdict::violated;
  r.margin = margin;
  r.notes.push_back("per-cell (H1) on the induced datum, (H2) against the domain, (H3) within the cell");
  return r;
}

ScanResult threshold_scan(const std::function<AdmissibilityReport(double)>& eval, double lo, double hi, double tol) {
  if (!(lo < hi)) throw ScanError("scan range must satisfy lo < hi");
  ScanResult out;
  auto probe = [&](double x) {
    AdmissibilityReport r = eval(x);
    out.samples.push_back({x, r.verdict, r.margin});
    if (r.verdict == Verdict::undecided) throw ScanError("verdict undecided at parameter " + std::to_string(x));
    return r.verdict;
  };
  Verdict vlo = probe(lo), vhi = probe(hi);
  if (vlo == vhi) throw ScanError("verdict is the same at both ends of the range; no frontier to locate");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (probe(mid) == vlo)
      lo = mid;
    else
      hi = mid;
  }
  out.critical = 0.5 * (lo + hi);
  return out;
}

}  // namespace lgot
