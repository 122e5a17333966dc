#include "lgot/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lgot/errors.hpp"

namespace lgot {

DiscretePlan solve_assignment(std::vector<OracleAtom> sources, std::vector<OracleAtom> targets, double mass) {
  if (sources.size() != targets.size())
    throw OracleInputError("assignment needs equal atom counts (" + std::to_string(sources.size()) + " vs " +
                           std::to_string(targets.size()) + ")");
  DiscretePlan plan;
  plan.sources = std::move(sources);
  plan.targets = std::move(targets);
  plan.mass = mass;
  const int n = static_cast<int>(plan.sources.size());
  if (n == 0) return plan;
  // Shortest augmenting paths with potentials; rows and columns are 1-based,
  // column 0 is the virtual start.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  std::vector<double> row(n);
  for (int i = 1; i <= n; ++i) {
    for (int j = 0; j < n; ++j) row[j] = plan.c(i - 1, j);
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      int i0 = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = plan.c(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  plan.assignment.assign(n, -1);
  for (int j = 1; j <= n; ++j) plan.assignment[p[j] - 1] = j - 1;
  plan.u.assign(u.begin() + 1, u.end());
  plan.v.assign(v.begin() + 1, v.end());
  for (int i = 0; i < n; ++i) plan.cost += mass * plan.c(i, plan.assignment[i]);
  return plan;
}

DiscretePlan solve_measure(const BoundaryCurve& curve, const SignedBoundaryMeasure& f, int n) {
  if (n < 1) throw ParameterDomainError("oracle needs at least one atom per sign");
  if (f.positive_mass() <= 0.0) return {};
  std::vector<OracleAtom> src, dst;
  auto plus = f.inverse_cdf_sample(Sign::plus, n), minus = f.inverse_cdf_sample(Sign::minus, n);
  for (const Atom& a : plus) src.push_back({curve.point_at(a.s), a.s});
  for (const Atom& a : minus) dst.push_back({curve.point_at(a.s), a.s});
  return solve_assignment(std::move(src), std::move(dst), plus.front().mass);
}

DiscretePlan plan_from_assignment(std::vector<OracleAtom> sources, std::vector<OracleAtom> targets,
                                  std::vector<int> assignment, double mass) {
  if (sources.size() != targets.size() || assignment.size() != sources.size())
    throw OracleInputError("assignment size does not match the atoms");
  std::vector<char> seen(targets.size(), 0);
  for (int j : assignment) {
    if (j < 0 || j >= static_cast<int>(targets.size()) || seen[j]) throw OracleInputError("assignment is not a bijection");
    seen[j] = 1;
  }
  DiscretePlan plan;
  plan.sources = std::move(sources);
  plan.targets = std::move(targets);
  plan.assignment = std::move(assignment);
  plan.mass = mass;
  for (std::size_t i = 0; i < plan.sources.size(); ++i) plan.cost += mass * plan.c(i, plan.assignment[i]);
  return plan;
}

DiscretePlan plan_from_map(const TransportPlan& tp) {
  std::vector<OracleAtom> src, dst;
  std::vector<int> assign;
  for (const auto& a : tp.atoms) {
    assign.push_back(static_cast<int>(src.size()));
    src.push_back({a.source, a.s_plus});
    dst.push_back({a.target, a.s_minus});
  }
  double mass = tp.atoms.empty() ? 0.0 : tp.atoms.front().mass;
  return plan_from_assignment(std::move(src), std::move(dst), std::move(assign), mass);
}

double duality_gap(const DiscretePlan& plan) {
  if (plan.u.size() != plan.sources.size()) throw OracleInputError("plan carries no dual potentials");
  double dual = 0.0;
  for (double x : plan.u) dual += x;
  for (double x : plan.v) dual += x;
  return std::abs(plan.cost - plan.mass * dual);
}

double c_transform_defect(const DiscretePlan& plan) {
  if (plan.u.size() != plan.sources.size()) throw OracleInputError("plan carries no dual potentials");
  double worst = 0.0;
  for (std::size_t i = 0; i < plan.sources.size(); ++i) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < plan.targets.size(); ++j) m = std::min(m, plan.c(i, j) - plan.v[j]);
    worst = std::max(worst, std::abs(plan.u[i] - m));
  }
  return worst;
}

CycleCheck cyclical_violation(const DiscretePlan& plan, int m_max, std::uint64_t seed) {
  if (m_max < 2) throw ParameterDomainError("cycle length must be at least 2");
  CycleCheck out;
  out.seed = seed;
  const int n = static_cast<int>(plan.sources.size());
  if (n < 2) return out;
  const int m_top = std::min(m_max, n);
  auto margin_of = [&](const std::vector<int>& cyc) {
    double shifted = 0.0, matched = 0.0;
    for (std::size_t k = 0; k < cyc.size(); ++k) {
      matched += plan.c(cyc[k], plan.assignment[cyc[k]]);
      shifted += plan.c(cyc[k], plan.assignment[cyc[(k + 1) % cyc.size()]]);
    }
    return plan.mass * (shifted - matched);
  };
  auto consider = [&](const std::vector<int>& cyc) {
    double m = margin_of(cyc);
    if (m < out.margin) {
      out.margin = m;
      out.cycle = cyc;
    }
  };
  // Number of cycles with the smallest index first.
  double count = 0.0;
  for (int m = 2; m <= m_top; ++m) {
    double c = n;
    for (int k = 1; k < m; ++k) c *= (n - k);
    count += c / m;
  }
  if (n <= 40 && count <= 2e7) {
    std::vector<int> cyc;
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self) -> void {
      if (cyc.size() >= 2) consider(cyc);
      if (static_cast<int>(cyc.size()) == m_top) return;
      for (int j = cyc.front() + 1; j < n; ++j) {
        if (used[j]) continue;
        used[j] = 1;
        cyc.push_back(j);
        self(self);
        cyc.pop_back();
        used[j] = 0;
      }
    };
    for (int s = 0; s < n; ++s) {
      cyc = {s};
      used[s] = 1;
      rec(rec);
      used[s] = 0;
    }
    return out;
  }
  out.exhaustive = false;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> len_d(2, m_top);
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  for (int t = 0; t < 100000; ++t) {
    int m = len_d(rng);
    // Partial Fisher–Yates for m distinct indices.
    for (int k = 0; k < m; ++k) {
      std::uniform_int_distribution<int> pick(k, n - 1);
      std::swap(idx[k], idx[pick(rng)]);
    }
    consider(std::vector<int>(idx.begin(), idx.begin() + m));
  }
  return out;
}

namespace {

int attribute(const Partition& p, double s) {
  const double L = p.curve.length();
  const double tol = 1e-12 * L;
  int best = -1;
  double best_depth = -1.0;
  // Prefer the cell whose arc holds s deepest inside.
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    for (const auto& tc : p.cells[c].trace) {
      if (!tc.arc.contains(s, L, tol)) continue;
      double off = tc.arc.offset_of(s, L);
      double depth = std::min(off, tc.arc.length - off);
      if (off > tc.arc.length + tol) depth = 0.0;
      if (depth > best_depth) {
        best_depth = depth;
        best = static_cast<int>(c);
      }
    }
  return best;
}

}  // namespace

std::vector<std::vector<double>> cross_cell_mass(const DiscretePlan& plan, const Partition& p) {
  const std::size_t N = p.cells.size();
  std::vector<std::vector<double>> M(N, std::vector<double>(N, 0.0));
  for (std::size_t i = 0; i < plan.sources.size(); ++i) {
    int a = attribute(p, plan.sources[i].s);
    int b = attribute(p, plan.targets[plan.assignment[i]].s);
    if (a < 0 || b < 0)
      throw OracleInputError("atom at s = " + std::to_string(a < 0 ? plan.sources[i].s : plan.targets[plan.assignment[i]].s) +
                             " is not on any cell trace");
    M[a][b] += plan.mass;
  }
  return M;
}

double off_diagonal(const std::vector<std::vector<double>>& m) {
  double t = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (i != j) t += m[i][j];
  return t;
}

SupportAudit ray_support_audit(const DiscretePlan& plan, const BoundaryCurve& curve) {
  SupportAudit out;
  double inside = 0.0, total = 0.0;
  for (std::size_t i = 0; i < plan.sources.size(); ++i) {
    Point2 a = plan.sources[i].p, b = plan.targets[plan.assignment[i]].p;
    total += plan.mass;
    if (distance(a, b) <= curve.eps_geo() || open_segment_in_domain(curve, a, b))
      inside += plan.mass;
    else
      out.boundary_touching.push_back(static_cast<int>(i));
  }
  out.interior_fraction = total > 0.0 ? inside / total : 1.0;
  return out;
}

}  // namespace lgot
