#include "lgot/transport_map.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "lgot/errors.hpp"

namespace lgot {

const char* to_string(PairKind k) {
  switch (k) {
    case PairKind::chi: return "chi";
    case PairKind::gamma: return "gamma";
    case PairKind::e: return "e";
  }
  return "?";
}

namespace {

void build_profile(const TraceFunction& g, const BoundaryArc& arc, double offset, std::vector<double>& us,
                   std::vector<double>& levels) {
  const double L = g.length();
  double a = arc.start, b = arc.start + arc.length;
  us.push_back(a);
  double base = std::floor(a / L) * L;
  for (int lap = 0; lap < 3; ++lap) {
    for (const auto& bp : g.breakpoints()) {
      double u = base + lap * L + bp.s;
      if (u > a && u < b) us.push_back(u);
    }
  }
  us.push_back(b);
  std::sort(us.begin(), us.end());
  for (double u : us) levels.push_back(g.value(u) + offset);
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x, bool increasing) {
  // xs monotone (increasing or decreasing); returns y at x, clamped.
  std::size_t n = xs.size();
  if (increasing) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    std::size_t k = static_cast<std::size_t>(it - xs.begin());
    double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + t * (ys[k] - ys[k - 1]);
  }
  if (x >= xs.front()) return ys.front();
  if (x <= xs[n - 1]) return ys[n - 1];
  auto it = std::upper_bound(xs.begin(), xs.end(), x, std::greater<double>());
  std::size_t k = static_cast<std::size_t>(it - xs.begin());
  double t = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + t * (ys[k] - ys[k - 1]);
}

}  // namespace

double PairTable::plus_u_at(double level) const { return interp(plus_level, plus_u, level, true); }
double PairTable::minus_u_at(double level) const { return interp(minus_level, minus_u, level, false); }

TransportMap::TransportMap(BoundaryCurve curve, SignedBoundaryMeasure f) : curve_(std::move(curve)), f_(std::move(f)) {}

TransportMap TransportMap::build(const BoundaryCurve& curve, const SignedBoundaryMeasure& f, const ArcDecomposition& d,
                                 std::span<const EPair> e_pairs) {
  TransportMap m(curve, f);
  m.add(d);
  for (const auto& e : e_pairs) m.add_e_pair(e);
  return m;
}

void TransportMap::add_pair(PairTable t) {
  const TraceFunction& g = f_.trace();
  const double tol = 1e-9 * std::max(g.total_variation(), 1e-300);
  build_profile(g, t.plus_arc, t.plus_offset, t.plus_u, t.plus_level);
  build_profile(g, t.minus_arc, t.minus_offset, t.minus_u, t.minus_level);
  t.low_level = t.plus_level.front();
  t.tv = t.plus_level.back() - t.plus_level.front();
  if (!(t.tv > tol)) throw MapError("pair with zero total variation");
  double mtv = t.minus_level.front() - t.minus_level.back();
  if (std::abs(mtv - t.tv) > tol || std::abs(t.minus_level.back() - t.low_level) > tol)
    throw MapError("pair arcs do not span matching levels");
  for (std::size_t i = 1; i < t.plus_level.size(); ++i)
    if (!(t.plus_level[i] > t.plus_level[i - 1])) throw MapError("plus arc is not strictly increasing");
  for (std::size_t i = 1; i < t.minus_level.size(); ++i)
    if (!(t.minus_level[i] < t.minus_level[i - 1])) throw MapError("minus arc is not strictly decreasing");
  pairs_.push_back(std::move(t));
}

void TransportMap::add(const ArcDecomposition& d, int cell) {
  for (const auto& c : d.chis) {
    PairTable t;
    t.kind = PairKind::chi;
    t.cell = cell;
    t.plus_arc = c.plus_arc;
    t.minus_arc = c.minus_arc;
    t.plus_offset = c.plus_offset;
    t.minus_offset = c.minus_offset;
    t.corner = c.corner;
    add_pair(std::move(t));
  }
  for (const auto& gp : d.gammas) {
    PairTable t;
    t.kind = PairKind::gamma;
    t.cell = cell;
    t.plus_arc = gp.plus_arc;
    t.minus_arc = gp.minus_arc;
    t.plus_offset = gp.plus_offset;
    t.minus_offset = gp.minus_offset;
    add_pair(std::move(t));
  }
}

void TransportMap::add_e_pair(const EPair& e, int cell) {
  PairTable t;
  t.kind = PairKind::e;
  t.cell = cell;
  t.plus_arc = e.plus_arc;
  t.minus_arc = e.minus_arc;
  t.plus_offset = e.plus_offset;
  t.minus_offset = e.minus_offset;
  add_pair(std::move(t));
}

int TransportMap::find_plus(double s) const {
  const double L = curve_.length();
  const double tol = 1e-12 * L;
  int best = -1;
  double best_img = 0.0;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (!pairs_[i].plus_arc.contains(s, L, tol)) continue;
    const auto& p = pairs_[i];
    double off = p.plus_arc.offset_of(s, L);
    if (off > p.plus_arc.length) off = 0.0;
    double level = f_.trace().value(p.plus_arc.start + off) + p.plus_offset;
    double img = curve_.wrap(p.minus_u_at(level));
    if (best < 0 || img < best_img) {
      best = static_cast<int>(i);
      best_img = img;
    }
  }
  return best;
}

int TransportMap::find_minus(double s) const {
  const double L = curve_.length();
  const double tol = 1e-12 * L;
  int best = -1;
  double best_img = 0.0;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    if (!pairs_[i].minus_arc.contains(s, L, tol)) continue;
    const auto& p = pairs_[i];
    double off = p.minus_arc.offset_of(s, L);
    if (off > p.minus_arc.length) off = 0.0;
    double level = f_.trace().value(p.minus_arc.start + off) + p.minus_offset;
    double img = curve_.wrap(p.plus_u_at(level));
    if (best < 0 || img < best_img) {
      best = static_cast<int>(i);
      best_img = img;
    }
  }
  return best;
}

double TransportMap::eval(double s_plus) const {
  int i = find_plus(s_plus);
  if (i < 0) throw MapError("arclength " + std::to_string(s_plus) + " is not on any plus arc");
  const auto& p = pairs_[i];
  double off = p.plus_arc.offset_of(s_plus, curve_.length());
  if (off > p.plus_arc.length) off = 0.0;
  double level = f_.trace().value(p.plus_arc.start + off) + p.plus_offset;
  return curve_.wrap(p.minus_u_at(level));
}

double TransportMap::inverse(double s_minus) const {
  int i = find_minus(s_minus);
  if (i < 0) throw MapError("arclength " + std::to_string(s_minus) + " is not on any minus arc");
  const auto& p = pairs_[i];
  double off = p.minus_arc.offset_of(s_minus, curve_.length());
  if (off > p.minus_arc.length) off = 0.0;
  double level = f_.trace().value(p.minus_arc.start + off) + p.minus_offset;
  return curve_.wrap(p.plus_u_at(level));
}

TransportRay TransportMap::ray(double s_plus) const {
  int i = find_plus(s_plus);
  if (i < 0) throw MapError("arclength " + std::to_string(s_plus) + " is not on any plus arc");
  const auto& p = pairs_[i];
  double off = p.plus_arc.offset_of(s_plus, curve_.length());
  if (off > p.plus_arc.length) off = 0.0;
  double level = f_.trace().value(p.plus_arc.start + off) + p.plus_offset;
  return ray_at(static_cast<std::size_t>(i), level - p.low_level);
}

TransportRay TransportMap::ray_at(std::size_t pair, double lambda) const {
  const auto& p = pairs_.at(pair);
  lambda = std::clamp(lambda, 0.0, p.tv);
  double level = p.low_level + lambda;
  TransportRay r;
  r.pair = static_cast<int>(pair);
  r.s_plus = curve_.wrap(lambda == p.tv ? p.plus_u.back() : p.plus_u_at(level));
  r.s_minus = curve_.wrap(lambda == 0.0 ? p.minus_u.back() : p.minus_u_at(level));
  r.p_plus = curve_.point_at(r.s_plus);
  r.p_minus = curve_.point_at(r.s_minus);
  r.level = f_.trace().value(r.s_plus);
  r.length = distance(r.p_plus, r.p_minus);
  return r;
}

double TransportMap::pushforward_distance(int k, std::uint64_t seed) const {
  if (k < 1) throw ParameterDomainError("probe count must be at least 1");
  if (pairs_.empty()) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pairs_.size() - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const TraceFunction& g = f_.trace();
  double worst = 0.0;
  for (int j = 0; j < k; ++j) {
    const auto& p = pairs_[pick(rng)];
    double a = unit(rng) * p.tv, b = unit(rng) * p.tv;
    if (a > b) std::swap(a, b);
    // A = minus sub-arc between levels a and b; T^{-1}(A) on the plus side.
    double m0 = p.minus_u_at(p.low_level + b), m1 = p.minus_u_at(p.low_level + a);
    double q0 = p.plus_u_at(p.low_level + a), q1 = p.plus_u_at(p.low_level + b);
    double fminus = g.value(m0) - g.value(m1);
    double fplus = g.value(q1) - g.value(q0);
    worst = std::max(worst, std::abs(fminus - fplus));
  }
  return worst;
}

}  // namespace lgot
