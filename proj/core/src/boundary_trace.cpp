#include "lgot/boundary_trace.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "lgot/errors.hpp"

namespace lgot {

TraceFunction::TraceFunction(std::vector<Breakpoint> bp, double length) : bp_(std::move(bp)), length_(length) {
  if (!(length_ > 0.0) || !std::isfinite(length_)) throw TraceError("trace length must be positive");
  if (bp_.empty()) throw TraceError("trace needs at least one breakpoint");
  for (const auto& b : bp_)
    if (!std::isfinite(b.s) || !std::isfinite(b.value)) throw TraceError("non-finite breakpoint");
  for (std::size_t i = 1; i < bp_.size(); ++i) {
    if (bp_[i].s < bp_[i - 1].s) throw TraceError("breakpoints must be sorted by arclength");
    if (bp_[i].s == bp_[i - 1].s) {
      if (bp_[i].value != bp_[i - 1].value) throw TraceError("trace is discontinuous at s=" + std::to_string(bp_[i].s));
    }
  }
  bp_.erase(std::unique(bp_.begin(), bp_.end(), [](const Breakpoint& a, const Breakpoint& b) { return a.s == b.s; }),
            bp_.end());
  const double tol = 1e-12 * length_;
  if (bp_.front().s < -tol || bp_.back().s > length_ + tol) throw TraceError("breakpoint outside [0, L]");
  if (bp_.size() > 1 && std::abs(bp_.back().s - length_) <= tol) {
    double scale = std::max({1.0, std::abs(bp_.back().value), std::abs(bp_.front().value)});
    if (std::abs(bp_.front().s) <= tol) {
      if (std::abs(bp_.back().value - bp_.front().value) > 1e-12 * scale)
        throw TraceError("discontinuous wraparound: g(0) differs from g(L-)");
      bp_.pop_back();
    } else {
      // Rotate the closing breakpoint to s = 0.
      Breakpoint last = bp_.back();
      bp_.pop_back();
      bp_.insert(bp_.begin(), {0.0, last.value});
    }
  }
  if (bp_.front().s > tol) {
    // Interpolate across the wrap to pin a breakpoint at s = 0.
    const auto& a = bp_.back();
    const auto& b = bp_.front();
    double span = (length_ - a.s) + b.s;
    double v = a.value + (b.value - a.value) * (length_ - a.s) / span;
    bp_.insert(bp_.begin(), {0.0, v});
  }
  bp_.front().s = 0.0;
}

double TraceFunction::slope(std::size_t k) const {
  double ds = segment_end(k) - segment_start(k);
  return (segment_value_end(k) - segment_value_start(k)) / ds;
}

std::size_t TraceFunction::segment_of(double s) const {
  auto it = std::upper_bound(bp_.begin(), bp_.end(), s, [](double x, const Breakpoint& b) { return x < b.s; });
  return it == bp_.begin() ? 0 : static_cast<std::size_t>(it - bp_.begin()) - 1;
}

double TraceFunction::value(double s) const {
  s = std::fmod(s, length_);
  if (s < 0) s += length_;
  std::size_t k = segment_of(s);
  double s0 = segment_start(k), s1 = segment_end(k);
  double t = (s - s0) / (s1 - s0);
  return segment_value_start(k) + t * (segment_value_end(k) - segment_value_start(k));
}

double TraceFunction::solve_monotone(double u0, double u1, double level) const {
  double v0 = value(u0), v1 = value(u1);
  if (v0 == v1) return u0;
  bool inc = v1 > v0;
  if (inc ? level <= v0 : level >= v0) return u0;
  if (inc ? level >= v1 : level <= v1) return u1;
  double u = u0;
  for (std::size_t guard = 0; u < u1 && guard < 4 * bp_.size() + 8; ++guard) {
    double laps = std::floor(u / length_);
    double s = u - laps * length_;
    if (s >= length_) {
      s = 0.0;
      laps += 1;
    }
    std::size_t k = segment_of(s);
    double b = std::min(laps * length_ + segment_end(k), u1);
    if (b <= u) b = std::nextafter(u, u1);
    double va = value(u), vb = b == u1 ? v1 : segment_value_end(k);
    bool hit = inc ? (level >= va && level <= vb) : (level <= va && level >= vb);
    if (hit) {
      if (va == vb) return u;
      return u + (level - va) / (vb - va) * (b - u);
    }
    u = b;
  }
  return u1;
}

double TraceFunction::lipschitz() const {
  double m = 0.0;
  for (std::size_t k = 0; k < segment_count(); ++k) m = std::max(m, std::abs(slope(k)));
  return m;
}

double TraceFunction::total_variation() const {
  double t = 0.0;
  for (std::size_t k = 0; k < segment_count(); ++k) t += std::abs(segment_value_end(k) - segment_value_start(k));
  return t;
}

double TraceFunction::min_value() const {
  double m = bp_[0].value;
  for (const auto& b : bp_) m = std::min(m, b.value);
  return m;
}

double TraceFunction::max_value() const {
  double m = bp_[0].value;
  for (const auto& b : bp_) m = std::max(m, b.value);
  return m;
}

SignedBoundaryMeasure::SignedBoundaryMeasure(TraceFunction g) : g_(std::move(g)) {
  const std::size_t K = g_.segment_count();
  tv_.assign(K + 1, 0.0);
  pos_.assign(K + 1, 0.0);
  neg_.assign(K + 1, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    double d = g_.segment_value_end(k) - g_.segment_value_start(k);
    tv_[k + 1] = tv_[k] + std::abs(d);
    pos_[k + 1] = pos_[k] + std::max(d, 0.0);
    neg_[k + 1] = neg_[k] + std::max(-d, 0.0);
  }
}

double SignedBoundaryMeasure::cumulative(const std::vector<double>& table, double u) const {
  const double L = g_.length();
  double laps = std::floor(u / L);
  double s = u - laps * L;
  if (s >= L) {
    s = 0.0;
    laps += 1;
  }
  std::size_t k = g_.segment_of(s);
  double s0 = g_.segment_start(k), s1 = g_.segment_end(k);
  double t = (s - s0) / (s1 - s0);
  return laps * table.back() + table[k] + t * (table[k + 1] - table[k]);
}

double SignedBoundaryMeasure::cumulative_tv(double u) const { return cumulative(tv_, u); }
double SignedBoundaryMeasure::cumulative_positive(double u) const { return cumulative(pos_, u); }
double SignedBoundaryMeasure::cumulative_negative(double u) const { return cumulative(neg_, u); }

double SignedBoundaryMeasure::measure(const BoundaryArc& arc) const {
  return g_.value(arc.start + arc.length) - g_.value(arc.start);
}

double SignedBoundaryMeasure::tv(const BoundaryArc& arc) const {
  return cumulative_tv(arc.start + arc.length) - cumulative_tv(arc.start);
}

double SignedBoundaryMeasure::positive(const BoundaryArc& arc) const {
  return cumulative_positive(arc.start + arc.length) - cumulative_positive(arc.start);
}

double SignedBoundaryMeasure::negative(const BoundaryArc& arc) const {
  return cumulative_negative(arc.start + arc.length) - cumulative_negative(arc.start);
}

MonotoneDecomposition SignedBoundaryMeasure::monotone_decomposition() const {
  MonotoneDecomposition out;
  const std::size_t K = g_.segment_count();
  auto sgn = [&](std::size_t k) {
    double d = g_.segment_value_end(k) - g_.segment_value_start(k);
    return d > 0 ? 1 : (d < 0 ? -1 : 0);
  };
  std::size_t first = K;
  for (std::size_t k = 0; k < K; ++k)
    if (sgn(k) != sgn((k + K - 1) % K)) {
      first = k;
      break;
    }
  auto bucket = [&](int s) -> std::vector<BoundaryArc>& {
    return s > 0 ? out.increasing : (s < 0 ? out.decreasing : out.constant);
  };
  const double L = g_.length();
  if (first == K) {
    bucket(sgn(0)).push_back({0.0, L});
    return out;
  }
  std::size_t k = first;
  for (std::size_t done = 0; done < K;) {
    int s = sgn(k);
    double start = g_.segment_start(k), len = 0.0;
    while (done < K && sgn(k) == s) {
      len += g_.segment_end(k) - g_.segment_start(k);
      k = (k + 1) % K;
      ++done;
    }
    bucket(s).push_back({start, len});
  }
  return out;
}

std::vector<Atom> SignedBoundaryMeasure::inverse_cdf_sample(Sign sign, int n) const {
  if (n < 1) throw ParameterDomainError("atom count must be at least 1");
  const auto& table = sign == Sign::plus ? pos_ : neg_;
  double total = table.back();
  if (!(total > 0.0)) throw EmptyMeasureError("f has no mass of the requested sign");
  std::vector<Atom> atoms;
  atoms.reserve(n);
  double mass = total / n;
  std::size_t k = 0;
  for (int j = 0; j < n; ++j) {
    double q = (j + 0.5) * mass;
    while (k + 1 < table.size() - 1 && table[k + 1] <= q) ++k;
    // Skip segments without mass of this sign.
    while (table[k + 1] - table[k] <= 0.0) ++k;
    double frac = (q - table[k]) / (table[k + 1] - table[k]);
    double s = g_.segment_start(k) + frac * (g_.segment_end(k) - g_.segment_start(k));
    atoms.push_back({s, mass});
  }
  return atoms;
}

double SignedBoundaryMeasure::integrate(const BoundaryCurve& curve, const std::function<double(Point2)>& phi) const {
  static constexpr std::array<double, 8> x = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                              -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                              0.7966664774136267,  0.9602898564975363};
  static constexpr std::array<double, 8> w = {0.1012285362903763, 0.2223810344533745, 0.3137066833741843,
                                              0.3626837833783620, 0.3626837833783620, 0.3137066833741843,
                                              0.2223810344533745, 0.1012285362903763};
  // Sub-segments split at both trace breakpoints and piece junctions.
  std::vector<double> cuts;
  for (const auto& b : g_.breakpoints()) cuts.push_back(b.s);
  for (std::size_t i = 0; i < curve.piece_count(); ++i) cuts.push_back(curve.piece_start(i));
  cuts.push_back(g_.length());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    if (b <= a) continue;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double gslope = g_.slope(g_.segment_of(mid));
    if (gslope == 0.0) continue;
    double acc = 0.0;
    for (int q = 0; q < 8; ++q) acc += w[q] * phi(curve.point_at(mid + half * x[q]));
    total += acc * half * gslope;
  }
  return total;
}

SignedBoundaryMeasure tangential_derivative(const TraceFunction& g) { return SignedBoundaryMeasure(g); }
double measure_of_arc(const SignedBoundaryMeasure& f, const BoundaryArc& arc) { return f.measure(arc); }
double tv_of_arc(const SignedBoundaryMeasure& f, const BoundaryArc& arc) { return f.tv(arc); }

}  // namespace lgot
