#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "lgot/arc_decomposition.hpp"
#include "lgot/boundary_trace.hpp"
#include "lgot/geometry.hpp"
#include "lgot/partition.hpp"
#include "lgot/scenario.hpp"
#include "lgot/transport_map.hpp"

namespace lgot::testing {

inline constexpr double kPi = std::numbers::pi;

inline BoundaryCurve polygon(const std::vector<Point2>& vs) {
  std::vector<BoundaryPiece> pieces;
  for (std::size_t i = 0; i < vs.size(); ++i) pieces.push_back(BoundaryPiece::line(vs[i], vs[(i + 1) % vs.size()]));
  return BoundaryCurve(std::move(pieces));
}

inline BoundaryCurve unit_square() { return polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline BoundaryCurve unit_circle() {
  return BoundaryCurve({BoundaryPiece::arc({1, 0}, {0, 0}, kPi), BoundaryPiece::arc({-1, 0}, {0, 0}, kPi)});
}

// min{t, δ, 1−t} on each side of the unit square, t the side coordinate.
inline TraceFunction delta_trace(double d) {
  std::vector<Breakpoint> bps;
  for (int k = 0; k < 4; ++k) {
    bps.push_back({double(k), 0.0});
    bps.push_back({k + d, d});
    bps.push_back({k + 1 - d, d});
  }
  return TraceFunction(std::move(bps), 4.0);
}

// cos θ on the unit circle, sampled at n breakpoints.
inline TraceFunction cosine_trace(int n = 2048) {
  std::vector<Breakpoint> bps;
  for (int k = 0; k < n; ++k) {
    double s = 2 * kPi * k / n;
    bps.push_back({s, std::cos(s)});
  }
  return TraceFunction(std::move(bps), 2 * kPi);
}

inline TraceFunction constant_trace(double L, double c = 0.3) { return TraceFunction({{0.0, c}}, L); }

struct Bundle {
  BoundaryCurve curve;
  SignedBoundaryMeasure f;
  ArcDecomposition d;
  TransportMap map;
};

inline Bundle bundle(BoundaryCurve curve, TraceFunction g) {
  SignedBoundaryMeasure f(std::move(g));
  ArcDecomposition d = decompose(f, curve);
  TransportMap m = TransportMap::build(curve, f, d);
  return Bundle{std::move(curve), std::move(f), std::move(d), std::move(m)};
}

inline Bundle delta_bundle(double d = 0.25) { return bundle(unit_square(), delta_trace(d)); }
inline Bundle cosine_bundle(int n = 2048) { return bundle(unit_circle(), cosine_trace(n)); }

// Arclength on the unit circle of the point at angle θ.
inline double circle_s(double theta) {
  double s = std::fmod(theta, 2 * kPi);
  return s < 0 ? s + 2 * kPi : s;
}

// A built-in with a partition, materialized and validated.
struct PartBundle {
  Scenario s;
  SignedBoundaryMeasure f;
  Partition p;
  PartitionReport rep;
  TransportMap map;
};

inline PartBundle part_bundle(const std::string& name, const std::map<std::string, double>& params = {}) {
  Scenario s = make_builtin(name, params);
  SignedBoundaryMeasure f(s.g);
  Partition p = materialize(*s.partition, s.curve, f);
  PartitionReport rep = validate(p, f, s.curve);
  TransportMap map = partition_map(p, rep);
  return PartBundle{std::move(s), std::move(f), std::move(p), std::move(rep), std::move(map)};
}

}  // namespace lgot::testing
