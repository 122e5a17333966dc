#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lgot/arc_decomposition.hpp"
#include "lgot/boundary_trace.hpp"
#include "lgot/geometry.hpp"

namespace lgot {

enum class PairKind { chi, gamma, e };

const char* to_string(PairKind k);

// E_i^± arcs of a negative-curvature cell.
struct EPair {
  BoundaryArc plus_arc;
  BoundaryArc minus_arc;
  double plus_offset = 0.0;
  double minus_offset = 0.0;
};

// Level profiles of one matched pair. Levels are g + offset. On the plus
// arc they rise with u, on the minus arc they fall, both spanning
// [low_level, low_level + tv].
struct PairTable {
  PairKind kind = PairKind::gamma;
  int cell = -1;
  BoundaryArc plus_arc;
  BoundaryArc minus_arc;
  double plus_offset = 0.0;
  double minus_offset = 0.0;
  double tv = 0.0;
  double low_level = 0.0;
  std::optional<double> corner;
  std::vector<double> plus_u, plus_level;
  std::vector<double> minus_u, minus_level;

  // Unwrapped arclength on each side at a given level.
  double plus_u_at(double level) const;
  double minus_u_at(double level) const;
};

struct TransportRay {
  double s_plus = 0.0;
  double s_minus = 0.0;
  Point2 p_plus;
  Point2 p_minus;
  double level = 0.0;
  double length = 0.0;
  int pair = -1;
};

class TransportMap {
 public:
  TransportMap(BoundaryCurve curve, SignedBoundaryMeasure f);

  static TransportMap build(const BoundaryCurve& curve, const SignedBoundaryMeasure& f, const ArcDecomposition& d,
                            std::span<const EPair> e_pairs = {});

  void add(const ArcDecomposition& d, int cell = -1);
  void add_e_pair(const EPair& e, int cell = -1);

  std::span<const PairTable> pairs() const { return pairs_; }
  const BoundaryCurve& curve() const { return curve_; }
  const SignedBoundaryMeasure& measure() const { return f_; }

  // Pair whose closed plus (minus) arc holds s, or -1. Shared endpoints go
  // to the pair giving the smaller image.
  int find_plus(double s) const;
  int find_minus(double s) const;

  double eval(double s_plus) const;
  double inverse(double s_minus) const;
  TransportRay ray(double s_plus) const;
  // Ray of a pair at level parameter lambda ∈ [0, tv] measured from the low end.
  TransportRay ray_at(std::size_t pair, double lambda) const;

  double pushforward_distance(int k, std::uint64_t seed = 1) const;

 private:
  void add_pair(PairTable t);

  BoundaryCurve curve_;
  SignedBoundaryMeasure f_;
  std::vector<PairTable> pairs_;
};

}  // namespace lgot
