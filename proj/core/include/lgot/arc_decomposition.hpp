#pragma once

#include <span>
#include <string>
#include <vector>

#include "lgot/boundary_trace.hpp"
#include "lgot/errors.hpp"
#include "lgot/geometry.hpp"

namespace lgot {

// One boundary arc of a trace cycle. Levels along it are g + offset, which
// lets a cell's induced datum be written without copying g.
struct TraceComponent {
  BoundaryArc arc;
  double offset = 0.0;
};

struct ChiPair {
  double corner = 0.0;
  BoundaryArc plus_arc;
  BoundaryArc minus_arc;
  double tv = 0.0;
  double plus_offset = 0.0;
  double minus_offset = 0.0;
};

struct GammaPair {
  BoundaryArc plus_arc;
  BoundaryArc minus_arc;
  double tv = 0.0;
  ConvexPolygon hull;
  double plus_offset = 0.0;
  double minus_offset = 0.0;
};

struct ArcDecomposition {
  std::vector<ChiPair> chis;
  std::vector<GammaPair> gammas;
  std::vector<BoundaryArc> flats;
  std::vector<BoundaryArc> residual;
  // The trace cycle this decomposition was computed on.
  std::vector<TraceComponent> cycle;
};

struct DecomposeOptions {
  double tv_rel_tol = 1e-9;
  int hull_samples = 64;
};

class DecompositionError : public Error {
 public:
  DecompositionError(const std::string& what, std::vector<BoundaryArc> arcs)
      : Error(what), arcs_(std::move(arcs)) {}
  const std::vector<BoundaryArc>& arcs() const { return arcs_; }

 private:
  std::vector<BoundaryArc> arcs_;
};

ArcDecomposition decompose(const SignedBoundaryMeasure& f, const BoundaryCurve& curve, DecomposeOptions opts = {});

// Decomposition of the datum induced on a cycle of boundary arcs joined by
// interior edges (on which the induced datum is constant).
ArcDecomposition decompose_cycle(const SignedBoundaryMeasure& f, const BoundaryCurve& curve,
                                 std::span<const TraceComponent> cycle, DecomposeOptions opts = {});

struct H1Violation {
  std::string clause;
  std::string detail;
  std::vector<BoundaryArc> arcs;
};

struct H1Report {
  bool pass = true;
  std::vector<H1Violation> violations;
  std::vector<std::string> notes;
};

H1Report verify_H1(const ArcDecomposition& d, const BoundaryCurve& curve, const SignedBoundaryMeasure& f,
                   double tol = 1e-9);

// Hull D_i or T_i of a pair, sampled like convex_hull_region.
ConvexPolygon pair_hull(const BoundaryCurve& curve, const BoundaryArc& plus, const BoundaryArc& minus,
                        int arc_samples = 64);

// Euclidean distance between two boundary arcs (polyline approximation of arc pieces).
double arc_distance(const BoundaryCurve& curve, const BoundaryArc& a, const BoundaryArc& b, int arc_samples = 64);

}  // namespace lgot
