#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lgot/geometry.hpp"
#include "lgot/partition.hpp"
#include "lgot/plan_fields.hpp"

namespace lgot {

struct OracleAtom {
  Point2 p;
  double s = 0.0;  // arclength on the boundary
};

// Equal-mass assignment with Euclidean costs. `assignment[i]` is the target
// matched to source i; u, v are dual potentials with u_i + v_j <= c_ij.
struct DiscretePlan {
  std::vector<OracleAtom> sources;
  std::vector<OracleAtom> targets;
  std::vector<int> assignment;
  double mass = 0.0;  // per atom
  double cost = 0.0;
  std::vector<double> u, v;

  double c(std::size_t i, std::size_t j) const { return distance(sources[i].p, targets[j].p); }
};

DiscretePlan solve_assignment(std::vector<OracleAtom> sources, std::vector<OracleAtom> targets, double mass);

// Atoms of f⁺ and f⁻ at TV-quantile midpoints.
DiscretePlan solve_measure(const BoundaryCurve& curve, const SignedBoundaryMeasure& f, int n);

// A fixed matching, no duals.
DiscretePlan plan_from_assignment(std::vector<OracleAtom> sources, std::vector<OracleAtom> targets,
                                  std::vector<int> assignment, double mass);
DiscretePlan plan_from_map(const TransportPlan& plan);

double duality_gap(const DiscretePlan& plan);
// max_i |u_i − min_j (c_ij − v_j)|.
double c_transform_defect(const DiscretePlan& plan);

struct CycleCheck {
  double margin = std::numeric_limits<double>::infinity();
  std::vector<int> cycle;  // source indices
  bool exhaustive = true;
  std::uint64_t seed = 0;
};

// min over cycles of (shifted sum − matched sum); negative means the plan
// can be improved by rotating targets along the cycle.
CycleCheck cyclical_violation(const DiscretePlan& plan, int m_max, std::uint64_t seed = 1);

// M[i][j]: mass sent from the trace of cell i to the trace of cell j.
std::vector<std::vector<double>> cross_cell_mass(const DiscretePlan& plan, const Partition& p);
double off_diagonal(const std::vector<std::vector<double>>& m);

struct SupportAudit {
  double interior_fraction = 0.0;
  std::vector<int> boundary_touching;  // source indices
};

SupportAudit ray_support_audit(const DiscretePlan& plan, const BoundaryCurve& curve);

}  // namespace lgot
