#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lgot/arc_decomposition.hpp"
#include "lgot/boundary_trace.hpp"
#include "lgot/errors.hpp"
#include "lgot/geometry.hpp"
#include "lgot/transport_map.hpp"

namespace lgot {

enum class CellKind { C, E, X };

const char* to_string(CellKind k);

struct CellSpec {
  std::string name;
  CellKind kind = CellKind::X;
  std::vector<BoundaryPiece> pieces;
};

// A sliceable family: matched plus/minus arcs whose region is cut into n
// cells along equal level steps.
struct FamilySpec {
  std::string name;
  CellKind kind = CellKind::C;
  BoundaryArc plus_arc;
  BoundaryArc minus_arc;
  int n = 1;
};

struct PartitionSpec {
  std::vector<CellSpec> cells;
  std::vector<FamilySpec> families;
};

enum class Provenance { user_supplied, refined };

struct Cell {
  std::string name;
  CellKind kind = CellKind::X;
  BoundaryCurve region;
  // ∂cell ∩ ∂Ω in the cell's own order, with level offsets of the induced datum.
  std::vector<TraceComponent> trace;
  std::optional<EPair> e_pair;
  int family = -1;
  int slice = -1;
};

struct Partition {
  PartitionSpec spec;
  std::vector<Cell> cells;
  Provenance provenance = Provenance::user_supplied;
  BoundaryCurve curve;
  SignedBoundaryMeasure f;
};

Partition materialize(const PartitionSpec& spec, const BoundaryCurve& curve, const SignedBoundaryMeasure& f);

struct CellReport {
  std::size_t cell = 0;
  bool ok = true;
  std::vector<std::string> issues;
  std::optional<ArcDecomposition> decomposition;
};

struct PartitionReport {
  bool pass = true;
  double area_rel_error = 0.0;
  std::vector<std::string> issues;
  std::vector<CellReport> cells;
};

// Geometry failures (overlap, coverage) throw PartitionError; failures of
// the induced data are report entries.
PartitionReport validate(const Partition& p, const SignedBoundaryMeasure& f, const BoundaryCurve& curve);
PartitionReport validate(const Partition& p);

Partition refine(const Partition& p, std::size_t family, int n);

// Map assembled from every C cell's decomposition plus every E pair.
TransportMap partition_map(const Partition& p, const PartitionReport& rep);

struct RefineVerdict {
  bool pass = false;
  std::string summary;
};

class RefinementExhausted : public Error {
 public:
  RefinementExhausted(const std::string& what, Partition last, std::string summary)
      : Error(what), last_(std::move(last)), summary_(std::move(summary)) {}
  const Partition& last() const { return last_; }
  const std::string& summary() const { return summary_; }

 private:
  Partition last_;
  std::string summary_;
};

// Doubles every family's n until `check` passes; throws RefinementExhausted
// once n would exceed n_max.
Partition auto_refine_until(const Partition& p, const std::function<RefineVerdict(const Partition&)>& check,
                            int n_max);

// Clip the curve to an unwrapped arclength range.
std::vector<BoundaryPiece> sub_pieces(const BoundaryCurve& curve, double u0, double u1);

}  // namespace lgot
