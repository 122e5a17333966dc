#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lgot/admissibility.hpp"
#include "lgot/arc_decomposition.hpp"
#include "lgot/oracle.hpp"
#include "lgot/partition.hpp"
#include "lgot/plan_fields.hpp"
#include "lgot/reconstruction.hpp"
#include "lgot/scenario.hpp"
#include "lgot/transport_map.hpp"

namespace lgot {

struct RunOptions {
  bool check_only = false;
  bool oracle = false;
  std::optional<int> grid, atoms, oracle_atoms;
  std::optional<std::uint64_t> seed;
  std::string out_dir;  // empty: no artifacts
  bool emit_csv = false;
  bool emit_svg = false;
};

struct StageStatus {
  std::string stage;
  bool ok = true;
  std::string diagnostic;
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int input_error = 1;
inline constexpr int violated = 2;
}  // namespace exit_code

struct RunReport {
  std::string scenario;
  std::vector<StageStatus> stages;
  std::vector<AdmissibilityReport> conditions;
  std::string outcome;
  int exit_code = exit_code::ok;
  bool conditions_hold = false;
  bool non_unique = false;
  std::string refinement;

  std::optional<double> map_cost, oracle_cost, oracle_map_cost, tv_u;
  std::optional<double> duality_gap, c_transform_defect, cycle_margin;
  std::optional<double> boundary_mass, pushforward, rotation, divergence_max;
  std::optional<double> cross_cell_offdiag, oracle_interior_fraction, map_interior_fraction;
  std::optional<double> max_principle_excess, trace_attainment_ratio;
  std::vector<std::pair<std::string, double>> divergence;
  int u_invalid_cells = 0;
  std::vector<std::string> artifacts;

  const AdmissibilityReport* condition(ConditionId id) const;
};

struct PipelineResult {
  RunReport report;
  std::optional<Scenario> scenario;
  std::unique_ptr<TransportMap> map;
  std::optional<ArcDecomposition> decomposition;
  std::optional<Partition> partition;
  std::optional<PartitionReport> partition_report;
  std::optional<TransportPlan> plan;
  std::optional<FieldRaster> raster;
  std::optional<ScalarField> u;
  std::optional<DiscretePlan> oracle;
};

// Square-celled grid box covering the curve, n cells along the longer side.
Box grid_box(const BoundaryCurve& curve, int n, int& nx, int& ny);

// Library errors from the scenario itself propagate; condition failures do not.
PipelineResult run_pipeline(const Scenario& s, const RunOptions& opts);

// One condition on a scenario, as used by threshold scans. Cycle conditions
// on partitions use matched rays of the user partition.
AdmissibilityReport evaluate_condition(const Scenario& s, ConditionId id);

std::string report_json(const RunReport& r);
std::string report_text(const RunReport& r);

}  // namespace lgot
