#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgot/boundary_trace.hpp"
#include "lgot/geometry.hpp"
#include "lgot/partition.hpp"

namespace lgot {

struct SolverParams {
  int atoms = 800;          // plan atoms
  int grid = 256;           // raster and u grid, cells along the longer side
  int k = 6;                // cycle samples per pair
  int h2_samples = 64;      // segment samples per pair
  int oracle_atoms = 200;   // per sign
  int refine_max = 64;      // family slice cap for auto refinement
  std::uint64_t seed = 1;
  double strict_margin = 0.0;
};

struct Scenario {
  std::string name;
  BoundaryCurve curve;
  TraceFunction g;
  std::optional<PartitionSpec> partition;
  SolverParams params;
  // Built-in parameters after defaults were applied.
  std::map<std::string, double> values;
};

Scenario parse_scenario(const std::string& json_text);
Scenario load_scenario(const std::string& path);
std::string scenario_to_json(const Scenario& s);

std::vector<std::string> builtin_names();
// Unknown names or parameters raise ScenarioError.
Scenario make_builtin(const std::string& name, const std::map<std::string, double>& params = {});

// "builtin:NAME" or a file path.
Scenario resolve_scenario(const std::string& ref, const std::map<std::string, double>& params = {});

}  // namespace lgot
