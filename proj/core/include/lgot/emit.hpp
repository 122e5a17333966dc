#pragma once

#include <string>
#include <vector>

namespace lgot {

struct PipelineResult;

// 12 significant digits.
std::string fmt_num(double v);
// Shortest text that parses back to the same double.
std::string fmt_exact(double v);

// Files written: decomposition.csv, rays.csv, conditions.csv and, when the
// stages ran, plan.csv, raster.csv, u.csv, oracle.csv. Returns their paths.
std::vector<std::string> emit_csv(const PipelineResult& r, const std::string& dir);

// One scene.svg with layers boundary, partition, sigma, decomposition, rays, u_contours.
std::string emit_svg(const PipelineResult& r, const std::string& dir);

}  // namespace lgot
