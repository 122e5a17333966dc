#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lgot/geometry.hpp"
#include "lgot/plan_fields.hpp"
#include "lgot/transport_map.hpp"

namespace lgot {

// u from the ray foliation: on a ray it equals the ray's level, on a flat
// region the common level of everything bounding it.
class FoliationField {
 public:
  explicit FoliationField(const TransportMap& map, int samples_per_pair = 32);

  // Throws ParameterDomainError outside the closed domain and
  // DegenerateRegionError when flat probing disagrees.
  double evaluate(Point2 z) const;
  const TransportMap& map() const { return *map_; }

 private:
  struct PairCache {
    std::vector<double> lambda;
    std::vector<TransportRay> rays;
    Box box;
  };
  std::optional<double> on_some_ray(Point2 z) const;
  double flat_level(Point2 z) const;

  const TransportMap* map_;
  std::vector<PairCache> cache_;
  std::vector<Segment> extreme_;
  std::vector<double> extreme_level_;
  double level_tol_;
};

double evaluate_u(const TransportMap& map, Point2 z);

enum class CellMask { interior, boundary_adjacent, exterior, invalid };

struct ScalarField {
  int nx = 0, ny = 0;
  Point2 origin;
  double hx = 0.0, hy = 0.0;
  std::vector<double> u;
  std::vector<CellMask> mask;
  std::vector<std::string> diagnostics;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Point2 center(int i, int j) const { return {origin.x + (i + 0.5) * hx, origin.y + (j + 0.5) * hy}; }
  bool valid(int i, int j) const {
    CellMask m = mask[index(i, j)];
    return m == CellMask::interior || m == CellMask::boundary_adjacent;
  }
  double h() const { return std::max(hx, hy); }
};

ScalarField u_grid(const FoliationField& field, const Box& box, int nx, int ny);

struct TVResult {
  double value = 0.0;
  int nx = 0, ny = 0;
};

// Σ |∇u|·hx·hy over valid cells, central differences where both neighbours exist.
TVResult total_variation(const ScalarField& u);

// Normalized L¹ gap between R_{π/2}Du and v after a Gaussian blur of one
// cell (truncated at three), over interior cells.
double rotation_check(const ScalarField& u, const FieldRaster& v);

}  // namespace lgot
