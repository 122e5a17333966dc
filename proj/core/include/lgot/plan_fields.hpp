#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lgot/boundary_trace.hpp"
#include "lgot/geometry.hpp"
#include "lgot/transport_map.hpp"

namespace lgot {

struct PlanAtom {
  Point2 source;
  Point2 target;
  double s_plus = 0.0;
  double s_minus = 0.0;
  double mass = 0.0;
  double level = 0.0;
};

// γ = (Id, T)#f⁺ on equal-mass atoms.
struct TransportPlan {
  std::vector<PlanAtom> atoms;
  double cost = 0.0;
  const TransportMap* source_map = nullptr;

  double mass() const;
};

TransportPlan make_plan(const TransportMap& map, int n);

// Uniform grid over the curve's bounding box.
struct FieldRaster {
  int nx = 0, ny = 0;
  Point2 origin;
  double hx = 0.0, hy = 0.0;
  std::vector<double> sigma;
  std::vector<Point2> v;

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
  Point2 center(int i, int j) const { return {origin.x + (i + 0.5) * hx, origin.y + (j + 0.5) * hy}; }
  double h() const { return std::max(hx, hy); }
  double sigma_total() const;
};

FieldRaster make_raster(const Box& box, int nx, int ny);

// σ gets mass·length of every clipped piece, v gets mass·length·direction.
FieldRaster rasterize(const TransportPlan& plan, const Box& box, int nx, int ny);
void deposit_segment(FieldRaster& r, Point2 a, Point2 b, double mass);

// Σ mass·ℋ¹([source,target] ∩ ∂Ω).
double boundary_mass(const TransportPlan& plan, const BoundaryCurve& curve);

struct TestFunction {
  std::string name;
  std::function<double(Point2)> phi;
  std::function<Point2(Point2)> grad;
};

// Monomials of degree ≤ 3 and two Gaussians, scaled to the box.
std::vector<TestFunction> standard_battery(const Box& box);

// |Σ ∇φ(center)·v_cell + ∫ φ df| per test function.
std::vector<double> divergence_residual(const FieldRaster& raster, const SignedBoundaryMeasure& f,
                                        const BoundaryCurve& curve, const std::vector<TestFunction>& tests);

}  // namespace lgot
