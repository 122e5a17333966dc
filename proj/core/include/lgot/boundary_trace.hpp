#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lgot/geometry.hpp"

namespace lgot {

struct Breakpoint {
  double s = 0.0;
  double value = 0.0;
};

// Continuous g, piecewise linear in arclength. Segment k spans
// [s_k, s_{k+1}] with s_K = L closing back onto the first breakpoint.
class TraceFunction {
 public:
  TraceFunction(std::vector<Breakpoint> breakpoints, double length);

  double length() const { return length_; }
  std::span<const Breakpoint> breakpoints() const { return bp_; }
  std::size_t segment_count() const { return bp_.size(); }
  double segment_start(std::size_t k) const { return bp_[k].s; }
  double segment_end(std::size_t k) const { return k + 1 < bp_.size() ? bp_[k + 1].s : length_; }
  double segment_value_start(std::size_t k) const { return bp_[k].value; }
  double segment_value_end(std::size_t k) const { return bp_[(k + 1) % bp_.size()].value; }
  double slope(std::size_t k) const;
  std::size_t segment_of(double s) const;

  // Any real s; reduced modulo L.
  double value(double s) const;
  double operator()(double s) const { return value(s); }
  // Unwrapped u in [u0, u1] with value(u) = level, assuming g monotone there.
  // Levels outside the range clamp to the nearer end.
  double solve_monotone(double u0, double u1, double level) const;
  double lipschitz() const;
  double total_variation() const;
  double min_value() const;
  double max_value() const;

 private:
  std::vector<Breakpoint> bp_;
  double length_;
};

enum class Sign { plus, minus };

struct Atom {
  double s = 0.0;
  double mass = 0.0;
};

struct MonotoneDecomposition {
  std::vector<BoundaryArc> increasing;
  std::vector<BoundaryArc> decreasing;
  std::vector<BoundaryArc> constant;
};

// f = ∂τg as a signed measure on the boundary.
class SignedBoundaryMeasure {
 public:
  explicit SignedBoundaryMeasure(TraceFunction g);

  const TraceFunction& trace() const { return g_; }
  double length() const { return g_.length(); }

  double measure(const BoundaryArc& arc) const;
  double tv(const BoundaryArc& arc) const;
  double positive(const BoundaryArc& arc) const;
  double negative(const BoundaryArc& arc) const;
  double positive_mass() const { return pos_.back(); }
  double negative_mass() const { return neg_.back(); }
  double total_variation() const { return tv_.back(); }

  // Cumulative masses from s = 0 over unwrapped u (u may exceed L or be negative).
  double cumulative_tv(double u) const;
  double cumulative_positive(double u) const;
  double cumulative_negative(double u) const;

  MonotoneDecomposition monotone_decomposition() const;
  std::vector<Atom> inverse_cdf_sample(Sign sign, int n) const;
  // ∫ φ df = ∫ φ(α(s)) g'(s) ds, Gauss–Legendre on every linear sub-segment.
  double integrate(const BoundaryCurve& curve, const std::function<double(Point2)>& phi) const;

 private:
  double cumulative(const std::vector<double>& table, double u) const;

  TraceFunction g_;
  std::vector<double> tv_, pos_, neg_;  // cumulative at breakpoints, size K+1
};

SignedBoundaryMeasure tangential_derivative(const TraceFunction& g);
double measure_of_arc(const SignedBoundaryMeasure& f, const BoundaryArc& arc);
double tv_of_arc(const SignedBoundaryMeasure& f, const BoundaryArc& arc);

}  // namespace lgot
