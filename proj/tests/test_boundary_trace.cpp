#include <gtest/gtest.h>

#include <random>

#include "lgot/boundary_trace.hpp"
#include "lgot/errors.hpp"
#include "support.hpp"

using namespace lgot;
using namespace lgot::testing;

TEST(BoundaryTrace, DeltaSquareArcMeasures) {
  SignedBoundaryMeasure f = tangential_derivative(delta_trace(0.25));
  EXPECT_DOUBLE_EQ(measure_of_arc(f, {0.0, 0.25}), 0.25);
  // From (0.25,0) ccw through three corners to (0,0.25).
  EXPECT_NEAR(measure_of_arc(f, {0.25, 3.5}), 0.0, 1e-15);
  EXPECT_NEAR(measure_of_arc(f, {0.0, 4.0}), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(tv_of_arc(f, {0.0, 0.25}), 0.25);
  EXPECT_DOUBLE_EQ(tv_of_arc(f, {0.3, 0.4}), 0.0);
  EXPECT_DOUBLE_EQ(f.total_variation(), 2.0);
}

TEST(BoundaryTrace, ConstantTraceIsZeroMeasure) {
  SignedBoundaryMeasure f(constant_trace(4.0));
  EXPECT_EQ(f.total_variation(), 0.0);
  EXPECT_EQ(measure_of_arc(f, {0.5, 2.0}), 0.0);
  MonotoneDecomposition m = f.monotone_decomposition();
  EXPECT_TRUE(m.increasing.empty());
  EXPECT_TRUE(m.decreasing.empty());
  ASSERT_EQ(m.constant.size(), 1u);
  EXPECT_DOUBLE_EQ(m.constant[0].length, 4.0);
  EXPECT_THROW(f.inverse_cdf_sample(Sign::plus, 3), EmptyMeasureError);
}

TEST(BoundaryTrace, CircleCosineMeasures) {
  SignedBoundaryMeasure f(cosine_trace());
  EXPECT_NEAR(measure_of_arc(f, {kPi, kPi}), 2.0, 1e-12);
  EXPECT_NEAR(tv_of_arc(f, {0.0, 2 * kPi}), 4.0, 1e-12);
  MonotoneDecomposition m = f.monotone_decomposition();
  ASSERT_EQ(m.increasing.size(), 1u);
  ASSERT_EQ(m.decreasing.size(), 1u);
  EXPECT_TRUE(m.constant.empty());
  EXPECT_NEAR(m.increasing[0].start, kPi, 1e-12);
  EXPECT_NEAR(m.increasing[0].length, kPi, 1e-12);
  EXPECT_NEAR(m.decreasing[0].start, 0.0, 1e-12);
  EXPECT_NEAR(m.decreasing[0].length, kPi, 1e-12);
}

TEST(BoundaryTrace, DeltaSquareMonotoneDecomposition) {
  MonotoneDecomposition m = SignedBoundaryMeasure(delta_trace(0.25)).monotone_decomposition();
  EXPECT_EQ(m.increasing.size(), 4u);
  EXPECT_EQ(m.decreasing.size(), 4u);
  EXPECT_EQ(m.constant.size(), 4u);
}

TEST(BoundaryTrace, InverseCdfSamples) {
  SignedBoundaryMeasure f(delta_trace(0.25));
  auto atoms = f.inverse_cdf_sample(Sign::plus, 4);
  ASSERT_EQ(atoms.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(atoms[k].s, k + 0.125, 1e-14);  // middle of the k-th increasing arc
    EXPECT_DOUBLE_EQ(atoms[k].mass, 0.25);
  }
  SignedBoundaryMeasure c(cosine_trace());
  auto one = c.inverse_cdf_sample(Sign::plus, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].s, 1.5 * kPi, 1e-9);
  EXPECT_NEAR(one[0].mass, 2.0, 1e-12);
  // 1 − cos θ = 0.5 and 1.5 on the decreasing branch.
  auto two = c.inverse_cdf_sample(Sign::minus, 2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(two[0].s, kPi / 3, 1e-5);
  EXPECT_NEAR(two[1].s, 2 * kPi / 3, 1e-5);
}

TEST(BoundaryTrace, SampleMassesSumAndIncrease) {
  for (const TraceFunction& g : {delta_trace(0.3), cosine_trace(512)}) {
    SignedBoundaryMeasure f(g);
    for (Sign sg : {Sign::plus, Sign::minus}) {
      auto atoms = f.inverse_cdf_sample(sg, 137);
      double total = 0.0;
      for (std::size_t i = 0; i < atoms.size(); ++i) {
        total += atoms[i].mass;
        if (i) {
          EXPECT_GT(atoms[i].s, atoms[i - 1].s);
        }
      }
      EXPECT_NEAR(total, sg == Sign::plus ? f.positive_mass() : f.negative_mass(), 1e-14);
    }
  }
}

TEST(BoundaryTrace, AdditivityAndTvBounds) {
  std::mt19937_64 rng(3);
  for (const TraceFunction& g : {delta_trace(0.2), cosine_trace(256), make_builtin("circ_cshape").g}) {
    SignedBoundaryMeasure f(g);
    const double L = f.length();
    EXPECT_NEAR(f.measure({0.0, L}), 0.0, 1e-12);
    EXPECT_NEAR(f.total_variation(), f.positive_mass() + f.negative_mass(), 1e-12);
    EXPECT_NEAR(f.total_variation(), 2 * f.positive_mass(), 1e-12);
    std::uniform_real_distribution<double> U(0.0, L);
    for (int i = 0; i < 500; ++i) {
      double s = U(rng), l1 = U(rng) / 2, l2 = U(rng) / 2;
      BoundaryArc A{s, l1}, B{std::fmod(s + l1, L), l2}, AB{s, l1 + l2};
      EXPECT_NEAR(f.measure(AB), f.measure(A) + f.measure(B), 1e-12);
      EXPECT_GE(f.tv(A) + 1e-14, std::abs(f.measure(A)));
    }
    MonotoneDecomposition m = f.monotone_decomposition();
    double covered = 0.0;
    for (const auto* list : {&m.increasing, &m.decreasing, &m.constant})
      for (const BoundaryArc& a : *list) covered += a.length;
    EXPECT_NEAR(covered, L, 1e-12);
    for (const BoundaryArc& a : m.increasing) EXPECT_NEAR(f.tv(a), f.measure(a), 1e-12);
    for (const BoundaryArc& a : m.decreasing) EXPECT_NEAR(f.tv(a), -f.measure(a), 1e-12);
    MonotoneDecomposition again = f.monotone_decomposition();
    ASSERT_EQ(again.increasing.size(), m.increasing.size());
    for (std::size_t i = 0; i < m.increasing.size(); ++i) EXPECT_EQ(again.increasing[i].start, m.increasing[i].start);
  }
}

TEST(BoundaryTrace, IntegrateAgainstCosine) {
  SignedBoundaryMeasure f(cosine_trace());
  BoundaryCurve c = unit_circle();
  // ∫ sin θ · (−sin θ) dθ over the circle; PL interpolation error is O(h²).
  EXPECT_NEAR(f.integrate(c, [](Point2 p) { return p.y; }), -kPi, 1e-5);
  EXPECT_NEAR(f.integrate(c, [](Point2) { return 1.0; }), 0.0, 1e-12);
}

TEST(BoundaryTrace, RejectsBadBreakpoints) {
  EXPECT_THROW(TraceFunction({{0.5, 0.0}, {0.2, 1.0}}, 4.0), TraceError);
  EXPECT_THROW(TraceFunction({}, 4.0), TraceError);
}
