#include <gtest/gtest.h>

#include "lgot/arc_decomposition.hpp"
#include "support.hpp"

using namespace lgot;
using namespace lgot::testing;

TEST(ArcDecomposition, DeltaSquareHasFourCornerChis) {
  Bundle b = delta_bundle(0.25);
  ASSERT_EQ(b.d.chis.size(), 4u);
  EXPECT_TRUE(b.d.gammas.empty());
  EXPECT_EQ(b.d.flats.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(b.d.chis[k].corner, k, 1e-12);
    EXPECT_NEAR(b.d.chis[k].tv, 0.25, 1e-12);
  }
  EXPECT_TRUE(verify_H1(b.d, b.curve, b.f).pass);
}

TEST(ArcDecomposition, CircleCosineIsOneChi) {
  Bundle b = cosine_bundle();
  ASSERT_EQ(b.d.chis.size(), 1u);
  EXPECT_TRUE(b.d.gammas.empty());
  const ChiPair& c = b.d.chis[0];
  EXPECT_NEAR(std::remainder(c.corner, 2 * kPi), 0.0, 1e-12);
  EXPECT_NEAR(c.tv, 2.0, 1e-12);
  EXPECT_NEAR(c.plus_arc.length, kPi, 1e-12);
  EXPECT_NEAR(c.minus_arc.length, kPi, 1e-12);
}

TEST(ArcDecomposition, ConstantTraceIsAllFlat) {
  SignedBoundaryMeasure f(constant_trace(4.0));
  ArcDecomposition d = decompose(f, unit_square());
  EXPECT_TRUE(d.chis.empty());
  EXPECT_TRUE(d.gammas.empty());
  double flat = 0.0;
  for (const BoundaryArc& a : d.flats) flat += a.length;
  EXPECT_DOUBLE_EQ(flat, 4.0);
}

TEST(ArcDecomposition, CrossedPairingFailsH1) {
  Bundle b = delta_bundle(0.25);
  ArcDecomposition bad;
  bad.flats = b.d.flats;
  bad.cycle = b.d.cycle;
  auto gamma = [&](BoundaryArc p, BoundaryArc m) {
    return GammaPair{p, m, 0.25, pair_hull(b.curve, p, m), 0.0, 0.0};
  };
  // χ₁⁺ with χ₂⁻ and χ₂⁺ with χ₁⁻.
  bad.gammas.push_back(gamma(b.d.chis[0].plus_arc, b.d.chis[1].minus_arc));
  bad.gammas.push_back(gamma(b.d.chis[1].plus_arc, b.d.chis[0].minus_arc));
  bad.chis = {b.d.chis[2], b.d.chis[3]};
  H1Report r = verify_H1(bad, b.curve, b.f);
  EXPECT_FALSE(r.pass);
  EXPECT_FALSE(r.violations.empty());
}

TEST(ArcDecomposition, TvMismatchFailsH1) {
  Bundle b = delta_bundle(0.25);
  ArcDecomposition d = b.d;
  d.chis[0].plus_arc.length -= 1e-3;
  H1Report r = verify_H1(d, b.curve, b.f, 1e-9);
  EXPECT_FALSE(r.pass);
}

TEST(ArcDecomposition, PairTvSumsToPositiveMass) {
  for (const Bundle& b : {delta_bundle(0.1), delta_bundle(0.4), cosine_bundle(256)}) {
    double tv = 0.0;
    for (const auto& c : b.d.chis) tv += c.tv;
    for (const auto& g : b.d.gammas) tv += g.tv;
    EXPECT_NEAR(tv, b.f.positive_mass(), 1e-12);
    // Every increasing arc is covered by plus sides.
    double plus_len = 0.0, inc_len = 0.0;
    for (const auto& c : b.d.chis) plus_len += b.f.tv(c.plus_arc);
    for (const auto& g : b.d.gammas) plus_len += b.f.tv(g.plus_arc);
    for (const auto& a : b.f.monotone_decomposition().increasing) inc_len += b.f.tv(a);
    EXPECT_NEAR(plus_len, inc_len, 1e-12);
  }
}

TEST(ArcDecomposition, Deterministic) {
  Bundle a = delta_bundle(0.3), b = delta_bundle(0.3);
  ASSERT_EQ(a.d.chis.size(), b.d.chis.size());
  for (std::size_t i = 0; i < a.d.chis.size(); ++i) {
    EXPECT_EQ(a.d.chis[i].plus_arc.start, b.d.chis[i].plus_arc.start);
    EXPECT_EQ(a.d.chis[i].minus_arc.length, b.d.chis[i].minus_arc.length);
  }
}

TEST(ArcDecomposition, StrictlyConvexTwoArcsGiveOnePair) {
  for (double phase : {0.3, 1.7, 4.0}) {
    std::vector<Breakpoint> bps;
    for (int k = 0; k < 512; ++k) {
      double s = 2 * kPi * k / 512;
      bps.push_back({s, 2.0 * std::cos(s - phase) + 0.5});
    }
    Bundle b = bundle(unit_circle(), TraceFunction(std::move(bps), 2 * kPi));
    EXPECT_EQ(b.d.chis.size() + b.d.gammas.size(), 1u) << phase;
  }
}

TEST(ArcDecomposition, BottomEdgePairsAlongTheBoundary) {
  Scenario s = make_builtin("bottom_edge");
  SignedBoundaryMeasure f(s.g);
  ArcDecomposition d = decompose(f, s.curve);
  ASSERT_EQ(d.chis.size(), 1u);
  EXPECT_NEAR(d.chis[0].corner, 0.5, 1e-12);
  EXPECT_NEAR(d.chis[0].tv, 0.5, 1e-12);
}
