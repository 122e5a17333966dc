#include <gtest/gtest.h>

#include <random>

#include "lgot/errors.hpp"
#include "lgot/transport_map.hpp"
#include "support.hpp"

using namespace lgot;
using namespace lgot::testing;

namespace {

// Bisection oracle on g directly: the point of [lo,hi] where the monotone
// trace reaches `level`.
double bisect_level(const TraceFunction& g, double lo, double hi, double level) {
  bool rising = g(hi) > g(lo);
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if ((g(mid) < level) == rising) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(TransportMap, BuildCounts) {
  EXPECT_EQ(delta_bundle().map.pairs().size(), 4u);
  EXPECT_EQ(cosine_bundle().map.pairs().size(), 1u);
  Bundle flat = bundle(unit_square(), constant_trace(4.0));
  EXPECT_TRUE(flat.map.pairs().empty());
  EXPECT_EQ(flat.map.pushforward_distance(100), 0.0);
}

TEST(TransportMap, DeltaSquareEvalAndRay) {
  Bundle b = delta_bundle(0.25);
  double sm = b.map.eval(0.1);
  double want = bisect_level(b.f.trace(), 3.75, 4.0, 0.1);
  EXPECT_NEAR(sm, want, 1e-12);
  Point2 p = b.curve.point_at_wrapped(sm);
  EXPECT_NEAR(p.x, 0.0, 1e-12);
  EXPECT_NEAR(p.y, 0.1, 1e-12);
  TransportRay r = b.map.ray(0.1);
  EXPECT_NEAR(r.level, 0.1, 1e-12);
  EXPECT_NEAR(r.length, 0.1 * std::sqrt(2.0), 1e-12);
  EXPECT_THROW(b.map.eval(0.5), MapError);  // flat
}

TEST(TransportMap, CircleCosineEvalAndRay) {
  Bundle b = cosine_bundle();
  EXPECT_NEAR(b.map.eval(1.5 * kPi), 0.5 * kPi, 1e-9);
  TransportRay r = b.map.ray(1.25 * kPi);
  const double h = std::sqrt(0.5);
  EXPECT_NEAR(r.p_plus.x, -h, 1e-12);
  EXPECT_NEAR(r.p_plus.y, -h, 1e-12);
  EXPECT_NEAR(r.p_minus.x, -h, 1e-6);
  EXPECT_NEAR(r.p_minus.y, h, 1e-6);
  EXPECT_NEAR(r.level, -h, 1e-6);
  EXPECT_NEAR(r.length, std::sqrt(2.0), 1e-6);
}

TEST(TransportMap, CornerLimit) {
  Bundle b = delta_bundle(0.25);
  for (std::size_t i = 0; i < b.map.pairs().size(); ++i) {
    TransportRay r = b.map.ray_at(i, 0.0);
    EXPECT_NEAR(r.length, 0.0, 1e-12);
    EXPECT_NEAR(r.level, 0.0, 1e-12);
  }
  EXPECT_NEAR(b.map.eval(1e-9), 4.0 - 1e-9, 1e-12);
}

TEST(TransportMap, PushforwardIsExact) {
  EXPECT_LE(delta_bundle().map.pushforward_distance(100), 1e-9);
  EXPECT_LE(cosine_bundle().map.pushforward_distance(100), 1e-9);
}

TEST(TransportMap, LevelMatchingZeroFluxAndInverse) {
  std::mt19937_64 rng(5);
  for (const Bundle& b : {delta_bundle(0.25), delta_bundle(0.4), cosine_bundle(512)}) {
    const double L = b.curve.length(), tvg = b.f.total_variation();
    for (std::size_t p = 0; p < b.map.pairs().size(); ++p) {
      const PairTable& t = b.map.pairs()[p];
      std::uniform_real_distribution<double> U(0.0, t.tv);
      double prev_plus = -1e300, prev_minus = 1e300;
      std::vector<double> lams(200);
      for (double& l : lams) l = U(rng);
      std::sort(lams.begin(), lams.end());
      for (double lam : lams) {
        TransportRay r = b.map.ray_at(p, lam);
        EXPECT_NEAR(b.f.trace()(r.s_plus), b.f.trace()(r.s_minus), 1e-9 * tvg);
        // Both arcs joining the endpoints carry zero net flux.
        double fwd = b.curve.wrap(r.s_minus - r.s_plus);
        EXPECT_NEAR(b.f.measure({r.s_plus, fwd}), 0.0, 1e-9 * tvg);
        EXPECT_NEAR(b.f.measure({r.s_minus, L - fwd}), 0.0, 1e-9 * tvg);
        EXPECT_NEAR(b.curve.wrap(b.map.inverse(b.map.eval(r.s_plus)) - r.s_plus + L / 2) - L / 2, 0.0, 1e-10 * L);
        // Orientation reversing: plus moves forward, minus moves back.
        double up = t.plus_arc.offset_of(r.s_plus, L), um = t.minus_arc.offset_of(r.s_minus, L);
        EXPECT_GE(up, prev_plus - 1e-12);
        EXPECT_LE(um, prev_minus + 1e-12);
        prev_plus = up;
        prev_minus = um;
      }
    }
  }
}

TEST(TransportMap, RaysDoNotCross) {
  std::mt19937_64 rng(9);
  for (const Bundle& b : {delta_bundle(0.25), cosine_bundle(512)}) {
    std::vector<TransportRay> rays;
    for (std::size_t p = 0; p < b.map.pairs().size(); ++p) {
      std::uniform_real_distribution<double> U(0.0, b.map.pairs()[p].tv);
      for (int i = 0; i < 60; ++i) {
        TransportRay r = b.map.ray_at(p, U(rng));
        if (r.length > 1e-9) rays.push_back(r);
      }
    }
    std::uniform_int_distribution<std::size_t> pick(0, rays.size() - 1);
    int crossings = 0;
    for (int i = 0; i < 1000; ++i) {
      const TransportRay &r1 = rays[pick(rng)], &r2 = rays[pick(rng)];
      if (&r1 == &r2) continue;
      if (segments_cross_interior({r1.p_plus, r1.p_minus}, {r2.p_plus, r2.p_minus})) ++crossings;
    }
    EXPECT_EQ(crossings, 0);
  }
}
