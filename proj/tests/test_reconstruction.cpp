#include <gtest/gtest.h>

#include <random>

#include "lgot/errors.hpp"
#include "lgot/pipeline.hpp"
#include "lgot/reconstruction.hpp"
#include "support.hpp"

using namespace lgot;
using namespace lgot::testing;

namespace {

ScalarField grid_of(const Bundle& b, const FoliationField& u, int n) {
  int nx = 0, ny = 0;
  Box box = grid_box(b.curve, n, nx, ny);
  return u_grid(u, box, nx, ny);
}

}  // namespace

TEST(Reconstruction, PointValues) {
  Bundle ci = cosine_bundle();
  FoliationField uc(ci.map);
  EXPECT_NEAR(uc.evaluate({0.3, 0.4}), 0.3, 1e-6);
  Bundle sq = delta_bundle(0.25);
  FoliationField us(sq.map);
  EXPECT_NEAR(us.evaluate({0.05, 0.05}), 0.10, 1e-12);
  EXPECT_NEAR(us.evaluate({0.5, 0.5}), 0.25, 1e-12);
  EXPECT_NEAR(us.evaluate({0.5, 0.0}), 0.25, 1e-12);  // boundary point returns g
  EXPECT_THROW(us.evaluate({1.5, 0.5}), ParameterDomainError);
}

TEST(Reconstruction, LevelConsistencyOnRays) {
  std::mt19937_64 rng(13);
  for (const Bundle& b : {delta_bundle(0.25), cosine_bundle(512)}) {
    FoliationField u(b.map);
    const double tvg = b.f.total_variation();
    for (int i = 0; i < 1000; ++i) {
      std::size_t p = std::uniform_int_distribution<std::size_t>(0, b.map.pairs().size() - 1)(rng);
      double lam = std::uniform_real_distribution<double>(0.01, 0.99)(rng) * b.map.pairs()[p].tv;
      TransportRay r = b.map.ray_at(p, lam);
      Point2 z = lerp(r.p_plus, r.p_minus, std::uniform_real_distribution<double>(0.05, 0.95)(rng));
      EXPECT_NEAR(u.evaluate(z), r.level, 1e-9 * tvg);
    }
  }
}

TEST(Reconstruction, CircleGridMatchesX) {
  Bundle b = cosine_bundle();
  FoliationField u(b.map);
  ScalarField s = grid_of(b, u, 128);
  double worst = 0.0;
  int valid = 0;
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      if (s.mask[s.index(i, j)] != CellMask::interior) continue;
      ++valid;
      worst = std::max(worst, std::abs(s.u[s.index(i, j)] - s.center(i, j).x));
    }
  EXPECT_GT(valid, 10000);
  EXPECT_LE(worst, 2 * s.h());
  for (CellMask m : s.mask) EXPECT_NE(m, CellMask::invalid);
}

TEST(Reconstruction, ConstantTraceGivesConstantField) {
  Bundle b = bundle(unit_square(), constant_trace(4.0, 0.3));
  FoliationField u(b.map);
  ScalarField s = grid_of(b, u, 32);
  for (std::size_t k = 0; k < s.u.size(); ++k)
    if (s.mask[k] == CellMask::interior || s.mask[k] == CellMask::boundary_adjacent) {
      EXPECT_DOUBLE_EQ(s.u[k], 0.3);
    }
  EXPECT_EQ(total_variation(s).value, 0.0);
  FieldRaster zero = rasterize(TransportPlan{}, b.curve.bbox(), s.nx, s.ny);
  EXPECT_EQ(rotation_check(s, zero), 0.0);
}

TEST(Reconstruction, DeltaSquareGrid) {
  const double d = 0.25;
  Bundle b = delta_bundle(d);
  FoliationField u(b.map);
  ScalarField s = grid_of(b, u, 256);
  const double lip = b.f.trace().lipschitz();
  for (int j = 0; j < s.ny; ++j)
    for (int i = 0; i < s.nx; ++i) {
      std::size_t k = s.index(i, j);
      ASSERT_NE(s.mask[k], CellMask::invalid);
      if (s.mask[k] == CellMask::exterior) continue;
      EXPECT_GE(s.u[k], 0.0);
      EXPECT_LE(s.u[k], d);
      if (s.mask[k] == CellMask::boundary_adjacent) {
        double g = b.f.trace()(b.curve.closest_param(s.center(i, j)));
        EXPECT_LE(std::abs(s.u[k] - g), 2 * s.h() * lip);
      }
    }
  double cost = 2 * std::sqrt(2.0) * d * d;
  EXPECT_NEAR(total_variation(s).value, cost, 5e-2 * cost);
  FieldRaster v = rasterize(make_plan(b.map, 800), grid_box(b.curve, 256, s.nx, s.ny), s.nx, s.ny);
  EXPECT_LE(rotation_check(s, v), 0.15);
}

TEST(Reconstruction, CircleTvAndRotation) {
  Bundle b = cosine_bundle();
  FoliationField u(b.map);
  ScalarField s = grid_of(b, u, 256);
  EXPECT_NEAR(total_variation(s).value, kPi, 3e-2);
  FieldRaster v = rasterize(make_plan(b.map, 1600), grid_box(b.curve, 256, s.nx, s.ny), s.nx, s.ny);
  EXPECT_LE(rotation_check(s, v), 0.1);
}

TEST(Reconstruction, ContinuityAcrossCells) {
  for (const Bundle& b : {delta_bundle(0.25), cosine_bundle()}) {
    FoliationField u(b.map);
    ScalarField s = grid_of(b, u, 128);
    const double bound = 3 * b.f.trace().lipschitz() * s.h();
    double worst = 0.0;
    for (int j = 0; j + 1 < s.ny; ++j)
      for (int i = 0; i + 1 < s.nx; ++i) {
        if (s.mask[s.index(i, j)] != CellMask::interior) continue;
        for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}})
          if (s.mask[s.index(i + di, j + dj)] == CellMask::interior)
            worst = std::max(worst, std::abs(s.u[s.index(i, j)] - s.u[s.index(i + di, j + dj)]));
      }
    EXPECT_LE(worst, bound);
  }
}

TEST(Reconstruction, TvMovesTowardCostUnderRefinement) {
  for (const char* name : {"delta_square", "disk_cosine", "rect_cshape", "circ_cshape"}) {
    Scenario sc = make_builtin(name);
    RunOptions coarse, fine;
    coarse.grid = 64;
    fine.grid = 128;
    RunReport a = run_pipeline(sc, coarse).report, b = run_pipeline(sc, fine).report;
    ASSERT_TRUE(a.tv_u && b.tv_u && a.map_cost) << name;
    double ea = std::abs(*a.tv_u - *a.map_cost), eb = std::abs(*b.tv_u - *b.map_cost);
    EXPECT_LE(eb * 1.5, ea) << name << " " << ea << " -> " << eb;
  }
}
