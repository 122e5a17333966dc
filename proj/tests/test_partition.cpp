#include <gtest/gtest.h>

#include "lgot/admissibility.hpp"
#include "lgot/errors.hpp"
#include "lgot/partition.hpp"
#include "support.hpp"

using namespace lgot;
using namespace lgot::testing;

namespace {

std::vector<const Cell*> family_cells(const Partition& p, int fam) {
  std::vector<const Cell*> out;
  for (const Cell& c : p.cells)
    if (c.family == fam) out.push_back(&c);
  return out;
}

RefineVerdict l2_verdict(const Partition& p) {
  PartitionReport rep = validate(p);
  if (!rep.pass) return {false, "invalid"};
  TransportMap m = partition_map(p, rep);
  L2Options o;
  AdmissibilityReport r = check_L2_A3(p, m, o);
  return {r.verdict == Verdict::satisfied, to_string(r.verdict)};
}

}  // namespace

TEST(Partition, ValidateBuiltins) {
  PartBundle rc = part_bundle("rect_cshape", {{"a", 0.25}, {"b", 0.5}, {"n", 4}});
  EXPECT_TRUE(rc.rep.pass);
  EXPECT_EQ(rc.p.cells.size(), 3u + 8u);
  PartBundle cc = part_bundle("circ_cshape", {{"R", 2.0}, {"alpha", 1.0}, {"n", 6}});
  EXPECT_TRUE(cc.rep.pass);
  EXPECT_EQ(cc.p.cells.size(), 1u + 12u);
  EXPECT_LT(rc.rep.area_rel_error, 1e-6);
  EXPECT_LT(cc.rep.area_rel_error, 1e-6);
}

TEST(Partition, SingleConvexCell) {
  Scenario s = make_builtin("delta_square");
  SignedBoundaryMeasure f(s.g);
  PartitionSpec spec;
  spec.cells.push_back({"Omega", CellKind::C, {s.curve.pieces().begin(), s.curve.pieces().end()}});
  Partition p = materialize(spec, s.curve, f);
  PartitionReport rep = validate(p, f, s.curve);
  EXPECT_TRUE(rep.pass);
  TransportMap m = partition_map(p, rep);
  EXPECT_EQ(m.pairs().size(), 4u);
  Partition same = auto_refine_until(p, [](const Partition&) { return RefineVerdict{true, ""}; }, 64);
  EXPECT_EQ(same.cells.size(), p.cells.size());
  EXPECT_EQ(same.provenance, Provenance::user_supplied);
}

TEST(Partition, RefineRectFamilyToLevelSlices) {
  const double a = 0.25, b = 0.5;
  PartBundle base = part_bundle("rect_cshape", {{"a", a}, {"b", b}, {"n", 1}});
  Partition same = refine(base.p, 1, 1);
  EXPECT_EQ(same.cells.size(), base.p.cells.size());
  Partition p = refine(base.p, 1, 4);
  auto cells = family_cells(p, 1);
  ASSERT_EQ(cells.size(), 4u);
  // Slice i lies between levels s_i and s_{i+1}: (a, s b) to (1, b + (1−b) s).
  // Cells may come in any order, so match each expected slice to some cell.
  for (int i = 0; i < 4; ++i) {
    double s0 = i / 4.0, s1 = (i + 1) / 4.0;
    std::vector<Point2> want{{a, s0 * b}, {1, b + (1 - b) * s0}, {1, b + (1 - b) * s1}, {a, s1 * b}};
    const Cell* match = nullptr;
    for (const Cell* c : cells) {
      bool all = true;
      for (Point2 w : want) {
        bool found = false;
        for (const BoundaryPiece& pc : c->region.pieces()) found = found || distance(pc.from(), w) < 1e-12;
        all = all && found;
      }
      if (all && c->region.piece_count() == 4) match = c;
    }
    ASSERT_NE(match, nullptr) << "no cell for slice " << i;
    double expected_area = 0.5 * std::abs(cross(want[1] - want[0], want[2] - want[0])) +
                           0.5 * std::abs(cross(want[2] - want[0], want[3] - want[0]));
    EXPECT_NEAR(match->region.signed_area(), expected_area, 1e-12);
  }
  EXPECT_TRUE(validate(p).pass);
}

TEST(Partition, RefineCircularFamilyToSectors) {
  const double R = 2.0, al = 1.0;
  PartBundle base = part_bundle("circ_cshape", {{"R", R}, {"alpha", al}, {"n", 1}});
  Partition p = refine(base.p, 0, 6);
  auto cells = family_cells(p, 0);
  ASSERT_EQ(cells.size(), 6u);
  for (const Cell* c : cells) {
    EXPECT_EQ(c->kind, CellKind::E);
    EXPECT_NEAR(c->region.signed_area(), 0.5 * (R * R - 1) * al / 6, 1e-12);
  }
  EXPECT_TRUE(validate(p).pass);
}

TEST(Partition, SliceFluxAndTv) {
  for (const char* name : {"rect_cshape", "circ_cshape"}) {
    PartBundle b = part_bundle(name);
    const double tvg = b.f.total_variation();
    for (std::size_t fam = 0; fam < b.p.spec.families.size(); ++fam) {
      double family_tv = b.f.tv(b.p.spec.families[fam].plus_arc);
      auto cells = family_cells(b.p, static_cast<int>(fam));
      for (const Cell* c : cells) {
        double net = 0.0, pos = 0.0;
        for (const TraceComponent& t : c->trace) {
          net += b.f.measure(t.arc);
          pos += b.f.positive(t.arc);
        }
        EXPECT_NEAR(net, 0.0, 1e-12 * tvg) << name << " " << c->name;
        EXPECT_NEAR(pos, family_tv / cells.size(), 1e-12 * tvg) << name << " " << c->name;
      }
    }
  }
}

TEST(Partition, AutoRefine) {
  PartBundle ok = part_bundle("rect_cshape", {{"a", 0.25}, {"b", 0.5}});
  Partition got = auto_refine_until(ok.p, l2_verdict, 64);
  for (const FamilySpec& f : got.spec.families) EXPECT_LE(f.n, 64);

  PartBundle bad = part_bundle("rect_cshape", {{"a", 0.04}, {"b", 0.5}});
  EXPECT_THROW(auto_refine_until(bad.p, l2_verdict, 16), RefinementExhausted);
}

TEST(Partition, OverlapIsRejected) {
  Scenario s = make_builtin("rect_cshape");
  SignedBoundaryMeasure f(s.g);
  PartitionSpec spec = *s.partition;
  BoundaryCurve extra = polygon({{-0.5, 0.6}, {0.5, 0.6}, {0.5, 0.9}, {-0.5, 0.9}});
  spec.cells.push_back({"extra", CellKind::X, {extra.pieces().begin(), extra.pieces().end()}});
  EXPECT_THROW(validate(materialize(spec, s.curve, f), f, s.curve), PartitionError);
}

TEST(Partition, RefineRejectsUnknownFamily) {
  PartBundle b = part_bundle("rect_cshape");
  EXPECT_THROW(refine(b.p, 7, 2), PartitionError);
}
