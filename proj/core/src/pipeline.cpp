#include "lgot/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "lgot/emit.hpp"
#include "lgot/errors.hpp"

namespace lgot {

const AdmissibilityReport* RunReport::condition(ConditionId id) const {
  for (const auto& c : conditions)
    if (c.id == id) return &c;
  return nullptr;
}

Box grid_box(const BoundaryCurve& curve, int n, int& nx, int& ny) {
  if (n < 2) throw ParameterDomainError("grid must have at least 2 cells per side");
  Box b = curve.bbox();
  double w = b.hi.x - b.lo.x, hgt = b.hi.y - b.lo.y;
  double h = std::max(w, hgt) / n;
  nx = std::max(2, static_cast<int>(std::ceil(w / h - 1e-9)));
  ny = std::max(2, static_cast<int>(std::ceil(hgt / h - 1e-9)));
  return {b.lo, {b.lo.x + nx * h, b.lo.y + ny * h}};
}

namespace {

bool has_e_cells(const Partition& p) {
  return std::any_of(p.cells.begin(), p.cells.end(), [](const Cell& c) { return c.kind == CellKind::E; });
}

std::string failing_ids(const std::vector<const AdmissibilityReport*>& req) {
  std::string s;
  for (auto* r : req)
    if (r->verdict != Verdict::satisfied) s += (s.empty() ? "" : ", ") + std::string(to_string(r->id));
  return s;
}

void convex_branch(const Scenario& s, const SignedBoundaryMeasure& f, PipelineResult& out) {
  RunReport& rep = out.report;
  const SolverParams& sp = s.params;
  try {
    out.decomposition = decompose(f, s.curve);
  } catch (const DecompositionError& e) {
    AdmissibilityReport h1;
    h1.id = ConditionId::H1;
    h1.verdict = Verdict::violated;
    CycleWitness w;
    w.note = e.what();
    for (const auto& a : e.arcs()) w.points.emplace_back(a.start, a.start + a.length);
    h1.witnesses.push_back(std::move(w));
    rep.conditions.push_back(std::move(h1));
    rep.stages.push_back({"decompose", false, e.what()});
    return;
  }
  rep.stages.push_back({"decompose", true, ""});
  rep.conditions.push_back(report_from_h1(verify_H1(*out.decomposition, s.curve, f)));
  out.map = std::make_unique<TransportMap>(TransportMap::build(s.curve, f, *out.decomposition));
  rep.stages.push_back({"map", true, ""});
  rep.conditions.push_back(check_H2(*out.map, sp.h2_samples));
  auto h3 = check_H3(*out.map, sp.k);
  rep.conditions.push_back(h3);
  rep.conditions.push_back(check_H3prime(h3, sp.strict_margin));
  rep.conditions.push_back(check_S(s.curve, f, *out.map));
}

void partition_branch(const Scenario& s, const SignedBoundaryMeasure& f, PipelineResult& out) {
  RunReport& rep = out.report;
  const SolverParams& sp = s.params;
  Partition p0 = materialize(*s.partition, s.curve, f);
  PartitionReport rep0 = validate(p0);
  const bool e_cells = has_e_cells(p0);
  L2Options strict;
  strict.variant = e_cells ? L2Variant::A3 : L2Variant::L2;
  strict.mode = RepMode::arbitrary;
  strict.k = sp.k;
  strict.seed = sp.seed;
  auto check = [&](const Partition& q) {
    PartitionReport r = validate(q);
    if (!r.pass) return RefineVerdict{false, "partition validation failed"};
    TransportMap m = partition_map(q, r);
    if (has_e_cells(q) && check_A2(q, s.curve, sp.k).verdict != Verdict::satisfied)
      return RefineVerdict{false, "A2 not satisfied"};
    auto l = check_L2_A3(m, strict);
    return RefineVerdict{l.verdict == Verdict::satisfied,
                         std::string(to_string(l.id)) + " " + to_string(l.verdict)};
  };
  Partition p = p0;
  try {
    p = auto_refine_until(p0, check, sp.refine_max);
    int n = 0;
    for (const auto& fam : p.spec.families) n = std::max(n, fam.n);
    rep.refinement = p.provenance == Provenance::refined ? "refined to n = " + std::to_string(n)
                                                          : "user partition accepted as given";
  } catch (const RefinementExhausted& e) {
    rep.refinement = std::string("refinement exhausted (") + e.summary() + "); reporting on the user partition";
    p = p0;
  }
  PartitionReport prep = p.provenance == Provenance::refined ? validate(p) : rep0;
  out.map = std::make_unique<TransportMap>(partition_map(p, prep));
  rep.stages.push_back({"partition", prep.pass, prep.pass ? rep.refinement : "induced data fail validation"});
  rep.conditions.push_back(check_L1(p, prep, *out.map, sp.h2_samples, sp.k));
  if (e_cells) {
    rep.conditions.push_back(check_A1(p, prep));
    rep.conditions.push_back(check_A2(p, s.curve, sp.k));
  }
  rep.conditions.push_back(check_L2_A3(*out.map, strict));
  // Equality variant on rays of the user partition.
  TransportMap m0 = partition_map(p0, rep0);
  L2Options tilde = strict;
  tilde.variant = L2Variant::A3tilde;
  tilde.mode = RepMode::matched;
  rep.conditions.push_back(check_L2_A3(m0, tilde));
  out.partition = std::move(p);
  out.partition_report = std::move(prep);
}

void decide(const Scenario& s, PipelineResult& out) {
  RunReport& rep = out.report;
  std::vector<const AdmissibilityReport*> req;
  auto need = [&](ConditionId id) {
    if (auto* r = rep.condition(id)) req.push_back(r);
  };
  bool part = s.partition.has_value();
  if (!part) {
    for (auto id : {ConditionId::H1, ConditionId::H2, ConditionId::H3, ConditionId::S}) need(id);
  } else {
    for (auto id : {ConditionId::L1, ConditionId::A1, ConditionId::A2, ConditionId::L2, ConditionId::A3}) need(id);
  }
  bool all = !req.empty() &&
             std::all_of(req.begin(), req.end(), [](auto* r) { return r->verdict == Verdict::satisfied; });
  if (all) {
    rep.conditions_hold = true;
    rep.outcome = "conditions hold: unique solution constructed from the transport rays";
    return;
  }
  if (part) {
    // Strict cycle inequality fails but its equality variant holds.
    bool others = true;
    for (auto* r : req)
      if (r->id != ConditionId::L2 && r->id != ConditionId::A3) others = others && r->verdict == Verdict::satisfied;
    auto* t = rep.condition(ConditionId::A3tilde);
    if (others && t && t->verdict == Verdict::satisfied) {
      rep.conditions_hold = true;
      rep.non_unique = true;
      rep.outcome = "cycle inequality holds only with equality (A3~): optimal plans are not unique; "
                    "the solution is built from the interior-ray plan";
      return;
    }
  }
  rep.exit_code = exit_code::violated;
  auto* h2 = rep.condition(ConditionId::H2);
  if (h2 && h2->verdict == Verdict::violated)
    rep.outcome = "no trace-sense solution: transport rays run along the boundary (H2 violated)";
  else
    rep.outcome = "conditions not satisfied: " + failing_ids(req);
}

void fields(const Scenario& s, const SignedBoundaryMeasure& f, const RunOptions& o, PipelineResult& out) {
  RunReport& rep = out.report;
  const int grid = o.grid.value_or(s.params.grid);
  int nx = 0, ny = 0;
  Box box = grid_box(s.curve, grid, nx, ny);
  out.raster = rasterize(*out.plan, box, nx, ny);
  auto battery = standard_battery(s.curve.bbox());
  auto res = divergence_residual(*out.raster, f, s.curve, battery);
  double worst = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    rep.divergence.emplace_back(battery[i].name, res[i]);
    worst = std::max(worst, res[i]);
  }
  rep.divergence_max = worst;
  rep.stages.push_back({"fields", true, ""});

  FoliationField field(*out.map);
  out.u = u_grid(field, box, nx, ny);
  const ScalarField& u = *out.u;
  rep.tv_u = total_variation(u).value;
  rep.rotation = rotation_check(u, *out.raster);
  const TraceFunction& g = s.g;
  double excess = 0.0, ratio = 0.0;
  const double lip = g.lipschitz();
  for (int j = 0; j < u.ny; ++j)
    for (int i = 0; i < u.nx; ++i) {
      std::size_t c = u.index(i, j);
      if (u.mask[c] == CellMask::invalid) ++rep.u_invalid_cells;
      if (!u.valid(i, j)) continue;
      excess = std::max({excess, u.u[c] - g.max_value(), g.min_value() - u.u[c]});
      if (u.mask[c] == CellMask::boundary_adjacent && lip > 0) {
        Point2 z = u.center(i, j);
        double gap = std::abs(u.u[c] - g(s.curve.closest_param(z)));
        ratio = std::max(ratio, gap / (2 * u.h() * lip));
      }
    }
  rep.max_principle_excess = excess;
  rep.trace_attainment_ratio = ratio;
  bool ok = rep.u_invalid_cells == 0;
  rep.stages.push_back({"reconstruction", ok,
                        ok ? "" : std::to_string(rep.u_invalid_cells) + " cells could not be assigned a level"});
}

void oracle(const Scenario& s, const SignedBoundaryMeasure& f, const RunOptions& o, PipelineResult& out) {
  RunReport& rep = out.report;
  const int n = o.oracle_atoms.value_or(s.params.oracle_atoms);
  out.oracle = solve_measure(s.curve, f, n);
  const DiscretePlan& dp = *out.oracle;
  rep.oracle_cost = dp.cost;
  if (dp.sources.empty()) {
    rep.stages.push_back({"oracle", true, "empty measure"});
    return;
  }
  rep.duality_gap = duality_gap(dp);
  rep.c_transform_defect = c_transform_defect(dp);
  rep.cycle_margin = cyclical_violation(dp, 3, o.seed.value_or(s.params.seed)).margin;
  rep.oracle_interior_fraction = ray_support_audit(dp, s.curve).interior_fraction;
  std::string diag;
  bool ok = true;
  if (out.map) {
    TransportPlan mp = make_plan(*out.map, n);
    rep.oracle_map_cost = mp.cost;
    rep.map_interior_fraction = ray_support_audit(plan_from_map(mp), s.curve).interior_fraction;
    double rel = (mp.cost - dp.cost) / std::max(dp.cost, 1e-300);
    diag = "map plan exceeds the oracle by " + std::to_string(rel) + " (relative)";
    // A passing scenario whose map is beaten by a wide margin is inconsistent.
    if (rep.conditions_hold && rel > 1e-2) ok = false;
  }
  if (out.partition) {
    try {
      rep.cross_cell_offdiag = off_diagonal(cross_cell_mass(dp, *out.partition));
    } catch (const OracleInputError& e) {
      diag += std::string("; ") + e.what();
    }
  }
  rep.stages.push_back({"oracle", ok, diag});
  if (!ok && rep.exit_code == exit_code::ok) rep.exit_code = exit_code::violated;
}

}  // namespace

PipelineResult run_pipeline(const Scenario& s, const RunOptions& o) {
  PipelineResult out;
  out.scenario = s;
  RunReport& rep = out.report;
  rep.scenario = s.name;
  SignedBoundaryMeasure f(s.g);
  rep.stages.push_back({"ingest", true, ""});
  if (!s.partition && convexity_report(s.curve).cls == ConvexityClass::non_convex)
    throw GeometryError("non-convex domain without a partition: supply convex C cells and E cells");
  if (s.partition)
    partition_branch(s, f, out);
  else
    convex_branch(s, f, out);
  rep.stages.push_back({"conditions", true, ""});
  decide(s, out);
  rep.stages.back().ok = rep.conditions_hold;
  if (!rep.conditions_hold) rep.stages.back().diagnostic = rep.outcome;

  if (out.map && !o.check_only) {
    const int atoms = o.atoms.value_or(s.params.atoms);
    out.plan = make_plan(*out.map, atoms);
    rep.map_cost = out.plan->cost;
    rep.boundary_mass = boundary_mass(*out.plan, s.curve);
    rep.pushforward = out.map->pushforward_distance(1000, o.seed.value_or(s.params.seed));
    rep.stages.push_back({"plan", true, ""});
    if (rep.conditions_hold) fields(s, f, o, out);
  }
  if (o.oracle && !o.check_only) oracle(s, f, o, out);
  for (const auto& st : rep.stages)
    if (!st.ok && rep.exit_code == exit_code::ok && st.stage != "conditions") rep.exit_code = exit_code::violated;

  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    if (o.emit_csv) {
      auto files = emit_csv(out, o.out_dir);
      rep.artifacts.insert(rep.artifacts.end(), files.begin(), files.end());
    }
    if (o.emit_svg) rep.artifacts.push_back(emit_svg(out, o.out_dir));
    std::string path = (std::filesystem::path(o.out_dir) / "report.json").string();
    rep.artifacts.push_back(path);
    std::ofstream(path) << report_json(rep);
  }
  return out;
}

AdmissibilityReport evaluate_condition(const Scenario& s, ConditionId id) {
  SignedBoundaryMeasure f(s.g);
  const SolverParams& sp = s.params;
  if (!s.partition) {
    ArcDecomposition d;
    try {
      d = decompose(f, s.curve);
    } catch (const DecompositionError& e) {
      if (id != ConditionId::H1) throw ScanError(std::string("H1 fails, so ") + to_string(id) + " is undefined: " + e.what());
      AdmissibilityReport r;
      r.id = id;
      r.verdict = Verdict::violated;
      return r;
    }
    if (id == ConditionId::H1) return report_from_h1(verify_H1(d, s.curve, f));
    TransportMap m = TransportMap::build(s.curve, f, d);
    switch (id) {
      case ConditionId::H2: return check_H2(m, sp.h2_samples);
      case ConditionId::H3: return check_H3(m, sp.k);
      case ConditionId::H3prime: return check_H3prime(check_H3(m, sp.k), sp.strict_margin);
      case ConditionId::S: return check_S(s.curve, f, m);
      default: throw ScanError(std::string(to_string(id)) + " needs a partitioned scenario");
    }
  }
  Partition p = materialize(*s.partition, s.curve, f);
  PartitionReport rep = validate(p);
  TransportMap m = partition_map(p, rep);
  L2Options o;
  o.mode = RepMode::matched;
  o.k = sp.k;
  o.seed = sp.seed;
  switch (id) {
    case ConditionId::L1: return check_L1(p, rep, m, sp.h2_samples, sp.k);
    case ConditionId::A1: return check_A1(p, rep);
    case ConditionId::A2: return check_A2(p, s.curve, sp.k);
    case ConditionId::L2: o.variant = L2Variant::L2; return check_L2_A3(m, o);
    case ConditionId::A3: o.variant = L2Variant::A3; return check_L2_A3(m, o);
    case ConditionId::A3tilde: o.variant = L2Variant::A3tilde; return check_L2_A3(m, o);
    default: throw ScanError(std::string(to_string(id)) + " applies to convex scenarios without a partition");
  }
}

std::string report_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["scenario"] = r.scenario;
  j["exit_code"] = r.exit_code;
  j["outcome"] = r.outcome;
  if (!r.refinement.empty()) j["refinement"] = r.refinement;
  ordered_json stages = ordered_json::array();
  for (const auto& s : r.stages) stages.push_back({{"stage", s.stage}, {"ok", s.ok}, {"diagnostic", s.diagnostic}});
  j["stages"] = stages;
  ordered_json conds = ordered_json::array();
  for (const auto& c : r.conditions) {
    ordered_json w = ordered_json::array();
    for (const auto& x : c.witnesses) {
      ordered_json pts = ordered_json::array();
      for (auto [a, b] : x.points) pts.push_back({a, b});
      w.push_back({{"note", x.note}, {"points", pts}, {"lhs", x.lhs}, {"rhs", x.rhs}});
    }
    conds.push_back({{"id", to_string(c.id)},
                     {"verdict", to_string(c.verdict)},
                     {"margin", std::isfinite(c.margin) ? ordered_json(c.margin) : ordered_json(nullptr)},
                     {"witnesses", w},
                     {"notes", c.notes}});
  }
  j["conditions"] = conds;
  auto put = [&](const char* k, const std::optional<double>& v) {
    if (v) j[k] = fmt_num(*v);
  };
  put("map_cost", r.map_cost);
  put("oracle_cost", r.oracle_cost);
  put("oracle_map_cost", r.oracle_map_cost);
  put("tv_u", r.tv_u);
  put("duality_gap", r.duality_gap);
  put("c_transform_defect", r.c_transform_defect);
  put("cycle_margin", r.cycle_margin);
  put("boundary_mass", r.boundary_mass);
  put("pushforward_distance", r.pushforward);
  put("rotation", r.rotation);
  put("divergence_max", r.divergence_max);
  put("cross_cell_offdiag", r.cross_cell_offdiag);
  put("oracle_interior_fraction", r.oracle_interior_fraction);
  put("map_interior_fraction", r.map_interior_fraction);
  put("max_principle_excess", r.max_principle_excess);
  put("trace_attainment_ratio", r.trace_attainment_ratio);
  if (!r.divergence.empty()) {
    ordered_json d;
    for (const auto& [k, v] : r.divergence) d[k] = fmt_num(v);
    j["divergence"] = d;
  }
  j["u_invalid_cells"] = r.u_invalid_cells;
  j["artifacts"] = r.artifacts;
  return j.dump(2) + "\n";
}

std::string report_text(const RunReport& r) {
  std::string s = "scenario " + r.scenario + "\n";
  for (const auto& c : r.conditions) {
    s += "  " + std::string(to_string(c.id)) + ": " + to_string(c.verdict);
    if (std::isfinite(c.margin)) s += " (margin " + fmt_num(c.margin) + ")";
    s += "\n";
    const std::size_t shown = std::min<std::size_t>(c.witnesses.size(), 4);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& w = c.witnesses[i];
      s += "    witness: " + w.note;
      if (w.lhs != 0.0 || w.rhs != 0.0) s += " [" + fmt_num(w.lhs) + " vs " + fmt_num(w.rhs) + "]";
      s += "\n";
    }
    if (c.witnesses.size() > shown) s += "    ... " + std::to_string(c.witnesses.size() - shown) + " more\n";
  }
  if (!r.refinement.empty()) s += "  partition: " + r.refinement + "\n";
  auto line = [&](const char* k, const std::optional<double>& v) {
    if (v) s += std::string("  ") + k + " = " + fmt_num(*v) + "\n";
  };
  line("map plan cost", r.map_cost);
  line("oracle cost", r.oracle_cost);
  line("map plan cost at oracle size", r.oracle_map_cost);
  line("discrete TV of u", r.tv_u);
  line("boundary mass", r.boundary_mass);
  line("duality gap", r.duality_gap);
  line("divergence residual (max)", r.divergence_max);
  line("rotation check", r.rotation);
  line("cross-cell mass", r.cross_cell_offdiag);
  for (const auto& st : r.stages)
    if (!st.ok) s += "  stage " + st.stage + " failed: " + st.diagnostic + "\n";
  s += "outcome: " + r.outcome + "\n";
  return s;
}

}  // namespace lgot
