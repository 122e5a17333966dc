#include <gtest/gtest.h>
#include <sys/wait.h>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lgot/emit.hpp"
#include "lgot/errors.hpp"
#include "lgot/pipeline.hpp"
#include "lgot/scenario.hpp"

using namespace lgot;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    rows.push_back(cols);
  }
  return rows;
}

double parse_exact(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  EXPECT_EQ(ec, std::errc{}) << s;
  return v;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("lgot_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(p);
  return p;
}

// Exit status of the CLI binary, or -1 when it is unavailable.
int cli(const std::string& args, std::string* out = nullptr) {
  const char* bin = std::getenv("LGOT_CLI");
  if (!bin) return -1;
  fs::path log = scratch("cli_log");
  int rc = std::system((std::string(bin) + " " + args + " > " + log.string() + " 2>&1").c_str());
  if (out) *out = slurp(log);
  fs::remove(log);
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

RunReport run(const std::string& name, std::map<std::string, double> params, RunOptions o = {}) {
  return run_pipeline(make_builtin(name, params), o).report;
}

}  // namespace

TEST(Scenario, BuiltinsRoundTripThroughJson) {
  for (const std::string& name : builtin_names()) {
    if (name == "cantor_square") continue;
    Scenario s = make_builtin(name);
    Scenario t = parse_scenario(scenario_to_json(s));
    EXPECT_EQ(t.name, s.name);
    ASSERT_EQ(t.curve.piece_count(), s.curve.piece_count()) << name;
    EXPECT_EQ(t.curve.length(), s.curve.length()) << name;
    ASSERT_EQ(t.g.breakpoints().size(), s.g.breakpoints().size());
    for (std::size_t i = 0; i < s.g.breakpoints().size(); ++i) {
      EXPECT_EQ(t.g.breakpoints()[i].s, s.g.breakpoints()[i].s);
      EXPECT_EQ(t.g.breakpoints()[i].value, s.g.breakpoints()[i].value);
    }
    EXPECT_EQ(t.partition.has_value(), s.partition.has_value());
  }
}

TEST(Scenario, CantorIsRejectedWithDiagnostic) {
  try {
    make_builtin("cantor_square");
    FAIL() << "expected a ScenarioError";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("singular-continuous trace unsupported"), std::string::npos);
  }
  EXPECT_THROW(load_scenario(std::string(LGOT_SOURCE_DIR) + "/scenarios/cantor_square.json"), Error);
}

TEST(Scenario, ShippedFilesLoad) {
  for (const char* f : {"delta_square.json", "disk_cosine.json", "rect_cshape.json", "circ_cshape.json",
                        "nonuniq_squares.json", "bottom_edge.json"}) {
    Scenario s = load_scenario(std::string(LGOT_SOURCE_DIR) + "/scenarios/" + f);
    Scenario b = make_builtin(s.name);
    EXPECT_NEAR(s.curve.length(), b.curve.length(), 1e-12) << f;
  }
}

TEST(Scenario, RejectsUnknownNamesAndParams) {
  EXPECT_THROW(make_builtin("no_such"), ScenarioError);
  EXPECT_THROW(make_builtin("delta_square", {{"gamma", 1.0}}), ScenarioError);
  EXPECT_THROW(make_builtin("delta_square", {{"delta", 0.7}}), Error);
  EXPECT_THROW(parse_scenario("{\"format\": \"lgot-scenario/1\"}"), Error);
}

TEST(Pipeline, DeltaSquarePasses) {
  RunOptions o;
  o.oracle = true;
  RunReport r = run("delta_square", {{"delta", 0.25}}, o);
  EXPECT_EQ(r.exit_code, exit_code::ok);
  ASSERT_NE(r.condition(ConditionId::H3), nullptr);
  EXPECT_EQ(r.condition(ConditionId::H3)->verdict, Verdict::satisfied);
  ASSERT_TRUE(r.oracle_cost && r.oracle_map_cost);
  EXPECT_LE(std::abs(*r.oracle_map_cost - *r.oracle_cost) / *r.oracle_cost, 1e-3);
}

TEST(Pipeline, DeltaSquareViolatesH3) {
  RunOptions o;
  o.check_only = true;
  RunReport r = run("delta_square", {{"delta", 0.4}}, o);
  EXPECT_EQ(r.exit_code, exit_code::violated);
  const AdmissibilityReport* h3 = r.condition(ConditionId::H3);
  ASSERT_NE(h3, nullptr);
  EXPECT_EQ(h3->verdict, Verdict::violated);
  ASSERT_FALSE(h3->witnesses.empty());
  EXPECT_EQ(h3->witnesses.front().plus_points.size(), 4u);
  EXPECT_FALSE(r.map_cost.has_value());
}

TEST(Pipeline, ExitCodesOnBuiltins) {
  EXPECT_EQ(run("disk_cosine", {}).exit_code, exit_code::ok);
  EXPECT_EQ(run("rect_cshape", {{"a", 0.25}}).exit_code, exit_code::ok);
  EXPECT_EQ(run("rect_cshape", {{"a", 0.04}}).exit_code, exit_code::violated);
  EXPECT_EQ(run("circ_cshape", {{"alpha", 1.0}}).exit_code, exit_code::ok);
  EXPECT_EQ(run("circ_cshape", {{"alpha", 1.4}}).exit_code, exit_code::violated);
  RunReport nu = run("nonuniq_squares", {});
  EXPECT_EQ(nu.exit_code, exit_code::ok);
  EXPECT_TRUE(nu.non_unique);
  RunReport be = run("bottom_edge", {});
  EXPECT_EQ(be.exit_code, exit_code::violated);
  EXPECT_NE(be.outcome.find("no trace-sense solution"), std::string::npos);
}

TEST(Pipeline, DiskCosineEmitsU) {
  RunOptions o;
  o.grid = 128;
  PipelineResult r = run_pipeline(make_builtin("disk_cosine"), o);
  ASSERT_TRUE(r.u.has_value());
  EXPECT_EQ(r.report.u_invalid_cells, 0);
}

TEST(Emit, RaysAndDecompositionRoundTrip) {
  fs::path dir = scratch("emit");
  RunOptions o;
  o.out_dir = dir.string();
  o.emit_csv = true;
  o.emit_svg = true;
  o.grid = 64;
  PipelineResult r = run_pipeline(make_builtin("delta_square"), o);
  ASSERT_TRUE(r.map);

  auto dec = read_csv(dir / "decomposition.csv");
  std::size_t pair_rows = 0;
  for (const auto& row : dec) {
    if (row[0] == "-1") continue;
    const PairTable& t = r.map->pairs()[std::stoul(row[0])];
    const BoundaryArc& arc = row[3] == "plus" ? t.plus_arc : t.minus_arc;
    EXPECT_EQ(parse_exact(row[4]), arc.start);
    EXPECT_EQ(parse_exact(row[5]), arc.length);
    ++pair_rows;
  }
  EXPECT_EQ(pair_rows, 2 * r.map->pairs().size());

  auto rays = read_csv(dir / "rays.csv");
  ASSERT_FALSE(rays.empty());
  for (const auto& row : rays) {
    TransportRay ray = r.map->ray_at(std::stoul(row[0]), parse_exact(row[2]));
    EXPECT_EQ(parse_exact(row[5]), ray.p_plus.x);
    EXPECT_EQ(parse_exact(row[6]), ray.p_plus.y);
    EXPECT_EQ(parse_exact(row[7]), ray.p_minus.x);
    EXPECT_EQ(parse_exact(row[8]), ray.p_minus.y);
    Point2 again = r.map->curve().point_at_wrapped(parse_exact(row[3]));
    EXPECT_EQ(again.x, ray.p_plus.x);
    EXPECT_EQ(again.y, ray.p_plus.y);
  }

  std::string svg = slurp(dir / "scene.svg");
  for (const char* layer : {"partition", "sigma", "boundary", "decomposition", "rays", "u_contours"})
    EXPECT_NE(svg.find(std::string("id=\"") + layer + "\""), std::string::npos) << layer;
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  fs::remove_all(dir);
}

TEST(Emit, ByteStableAcrossRuns) {
  for (const char* name : {"delta_square", "rect_cshape"}) {
    fs::path a = scratch(std::string("det_a_") + name), b = scratch(std::string("det_b_") + name);
    RunOptions o;
    o.emit_csv = true;
    o.emit_svg = true;
    o.oracle = true;
    o.grid = 64;
    o.out_dir = a.string();
    RunReport ra = run_pipeline(make_builtin(name), o).report;
    o.out_dir = b.string();
    RunReport rb = run_pipeline(make_builtin(name), o).report;
    for (const auto& e : fs::directory_iterator(a)) {
      std::string fname = e.path().filename().string();
      if (fname == "report.json") continue;  // artifact paths differ
      EXPECT_EQ(slurp(e.path()), slurp(b / fname)) << name << " " << fname;
    }
    ra.artifacts.clear();
    rb.artifacts.clear();
    EXPECT_EQ(report_json(ra), report_json(rb));
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST(Emit, NumberFormats) {
  EXPECT_EQ(fmt_num(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(fmt_exact(0.1), "0.1");
  EXPECT_EQ(parse_exact(fmt_exact(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Cli, ExitCodes) {
  if (!std::getenv("LGOT_CLI")) GTEST_SKIP() << "LGOT_CLI not set";
  std::string out;
  EXPECT_EQ(cli("run builtin:delta_square --param delta=0.25 --oracle", &out), 0) << out;
  EXPECT_EQ(cli("run builtin:delta_square --param delta=0.40 --check-only", &out), 2) << out;
  EXPECT_NE(out.find("H3"), std::string::npos);
  EXPECT_EQ(cli("run builtin:bottom_edge", &out), 2);
  EXPECT_NE(out.find("no trace-sense solution"), std::string::npos);
  EXPECT_EQ(cli("run builtin:cantor_square", &out), 1);
  EXPECT_NE(out.find("singular-continuous trace unsupported"), std::string::npos);
  EXPECT_EQ(cli("run /nonexistent/file.json"), 1);
  EXPECT_EQ(cli("run builtin:delta_square --param delta=oops"), 1);
}

TEST(Cli, ScanWritesCsv) {
  if (!std::getenv("LGOT_CLI")) GTEST_SKIP() << "LGOT_CLI not set";
  fs::path csv = scratch("scan") ;
  std::string out;
  ASSERT_EQ(cli("scan delta_square --vary delta --lo 0.05 --hi 0.45 --condition H3 --csv " + csv.string(), &out), 0)
      << out;
  EXPECT_NE(out.find("0.2928"), std::string::npos) << out;
  std::string text = slurp(csv);
  EXPECT_EQ(text.rfind("param,verdict,margin", 0), 0u) << text.substr(0, 80);
  fs::remove(csv);
  EXPECT_EQ(cli("scan delta_square --vary delta --lo 0.05 --hi 0.2 --condition H3"), 1);
}
