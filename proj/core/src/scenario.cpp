#include "lgot/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "lgot/errors.hpp"

namespace lgot {
namespace {

using nlohmann::json;
constexpr double kPi = std::numbers::pi;

Point2 read_point(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ScenarioError("point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json write_point(Point2 p) { return json::array({p.x, p.y}); }

std::vector<BoundaryPiece> read_pieces(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ScenarioError("boundary must be a non-empty piece list");
  std::vector<BoundaryPiece> out;
  for (const auto& p : arr) {
    std::string type = p.at("type").get<std::string>();
    if (type == "line")
      out.push_back(BoundaryPiece::line(read_point(p.at("from")), read_point(p.at("to"))));
    else if (type == "arc")
      out.push_back(BoundaryPiece::arc(read_point(p.at("from")), read_point(p.at("center")), p.at("sweep").get<double>()));
    else
      throw ScenarioError("unknown piece type '" + type + "'");
  }
  return out;
}

json write_pieces(std::span<const BoundaryPiece> pieces) {
  json arr = json::array();
  for (const auto& p : pieces) {
    if (p.kind() == PieceKind::line)
      arr.push_back({{"type", "line"}, {"from", write_point(p.from())}, {"to", write_point(p.to())}});
    else
      arr.push_back({{"type", "arc"}, {"from", write_point(p.from())}, {"center", write_point(p.center())},
                     {"sweep", p.sweep()}});
  }
  return arr;
}

[[noreturn]] void cantor_unsupported() {
  throw ScenarioError(
      "singular-continuous trace unsupported: Cantor-type boundary data has no piecewise-linear representation "
      "and is outside the supported data class");
}

TraceFunction read_trace(const json& t, const BoundaryCurve& curve) {
  std::string type = t.at("type").get<std::string>();
  std::vector<Breakpoint> bps;
  if (type == "breakpoints") {
    for (const auto& b : t.at("points")) {
      if (!b.is_array() || b.size() != 2) throw ScenarioError("breakpoint must be [s, value]");
      bps.push_back({b[0].get<double>(), b[1].get<double>()});
    }
  } else if (type == "vertex_values") {
    const auto& v = t.at("values");
    if (v.size() != curve.piece_count()) throw ScenarioError("vertex_values needs one value per boundary piece");
    for (std::size_t i = 0; i < v.size(); ++i) bps.push_back({curve.piece_start(i), v[i].get<double>()});
  } else if (type == "cantor") {
    cantor_unsupported();
  } else {
    throw ScenarioError("unknown trace type '" + type + "'");
  }
  return TraceFunction(std::move(bps), curve.length());
}

CellKind read_kind(const std::string& k) {
  if (k == "C") return CellKind::C;
  if (k == "E") return CellKind::E;
  if (k == "X") return CellKind::X;
  throw ScenarioError("unknown cell kind '" + k + "'");
}

BoundaryArc read_arc(const json& j) { return {j.at("start").get<double>(), j.at("length").get<double>()}; }

PartitionSpec read_partition(const json& j) {
  PartitionSpec spec;
  if (j.contains("cells"))
    for (const auto& c : j.at("cells"))
      spec.cells.push_back({c.at("name").get<std::string>(), read_kind(c.at("kind").get<std::string>()),
                            read_pieces(c.at("boundary"))});
  if (j.contains("families"))
    for (const auto& f : j.at("families"))
      spec.families.push_back({f.at("name").get<std::string>(), read_kind(f.at("kind").get<std::string>()),
                               read_arc(f.at("plus")), read_arc(f.at("minus")), f.value("n", 1)});
  return spec;
}

void read_solver(const json& j, SolverParams& p) {
  p.atoms = j.value("atoms", p.atoms);
  p.grid = j.value("grid", p.grid);
  p.k = j.value("samples", p.k);
  p.h2_samples = j.value("h2_samples", p.h2_samples);
  p.oracle_atoms = j.value("oracle_atoms", p.oracle_atoms);
  p.refine_max = j.value("refine_max", p.refine_max);
  p.seed = j.value("seed", p.seed);
  p.strict_margin = j.value("strict_margin", p.strict_margin);
}

// ---- built-ins ----

using Params = std::map<std::string, double>;

Params with_defaults(const std::string& name, Params defaults, const Params& given) {
  for (const auto& [k, v] : given) {
    if (!defaults.count(k)) throw ScenarioError("builtin " + name + " has no parameter '" + k + "'");
    defaults[k] = v;
  }
  return defaults;
}

int as_count(double v, const char* what) {
  if (v < 1 || v != std::floor(v)) throw ParameterDomainError(std::string(what) + " must be a positive integer");
  return static_cast<int>(v);
}

Scenario polygon_scenario(std::string name, const std::vector<Point2>& vs, std::vector<Breakpoint> bps) {
  std::vector<BoundaryPiece> pieces;
  for (std::size_t i = 0; i < vs.size(); ++i) pieces.push_back(BoundaryPiece::line(vs[i], vs[(i + 1) % vs.size()]));
  BoundaryCurve curve(std::move(pieces));
  TraceFunction g(std::move(bps), curve.length());
  return Scenario{std::move(name), std::move(curve), std::move(g), std::nullopt, {}, {}};
}

Scenario delta_square(const Params& given) {
  Params p = with_defaults("delta_square", {{"delta", 0.25}}, given);
  double d = p["delta"];
  if (!(d > 0 && d < 0.5)) throw ParameterDomainError("delta must lie in (0, 0.5)");
  std::vector<Breakpoint> bps;
  for (int k = 0; k < 4; ++k) {
    bps.push_back({double(k), 0.0});
    bps.push_back({k + d, d});
    bps.push_back({k + 1 - d, d});
  }
  Scenario s = polygon_scenario("delta_square", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, std::move(bps));
  s.values = p;
  return s;
}

Scenario bottom_edge(const Params& given) {
  Params p = with_defaults("bottom_edge", {}, given);
  Scenario s = polygon_scenario("bottom_edge", {{0, 0}, {1, 0}, {1, 1}, {0, 1}},
                                {{0.0, 0.0}, {0.5, 0.5}, {1.0, 0.0}});
  s.values = p;
  return s;
}

Scenario disk_cosine(const Params& given) {
  Params p = with_defaults("disk_cosine", {{"breakpoints", 2048}}, given);
  int n = as_count(p["breakpoints"], "breakpoints");
  if (n < 8 || n % 2) throw ParameterDomainError("breakpoints must be even and at least 8");
  std::vector<BoundaryPiece> pieces{BoundaryPiece::arc({1, 0}, {0, 0}, kPi), BoundaryPiece::arc({-1, 0}, {0, 0}, kPi)};
  BoundaryCurve curve(std::move(pieces));
  std::vector<Breakpoint> bps;
  for (int k = 0; k < n; ++k) {
    double s = 2 * kPi * k / n;
    bps.push_back({s, std::cos(s)});
  }
  TraceFunction g(std::move(bps), curve.length());
  Scenario s{"disk_cosine", std::move(curve), std::move(g), std::nullopt, {}, p};
  return s;
}

Scenario rect_cshape(const Params& given) {
  Params p = with_defaults("rect_cshape", {{"a", 0.25}, {"b", 0.5}, {"n", 4}}, given);
  double a = p["a"], b = p["b"];
  int n = as_count(p["n"], "n");
  if (!(a > 0 && a < 1)) throw ParameterDomainError("a must lie in (0, 1)");
  if (!(b > 0 && b < 1)) throw ParameterDomainError("b must lie in (0, 1)");
  std::vector<Point2> vs{{-1, 0}, {-a, 0}, {-a, b}, {a, b}, {a, 0}, {1, 0}, {1, 1}, {-1, 1}};
  // Vertex arclengths.
  double s1 = 1 - a, s2 = s1 + b, s3 = s2 + 2 * a, s4 = s3 + b, s5 = s4 + 1 - a, s6 = s5 + 1, s7 = s6 + 2;
  std::vector<Breakpoint> bps{{0, 0},        {s1, 0},  {s2, -1}, {s3, -1}, {s4, 0},
                              {s5, 0},       {s5 + b, 0}, {s6, -1}, {s7, -1}, {s7 + 1 - b, 0}};
  Scenario s = polygon_scenario("rect_cshape", vs, std::move(bps));
  auto poly = [](std::vector<Point2> q) {
    std::vector<BoundaryPiece> out;
    for (std::size_t i = 0; i < q.size(); ++i) out.push_back(BoundaryPiece::line(q[i], q[(i + 1) % q.size()]));
    return out;
  };
  PartitionSpec spec;
  spec.cells.push_back({"X1", CellKind::X, poly({{-a, b}, {a, b}, {1, 1}, {-1, 1}})});
  spec.cells.push_back({"X2", CellKind::X, poly({{-1, 0}, {-a, 0}, {-1, b}})});
  spec.cells.push_back({"X3", CellKind::X, poly({{a, 0}, {1, 0}, {1, b}})});
  spec.families.push_back({"CL", CellKind::C, {s7, 1 - b}, {s1, b}, n});
  spec.families.push_back({"CR", CellKind::C, {s3, b}, {s5 + b, 1 - b}, n});
  s.partition = std::move(spec);
  s.values = p;
  return s;
}

Scenario circ_cshape(const Params& given) {
  Params p = with_defaults("circ_cshape", {{"R", 2.0}, {"alpha", 1.0}, {"n", 6}}, given);
  double R = p["R"], al = p["alpha"];
  int n = as_count(p["n"], "n");
  if (!(R > 1)) throw ParameterDomainError("R must exceed 1");
  if (!(al > 0 && al < kPi / 2)) throw ParameterDomainError("alpha must lie in (0, pi/2)");
  std::vector<BoundaryPiece> pieces{BoundaryPiece::line({1, 0}, {R, 0}), BoundaryPiece::arc({R, 0}, {0, 0}, kPi),
                                    BoundaryPiece::line({-R, 0}, {-1, 0}), BoundaryPiece::arc({-1, 0}, {0, 0}, -kPi)};
  BoundaryCurve curve(std::move(pieces));
  double s1 = R - 1, s2 = s1 + kPi * R, s3 = s2 + R - 1;
  // g(θ) = min(θ/α, 1, (π−θ)/α) on both arcs, 0 on the segments.
  std::vector<Breakpoint> bps{{0, 0},
                              {s1, 0},
                              {s1 + R * al, 1},
                              {s1 + R * (kPi - al), 1},
                              {s2, 0},
                              {s3, 0},
                              {s3 + al, 1},
                              {s3 + kPi - al, 1}};
  TraceFunction g(std::move(bps), curve.length());
  Scenario s{"circ_cshape", std::move(curve), std::move(g), std::nullopt, {}, p};
  auto polar = [](double r, double t) { return Point2{r * std::cos(t), r * std::sin(t)}; };
  PartitionSpec spec;
  spec.cells.push_back({"X1",
                        CellKind::X,
                        {BoundaryPiece::arc(polar(R, al), {0, 0}, kPi - 2 * al),
                         BoundaryPiece::line(polar(R, kPi - al), polar(1, kPi - al)),
                         BoundaryPiece::arc(polar(1, kPi - al), {0, 0}, -(kPi - 2 * al)),
                         BoundaryPiece::line(polar(1, al), polar(R, al))}});
  spec.families.push_back({"ER", CellKind::E, {s1, R * al}, {s3 + kPi - al, al}, n});
  spec.families.push_back({"EL", CellKind::E, {s3, al}, {s1 + R * (kPi - al), R * al}, n});
  s.partition = std::move(spec);
  return s;
}

Scenario nonuniq_squares(const Params& given) {
  Params p = with_defaults("nonuniq_squares", {{"a", 1.0}, {"b", 2.0}}, given);
  double a = p["a"], b = p["b"];
  if (!(a > 0 && b > a)) throw ParameterDomainError("need 0 < a < b");
  std::vector<Point2> vs{{a, a}, {-a, a}, {-b, b}, {-b, -b}, {-a, -a}, {a, -a}, {b, -b}, {b, b}};
  double d = std::sqrt(2.0) * (b - a), e = 2 * a, v = 2 * b;
  // Vertex arclengths and values: inner edges carry a, outer edges b, diagonals |x|.
  std::vector<double> vals{a, a, b, b, a, a, b, b};
  std::vector<double> lens{e, d, v, d, e, d, v, d};
  std::vector<Breakpoint> bps;
  double s = 0.0;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    bps.push_back({s, vals[i]});
    s += lens[i];
  }
  Scenario sc = polygon_scenario("nonuniq_squares", vs, std::move(bps));
  auto poly = [](std::vector<Point2> q) {
    std::vector<BoundaryPiece> out;
    for (std::size_t i = 0; i < q.size(); ++i) out.push_back(BoundaryPiece::line(q[i], q[(i + 1) % q.size()]));
    return out;
  };
  PartitionSpec spec;
  spec.cells.push_back({"CL", CellKind::C, poly({{-a, a}, {-b, b}, {-b, -b}, {-a, -a}})});
  spec.cells.push_back({"CR", CellKind::C, poly({{a, -a}, {b, -b}, {b, b}, {a, a}})});
  spec.cells.push_back({"X", CellKind::X, poly({{-a, -a}, {a, -a}, {a, a}, {-a, a}})});
  sc.partition = std::move(spec);
  sc.values = p;
  return sc;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("scenario is not valid JSON: ") + e.what());
  }
  try {
    std::string fmt = j.value("format", std::string("lgot-scenario/1"));
    if (fmt != "lgot-scenario/1") throw ScenarioError("unsupported scenario format '" + fmt + "'");
    if (j.contains("trace") && j["trace"].value("type", std::string()) == "cantor") cantor_unsupported();
    BoundaryCurve curve(read_pieces(j.at("boundary")));
    TraceFunction g = read_trace(j.at("trace"), curve);
    Scenario s{j.value("name", std::string("scenario")), std::move(curve), std::move(g), std::nullopt, {}, {}};
    if (j.contains("partition")) s.partition = read_partition(j.at("partition"));
    if (j.contains("solver")) read_solver(j.at("solver"), s.params);
    return s;
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot read scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& s) {
  json j;
  j["format"] = "lgot-scenario/1";
  j["name"] = s.name;
  j["boundary"] = write_pieces(s.curve.pieces());
  json pts = json::array();
  for (const auto& b : s.g.breakpoints()) pts.push_back(json::array({b.s, b.value}));
  j["trace"] = {{"type", "breakpoints"}, {"points", pts}};
  if (s.partition) {
    json cells = json::array(), fams = json::array();
    for (const auto& c : s.partition->cells)
      cells.push_back({{"name", c.name}, {"kind", to_string(c.kind)}, {"boundary", write_pieces(c.pieces)}});
    for (const auto& f : s.partition->families)
      fams.push_back({{"name", f.name},
                      {"kind", to_string(f.kind)},
                      {"plus", {{"start", f.plus_arc.start}, {"length", f.plus_arc.length}}},
                      {"minus", {{"start", f.minus_arc.start}, {"length", f.minus_arc.length}}},
                      {"n", f.n}});
    j["partition"] = {{"cells", cells}, {"families", fams}};
  }
  const SolverParams& p = s.params;
  j["solver"] = {{"atoms", p.atoms},           {"grid", p.grid},           {"samples", p.k},
                 {"h2_samples", p.h2_samples}, {"oracle_atoms", p.oracle_atoms}, {"refine_max", p.refine_max},
                 {"seed", p.seed},             {"strict_margin", p.strict_margin}};
  return j.dump(2) + "\n";
}

std::vector<std::string> builtin_names() {
  return {"delta_square", "disk_cosine", "rect_cshape", "circ_cshape", "nonuniq_squares", "bottom_edge", "cantor_square"};
}

Scenario make_builtin(const std::string& name, const std::map<std::string, double>& params) {
  if (name == "delta_square") return delta_square(params);
  if (name == "disk_cosine") return disk_cosine(params);
  if (name == "rect_cshape") return rect_cshape(params);
  if (name == "circ_cshape") return circ_cshape(params);
  if (name == "nonuniq_squares") return nonuniq_squares(params);
  if (name == "bottom_edge") return bottom_edge(params);
  if (name == "cantor_square") cantor_unsupported();
  throw ScenarioError("unknown builtin '" + name + "'");
}

Scenario resolve_scenario(const std::string& ref, const std::map<std::string, double>& params) {
  const std::string prefix = "builtin:";
  if (ref.rfind(prefix, 0) == 0) return make_builtin(ref.substr(prefix.size()), params);
  if (!params.empty()) throw ScenarioError("--param applies to builtin scenarios only");
  return load_scenario(ref);
}

}  // namespace lgot
