// lgot: least gradient problems via optimal transport.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lgot/emit.hpp"
#include "lgot/errors.hpp"
#include "lgot/pipeline.hpp"

namespace {

std::map<std::string, double> parse_params(const std::vector<std::string>& kv) {
  std::map<std::string, double> out;
  for (const auto& s : kv) {
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw lgot::ScenarioError("--param expects key=value, got '" + s + "'");
    try {
      std::size_t used = 0;
      double v = std::stod(s.substr(eq + 1), &used);
      if (used != s.size() - eq - 1) throw std::invalid_argument(s);
      out[s.substr(0, eq)] = v;
    } catch (const std::logic_error&) {
      throw lgot::ScenarioError("--param value is not a number: '" + s + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar least gradient problems solved and verified through optimal transport"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run the pipeline on a scenario file or builtin:NAME");
  std::string ref;
  std::vector<std::string> params;
  lgot::RunOptions opts;
  int grid = 0, atoms = 0, oracle_atoms = 0;
  std::uint64_t seed = 0;
  std::string emit;
  bool json_out = false;
  run->add_option("scenario", ref, "Scenario path or builtin:NAME")->required();
  run->add_option("--param", params, "Builtin parameter key=value (repeatable)");
  run->add_flag("--check-only", opts.check_only, "Stop after the admissibility checks");
  run->add_flag("--oracle", opts.oracle, "Add the discrete assignment solve");
  run->add_option("--grid", grid, "Raster and u grid cells along the longer side")->check(CLI::PositiveNumber);
  run->add_option("--atoms", atoms, "Plan atoms")->check(CLI::PositiveNumber);
  run->add_option("--oracle-atoms", oracle_atoms, "Oracle atoms per sign")->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "Seed for sampled checks");
  run->add_option("--out", opts.out_dir, "Artifact directory");
  run->add_option("--emit", emit, "Comma list of csv,svg")->check([](const std::string& s) {
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
      if (tok != "csv" && tok != "svg") return std::string("unknown emit kind '") + tok + "'";
    return std::string();
  });
  run->add_flag("--json", json_out, "Print the report as JSON");

  // scan
  auto* scan = app.add_subcommand("scan", "Locate the parameter frontier of one condition on a builtin family");
  std::string family, vary, cond_name, csv_path;
  double lo = 0, hi = 0, tol = 1e-6;
  std::vector<std::string> scan_params;
  scan->add_option("builtin", family, "Builtin family name")->required();
  scan->add_option("--vary", vary, "Parameter to scan")->required();
  scan->add_option("--lo", lo, "Lower end")->required();
  scan->add_option("--hi", hi, "Upper end")->required();
  scan->add_option("--condition", cond_name, "Condition id (H1 H2 H3 H3' S L1 L2 A1 A2 A3 A3~)")->required();
  scan->add_option("--param", scan_params, "Fixed builtin parameter key=value (repeatable)");
  scan->add_option("--tol", tol, "Bisection tolerance")->check(CLI::PositiveNumber);
  scan->add_option("--csv", csv_path, "Write (param, verdict, margin) samples here");

  auto* list = app.add_subcommand("builtins", "List builtin scenarios");
  auto* exp = app.add_subcommand("export", "Print a scenario as JSON");
  std::string exp_ref;
  std::vector<std::string> exp_params;
  exp->add_option("scenario", exp_ref, "Scenario path or builtin:NAME")->required();
  exp->add_option("--param", exp_params, "Builtin parameter key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : lgot::exit_code::input_error;
  }

  try {
    if (*list) {
      for (const auto& n : lgot::builtin_names()) std::cout << n << "\n";
      return 0;
    }
    if (*exp) {
      std::cout << lgot::scenario_to_json(lgot::resolve_scenario(exp_ref, parse_params(exp_params)));
      return 0;
    }
    if (*run) {
      if (grid) opts.grid = grid;
      if (atoms) opts.atoms = atoms;
      if (oracle_atoms) opts.oracle_atoms = oracle_atoms;
      if (run->count("--seed")) opts.seed = seed;
      opts.emit_csv = emit.find("csv") != std::string::npos;
      opts.emit_svg = emit.find("svg") != std::string::npos;
      if ((opts.emit_csv || opts.emit_svg) && opts.out_dir.empty()) opts.out_dir = ".";
      lgot::Scenario s = lgot::resolve_scenario(ref, parse_params(params));
      lgot::PipelineResult r = lgot::run_pipeline(s, opts);
      std::cout << (json_out ? lgot::report_json(r.report) : lgot::report_text(r.report));
      return r.report.exit_code;
    }
    if (*scan) {
      auto id = lgot::parse_condition(cond_name);
      if (!id) throw lgot::ScenarioError("unknown condition '" + cond_name + "'");
      auto fixed = parse_params(scan_params);
      auto eval = [&](double x) {
        auto p = fixed;
        p[vary] = x;
        return lgot::evaluate_condition(lgot::make_builtin(family, p), *id);
      };
      lgot::ScanResult res = lgot::threshold_scan(eval, lo, hi, tol);
      std::cout << "critical " << vary << " = " << lgot::fmt_num(res.critical) << " (" << cond_name
                << ", tolerance " << lgot::fmt_num(tol) << ", " << res.samples.size() << " evaluations)\n";
      if (!csv_path.empty()) {
        std::ofstream out(csv_path);
        if (!out) throw lgot::Error("cannot write " + csv_path);
        out << "param,verdict,margin\n";
        for (const auto& smp : res.samples)
          out << lgot::fmt_exact(smp.param) << "," << lgot::to_string(smp.verdict) << ","
              << lgot::fmt_num(smp.margin) << "\n";
      }
      return 0;
    }
  } catch (const lgot::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lgot::exit_code::input_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return lgot::exit_code::input_error;
  }
  return 0;
}
