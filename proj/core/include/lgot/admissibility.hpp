#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lgot/arc_decomposition.hpp"
#include "lgot/partition.hpp"
#include "lgot/transport_map.hpp"

namespace lgot {

enum class ConditionId { H1, H2, H3, H3prime, S, L1, L2, A1, A2, A3, A3tilde };
enum class Verdict { satisfied, violated, undecided };

const char* to_string(ConditionId id);
const char* to_string(Verdict v);
std::optional<ConditionId> parse_condition(const std::string& s);

// e_k^+ and e_k^- per cycle position; lhs = Σ|e_k⁺ − e_k⁻|,
// rhs = Σ|e_k⁺ − e_{k+1}⁻| (indices mod m).
struct CycleWitness {
  std::vector<std::pair<double, double>> points;
  std::vector<Point2> plus_points;
  std::vector<Point2> minus_points;
  double lhs = 0.0;
  double rhs = 0.0;
  std::string note;
};

struct AdmissibilityReport {
  ConditionId id = ConditionId::H1;
  Verdict verdict = Verdict::undecided;
  std::vector<CycleWitness> witnesses;
  double margin = 0.0;
  std::vector<std::string> notes;
};

std::pair<double, double> cycle_sums(std::span<const Point2> plus, std::span<const Point2> minus);
// Re-evaluates the witness from its points and reports whether it violates.
bool replay_violation(const CycleWitness& w, bool strict, double tol);

AdmissibilityReport report_from_h1(const H1Report& h1);

// cell >= 0 restricts the check to pairs of that cell.
AdmissibilityReport check_H2(const TransportMap& map, int n, int cell = -1);
AdmissibilityReport check_H3(const TransportMap& map, int k, int cell = -1);
// (H3)' holds with δ_m = margin of the H3 report when that margin exceeds strict_margin.
AdmissibilityReport check_H3prime(const AdmissibilityReport& h3, double strict_margin);
AdmissibilityReport check_S(const BoundaryCurve& curve, const SignedBoundaryMeasure& f, const TransportMap& map);

enum class L2Variant { L2, A3, A3tilde };
enum class RepMode { arbitrary, matched };

struct L2Options {
  L2Variant variant = L2Variant::L2;
  RepMode mode = RepMode::arbitrary;
  int k = 6;
  int max_exact_cells = 12;
  int random_cycles = 100000;
  std::uint64_t seed = 1;
  int max_nodes = 480;
};

// Cycles over distinct C/E cells of the map (pairs carry their cell id).
AdmissibilityReport check_L2_A3(const TransportMap& map, const L2Options& opts);
AdmissibilityReport check_L2_A3(const Partition& p, const TransportMap& map, const L2Options& opts);

AdmissibilityReport check_A1(const Partition& p, const PartitionReport& rep);
AdmissibilityReport check_A2(const Partition& p, const BoundaryCurve& curve, int k);
AdmissibilityReport check_L1(const Partition& p, const PartitionReport& rep, const TransportMap& map, int h2_samples,
                             int k);

struct ScanSample {
  double param = 0.0;
  Verdict verdict = Verdict::undecided;
  double margin = 0.0;
};

struct ScanResult {
  double critical = 0.0;
  std::vector<ScanSample> samples;
};

// Bisection on the satisfied/violated frontier until hi - lo <= tol.
ScanResult threshold_scan(const std::function<AdmissibilityReport(double)>& eval, double lo, double hi,
                          double tol = 1e-6);

}  // namespace lgot
