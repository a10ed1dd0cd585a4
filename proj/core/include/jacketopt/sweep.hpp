#pragma once

// Parametric response studies on top of the simulation pipeline:
//   * sweep one parameter family across an ordered series of design points,
//   * fit per-ton response gradients from the resulting tables,
//   * superpose gradients into first-order estimates for combined selections,
//   * screen a design against the three constraint strategies.

#include "jacketopt/pipeline.hpp"

#include <map>
#include <string>
#include <vector>

namespace jacketopt {

// The five response scalars every study tracks: peak von Mises stress, the
// overall and mudline displacement maxima, and the overall and mudline tilt
// maxima (resultant rotation about the horizontal axes, degrees).
struct ResponseScalars {
  double stress_mpa = 0.0;
  double u_max_mm = 0.0;
  double u_mudline_mm = 0.0;
  double phi_max_deg = 0.0;
  double phi_mudline_deg = 0.0;
};

ResponseScalars governing_scalars(const SolveResult& r);

struct SweepPoint {
  std::string label;                     // e.g. "BW=25000" or "Comb3"
  std::vector<ParamOverride> overrides;  // applied to the base design
};

struct SweepSpec {
  std::string kind;  // PL, BW, BD, BT, LD or LT
  std::vector<SweepPoint> points;
  SimOptions options;
  int workers = 1;
};

// Numeric kinds (PL pile stick-up, BW base width) sweep a single scalar over
// an inclusive range. `step` must be positive and `from <= to`.
SweepSpec make_range_sweep(const std::string& kind, double from_mm, double to_mm, double step_mm);

// Section kinds (BD/BT brace diameter/thickness, LD/LT leg diameter/thickness)
// sweep named combinations, each a full group->value map, loaded from JSON:
//   { "note": "...", "BD": { "Comb1": { "SB1_d": 915, ... }, ... }, ... }
struct CombinationSets {
  std::map<std::string, std::vector<SweepPoint>> kinds;  // points ordered by name
  std::string note;
};

CombinationSets parse_combinations(const std::string& path);
SweepSpec make_combination_sweep(const CombinationSets& sets, const std::string& kind);

struct SweepRow {
  std::string label;
  std::vector<ParamOverride> overrides;
  bool ok = false;
  std::string status;  // "ok" or the failure reason
  double mass_t = 0.0;
  ResponseScalars scalars;
};

struct SweepTable {
  std::string kind;
  std::vector<SweepRow> rows;  // baseline row first, then the points in order
};

// Evaluates the baseline and every point independently (bounded worker pool,
// results in spec order). A point whose model is invalid is marked failed and
// the sweep continues.
SweepTable run_sweep(const SimInputs& in, const SweepSpec& spec);

void write_sweep_csv(const SweepTable& table, const std::string& path);

struct GradientRow {
  bool valid = false;
  std::string note;  // when invalid: why the fit was skipped
  int points = 0;    // successful rows behind the fit
  ResponseScalars per_ton;  // least-squares slope of each scalar vs mass
};

struct GradientTable {
  std::vector<std::pair<std::string, GradientRow>> kinds;  // input order
};

// Least-squares slope of each response scalar against mass over the
// successful rows of each table. Constant-mass sweeps (PL) and tables with
// fewer than three successful rows are kept but marked invalid with a note.
GradientTable fit_gradients(const std::vector<SweepTable>& tables);

void write_gradients_json(const GradientTable& grads, const std::string& path);

struct KindSelection {
  std::string kind;
  std::string label;  // informational, e.g. the chosen combination name
  double mass_delta_t = 0.0;
};

struct EstimatedChange {
  double mass_delta_t = 0.0;
  ResponseScalars delta;
};

// First-order superposition: each response delta is the sum over the selected
// kinds of (that kind's gradient) x (that kind's mass delta).
EstimatedChange estimate_changes(const GradientTable& grads,
                                 const std::vector<KindSelection>& picks);

// Constraint strategies, from most conservative to most aggressive:
//   1 every scalar strictly below the baseline design's value;
//   2 baseline bounds on stress and the overall displacement/tilt, the
//     mudline displacement unconstrained, mudline tilt capped absolutely;
//   3 absolute design-code caps only.
enum class Strategy {
  below_baseline = 1,
  below_baseline_top_only = 2,
  code_limits = 3,
};

Strategy strategy_from_int(int n);
int strategy_to_int(Strategy s);

// Absolute caps: S355 steel yield stress; 0.2 %-of-height lateral drift
// (ASCE 7-16; 172 mm for this 86 m jacket); 1/150 rad overall tilt
// (Eurocode 7, serviceability) in degrees; 0.25 deg pile tilt at the mudline
// (DNV offshore foundation allowance).
inline constexpr double kYieldStressMpa = 355.0;
inline constexpr double kDriftCapMm = 172.0;
inline constexpr double kTiltCapDeg = 0.3819;
inline constexpr double kMudlineTiltCapDeg = 0.25;

struct ConstraintCheck {
  std::string name;     // which scalar is constrained
  double value = 0.0;
  double limit = 0.0;
  double margin = 0.0;  // limit - value; negative means violated
  bool pass = false;    // strict: value < limit
};

struct StrategyReport {
  Strategy strategy = Strategy::below_baseline;
  std::vector<ConstraintCheck> checks;
  bool pass = false;
  double total_violation = 0.0;  // sum of max(0, value - limit) over checks
};

// `baseline` is required for strategies 1 and 2 and ignored for strategy 3.
StrategyReport check_strategy(const ResponseScalars& result, Strategy strategy,
                              const ResponseScalars* baseline);
StrategyReport check_strategy(const SolveResult& result, Strategy strategy,
                              const SolveResult* baseline);

}  // namespace jacketopt
