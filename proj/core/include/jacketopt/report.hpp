#pragma once

// Comparison reporting across simulation results and optimization summaries:
// one row per model with mass and the five response scalars, a limits row for
// the chosen constraint strategy, per-model constraint margins, and
// plot-ready fitness curves. Tables only - no rendering.

#include "jacketopt/pipeline.hpp"
#include "jacketopt/sweep.hpp"

#include <string>
#include <vector>

namespace jacketopt {

// Simulation result payload as written by the simulate command and re-read
// by the report command.
std::string result_json(const std::string& model_label, const SimOptions& opt,
                        const SimResult& res);

struct ResultEntry {
  std::string model;   // display label
  double mass_t = 0.0;
  ResponseScalars scalars;
  std::string source_path;
  bool from_optimizer = false;  // parsed from a GA summary rather than a result file
};

// Reads either a simulate result.json or an optimize summary.json (detected
// by shape); a missing or malformed field is reported by name.
ResultEntry parse_result_file(const std::string& path);

// Stable ascending sort by mass.
std::vector<ResultEntry> sort_by_mass(std::vector<ResultEntry> entries);

struct ReportOptions {
  Strategy strategy = Strategy::code_limits;
  // Baseline responses; required for strategies 1 and 2 where the limits are
  // the baseline's own values.
  const ResponseScalars* baseline = nullptr;
};

struct ReportBundle {
  std::string table_csv;  // full precision, model rows sorted by mass + limits row
  std::string table_md;   // the same table formatted for reading
  std::string margins_csv;  // model,constraint,value,limit,margin,pass
};

ReportBundle build_report(std::vector<ResultEntry> entries, const ReportOptions& opt);

// Merged ga_history curves: model,generation,best_fitness,mean_fitness rows
// for every entry whose run directory carries a ga_history.csv.
std::string plot_fitness_csv(const std::vector<ResultEntry>& entries);

}  // namespace jacketopt
