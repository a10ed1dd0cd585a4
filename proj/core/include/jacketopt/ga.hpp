#pragma once

// Constrained mass minimization over the discrete section/footprint grids with
// a genetic algorithm:
//   * every design variable lives on a uniform mm grid (lower, upper,
//     interval), so chromosomes are vectors of grid indices;
//   * fitness is the static-penalty form f(X) = m(X) + c * sum(violations),
//     with the violations taken from the chosen constraint strategy;
//   * mutation probability falls linearly with fitness rank, so poor designs
//     explore while incumbents are preserved (1-elitism on top);
//   * fitness evaluations of a generation run on a bounded worker pool; all
//     randomness is consumed in the sequential operator phase, so results are
//     independent of the worker count.

#include "jacketopt/pipeline.hpp"
#include "jacketopt/sweep.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace jacketopt {

// One design variable: a uniform grid of candidate values in mm. Labels use
// the override naming ("<section>-d", "<section>-t", "BW").
struct GridParam {
  std::string label;
  double lower_mm = 0.0;
  double upper_mm = 0.0;
  double interval_mm = 0.0;

  int size() const;               // number of grid values, >= 2
  double value(int idx) const;    // lower + idx * interval
  int snap(double v_mm) const;    // nearest grid index, ties toward the upper
};

struct ParameterGrid {
  std::vector<GridParam> params;

  // Throws ConfigError on a malformed grid: non-positive interval, upper not
  // above lower, a span not divisible by the interval, fewer than two values,
  // or a (d, t) pair whose smallest diameter cannot satisfy d > 2t even at
  // the smallest thickness (that would make chromosome repair impossible).
  void validate() const;
  int index_of(const std::string& label) const;  // -1 if absent
};

// A chromosome: one grid index per parameter, in grid order.
using DesignVector = std::vector<int>;

// Index vector -> physical overrides ready for apply_overrides().
std::vector<ParamOverride> decode_design(const ParameterGrid& grid, const DesignVector& x);

// Nearest-grid-point projection of physical values (e.g. the as-built design).
DesignVector snap_to_grid(const ParameterGrid& grid, const std::vector<double>& values_mm);

// Enforces d > 2t on every (label-d, label-t) pair by clamping the thickness
// index down to the largest grid value that fits. Grid validation guarantees
// this always succeeds.
void repair_design(const ParameterGrid& grid, DesignVector& x);

// Per-gene uniform crossover: each gene comes from `a` or `b` with equal
// probability. Offspring indices stay on the grid by construction.
DesignVector uniform_crossover(const DesignVector& a, const DesignVector& b, std::mt19937_64& rng);

// Per-gene mutation: with probability p_m, re-draw the index uniformly from
// that gene's grid.
void mutate_design(const ParameterGrid& grid, DesignVector& x, double p_m, std::mt19937_64& rng);

// Linear rank-based mutation probability: rank 1 mutates at p_m_max and rank
// n_pop not at all, interpolating in between. n_pop == 1 degenerates to
// p_m_max. Which end of the fitness ordering gets rank 1 is a config choice
// (`rank_worst_first`).
double rank_mutation_probability(int rank, int n_pop, double p_m_max);

struct GAConfig {
  int n_pop = 300;
  double p_c = 0.4;        // probability a child is produced by crossover
  double p_m_max = 0.8;    // mutation probability at rank 1
  double penalty = 1e5;    // static penalty constant per violation unit
  int stall_window = 20;   // stop after this many non-improving generations
  int max_generations = 300;
  std::uint64_t seed = 42;
  int workers = 1;
  Strategy strategy = Strategy::code_limits;
  // Rank orientation: true ranks the worst chromosome 1 (it mutates at
  // p_m_max while the best barely mutates); false reverses the reading.
  bool rank_worst_first = true;
  // Penalty units: false sums raw violations (MPa, mm and degrees mixed,
  // one shared constant); true divides each violation by its limit first.
  bool normalized_penalty = false;
  // Fitness assigned to designs whose evaluation fails. <= 0 means the
  // default 1e5 t, ten times the 1e4 t bound assumed for any feasible mass;
  // drivers with a real model substitute ten times the grid-maximum mass.
  double sentinel_fitness = 0.0;

  void validate() const;  // throws ConfigError
};

// Outcome of evaluating one design. `ok == false` marks a failed solve; the
// design stays in the population at the sentinel fitness, never dropped.
struct Evaluation {
  bool ok = false;
  double mass_t = 0.0;
  ResponseScalars scalars;
  std::string note;  // failure reason when !ok
};

using Evaluator = std::function<Evaluation(const DesignVector&)>;

struct FitnessValue {
  double fitness = 0.0;  // mass + penalty * violation sum (tons-equivalent)
  bool feasible = false;
  bool failed = false;   // evaluation failure -> sentinel fitness
  StrategyReport report; // per-constraint values/margins (empty when failed)
};

// Static-penalty fitness. A feasible design scores exactly its mass;
// `baseline` is required for strategies 1 and 2.
FitnessValue penalized_fitness(const Evaluation& ev, const GAConfig& cfg,
                               const ResponseScalars* baseline);

// 1-based Eq-style ranks from penalized fitness values: with `worst_first`,
// rank 1 is the highest fitness (ties broken by population index).
std::vector<int> assign_ranks(const std::vector<double>& fitness, bool worst_first);

struct GAGeneration {
  int generation = 0;  // 1-based
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  DesignVector best;
  double best_mass_t = 0.0;
  bool best_feasible = false;
  bool best_failed = false;
  StrategyReport best_report;
  std::vector<double> sigma;  // per-parameter deviation of the best (NaN if undefined)
};

struct GAResult {
  std::vector<GAGeneration> generations;  // best fitness is non-increasing
  DesignVector best;
  Evaluation best_eval;
  FitnessValue best_fitness;
  std::string stop_reason;  // "stall" or "generation cap"
  double sentinel_fitness = 0.0;  // resolved sentinel actually used
  int evaluations = 0;            // unique designs solved (cache misses)
  int cache_hits = 0;
};

// Runs the GA against an arbitrary evaluator (the real model or a surrogate).
//   * `x0`, if given, is injected into the otherwise uniform-random initial
//     population as a known anchor;
//   * `baseline` supplies the reference responses for strategies 1 and 2;
//   * `baseline_values_mm`, if given (one physical value per parameter,
//     off-grid allowed), enables the per-generation deviation traces
//     sigma_i = (X_i - X_i0) / X_i0.
// Same seed and config give identical results at any worker count. An
// all-infeasible population is ranked by penalty and evolution proceeds.
GAResult run_ga(const ParameterGrid& grid, const GAConfig& cfg, const Evaluator& evaluate,
                const DesignVector* x0 = nullptr, const ResponseScalars* baseline = nullptr,
                const std::vector<double>* baseline_values_mm = nullptr);

// Per-parameter relative deviations of each generation's best design.
struct DeviationEntry {
  std::string label;
  double baseline_mm = 0.0;
  double final_mm = 0.0;
  double sigma = 0.0;
  bool defined = true;    // false when the baseline value is zero
  bool flagged = false;   // |sigma| >= 0.3
};

struct DeviationReport {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> sigma;  // [generation][parameter]
  std::vector<DeviationEntry> final_entries;
};

DeviationReport parameter_deviation_report(const GAResult& result, const ParameterGrid& grid,
                                           const std::vector<double>& baseline_values_mm);

// ---------------------------------------------------------------------------
// Jacket driver: ties the GA to the simulation pipeline.

struct JacketGAOutcome {
  ParameterGrid grid;
  GAConfig config;               // resolved (sentinel filled in)
  DesignVector x0;               // as-built design snapped onto the grid
  std::vector<double> baseline_values_mm;  // true as-built values per parameter
  double baseline_mass_t = 0.0;
  ResponseScalars baseline;      // computed from the as-built design
  GAResult result;
  DeviationReport deviations;
};

// Reads the as-built values for every grid parameter off the model
// (diameters, thicknesses, base width). Throws ConfigError for labels the
// model does not carry.
std::vector<double> baseline_values(const ParameterGrid& grid, const JacketParams& params);

// Applies a decoded design to a copy of the base model.
JacketParams apply_design(const JacketParams& base, const ParameterGrid& grid,
                          const DesignVector& x);

// Full optimization run on the real model: computes the as-built baseline
// responses, snaps the as-built design onto the grid as the anchor, sets the
// failure sentinel to ten times the grid-maximum mass, runs the GA and
// attaches the deviation report.
JacketGAOutcome optimize_jacket(const SimInputs& in, const ParameterGrid& grid, GAConfig cfg,
                                const SimOptions& opt);

// ---------------------------------------------------------------------------
// Configuration file and report writers.

struct GAFile {
  GAConfig config;
  ParameterGrid grid;
  int attempts = 1;
};

// Reads a GA configuration file: {"config": {...}, "parameters": [{"label",
// "lower_mm", "upper_mm", "interval_mm"}, ...]}. Unknown keys are rejected;
// "rank_direction" takes "worst_first" or "best_first"; "strategy", "seed",
// "workers" and "attempts" are optional and typically overridden by flags.
GAFile parse_ga_file(const std::string& path);

// generation, best/mean fitness, best mass, feasibility and the best design's
// constraint margins, one row per generation.
std::string ga_history_csv(const GAResult& result);
void write_ga_history_csv(const GAResult& result, const std::string& path);

// generation, then one sigma column per parameter (blank where undefined).
std::string deviations_csv(const DeviationReport& report);
void write_deviations_csv(const DeviationReport& report, const std::string& path);

// Baseline vs optimum summary: masses, the five response scalars, margins,
// the flagged parameters and the run bookkeeping.
std::string ga_summary_json(const JacketGAOutcome& outcome);
void write_ga_summary_json(const JacketGAOutcome& outcome, const std::string& path);

}  // namespace jacketopt
