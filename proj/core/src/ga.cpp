#include "jacketopt/ga.hpp"

#include "jacketopt/errors.hpp"
#include "jsonio.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

namespace jacketopt {

namespace {

// Sentinel used when the config does not resolve one: ten times the 1e4 t
// mass bound assumed of any feasible jacket design.
constexpr double kDefaultSentinel = 1e5;

std::string format_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid machinery.

int GridParam::size() const {
  return static_cast<int>(std::llround((upper_mm - lower_mm) / interval_mm)) + 1;
}

double GridParam::value(int idx) const { return lower_mm + idx * interval_mm; }

int GridParam::snap(double v_mm) const {
  const double p = (v_mm - lower_mm) / interval_mm;
  const int idx = static_cast<int>(std::floor(p + 0.5));  // ties round up
  return std::clamp(idx, 0, size() - 1);
}

void ParameterGrid::validate() const {
  if (params.empty()) throw ConfigError("parameter grid is empty");
  std::set<std::string> seen;
  for (const auto& g : params) {
    if (g.label.empty()) throw ConfigError("parameter grid entry without a label");
    if (!seen.insert(g.label).second)
      throw ConfigError("duplicate grid parameter: " + g.label);
    if (g.interval_mm <= 0.0)
      throw ConfigError("grid interval must be positive for " + g.label);
    if (g.upper_mm <= g.lower_mm)
      throw ConfigError("grid upper limit must exceed the lower limit for " + g.label);
    const double span = (g.upper_mm - g.lower_mm) / g.interval_mm;
    if (std::fabs(span - std::llround(span)) > 1e-9 * std::max(1.0, span))
      throw ConfigError("grid span of " + g.label + " is not divisible by its interval (" +
                        format_num(g.lower_mm) + ".." + format_num(g.upper_mm) + " step " +
                        format_num(g.interval_mm) + ")");
    if (g.size() < 2) throw ConfigError("grid for " + g.label + " needs at least two values");
  }
  // Every diameter grid must admit a repairing thickness: the smallest
  // diameter has to clear d > 2t at the smallest thickness on offer.
  for (const auto& g : params) {
    if (g.label.size() < 2 || g.label.substr(g.label.size() - 2) != "-d") continue;
    const int ti = index_of(g.label.substr(0, g.label.size() - 2) + "-t");
    if (ti < 0) continue;
    const GridParam& t = params[ti];
    if (g.lower_mm <= 2.0 * t.lower_mm)
      throw ConfigError("grids for " + g.label + " and " + t.label +
                        " leave no wall thickness with d > 2t at d = " +
                        format_num(g.lower_mm));
  }
}

int ParameterGrid::index_of(const std::string& label) const {
  for (size_t i = 0; i < params.size(); ++i)
    if (params[i].label == label) return static_cast<int>(i);
  return -1;
}

std::vector<ParamOverride> decode_design(const ParameterGrid& grid, const DesignVector& x) {
  if (x.size() != grid.params.size())
    throw ConfigError("design vector length " + std::to_string(x.size()) +
                      " does not match the grid (" + std::to_string(grid.params.size()) + ")");
  std::vector<ParamOverride> out;
  out.reserve(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const GridParam& g = grid.params[i];
    if (x[i] < 0 || x[i] >= g.size())
      throw ConfigError("grid index " + std::to_string(x[i]) + " out of range for " + g.label);
    out.push_back({g.label, g.value(x[i])});
  }
  return out;
}

DesignVector snap_to_grid(const ParameterGrid& grid, const std::vector<double>& values_mm) {
  if (values_mm.size() != grid.params.size())
    throw ConfigError("value list length does not match the grid");
  DesignVector x(values_mm.size());
  for (size_t i = 0; i < values_mm.size(); ++i) x[i] = grid.params[i].snap(values_mm[i]);
  return x;
}

void repair_design(const ParameterGrid& grid, DesignVector& x) {
  if (x.size() != grid.params.size())
    throw ConfigError("design vector length does not match the grid");
  for (size_t i = 0; i < grid.params.size(); ++i) {
    const GridParam& t = grid.params[i];
    if (t.label.size() < 2 || t.label.substr(t.label.size() - 2) != "-t") continue;
    const int di = grid.index_of(t.label.substr(0, t.label.size() - 2) + "-d");
    if (di < 0) continue;
    const double d = grid.params[di].value(x[di]);
    while (x[i] > 0 && d <= 2.0 * t.value(x[i])) --x[i];
    if (d <= 2.0 * t.value(x[i]))
      throw ConfigError("no wall thickness on the " + t.label + " grid satisfies d > 2t for d = " +
                        format_num(d));
  }
}

DesignVector uniform_crossover(const DesignVector& a, const DesignVector& b,
                               std::mt19937_64& rng) {
  if (a.size() != b.size()) throw ConfigError("crossover parents differ in length");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  DesignVector child(a.size());
  for (size_t i = 0; i < a.size(); ++i) child[i] = unit(rng) < 0.5 ? a[i] : b[i];
  return child;
}

void mutate_design(const ParameterGrid& grid, DesignVector& x, double p_m,
                   std::mt19937_64& rng) {
  if (x.size() != grid.params.size())
    throw ConfigError("design vector length does not match the grid");
  if (p_m <= 0.0) return;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (size_t i = 0; i < x.size(); ++i) {
    if (unit(rng) >= p_m) continue;
    std::uniform_int_distribution<int> draw(0, grid.params[i].size() - 1);
    x[i] = draw(rng);
  }
}

double rank_mutation_probability(int rank, int n_pop, double p_m_max) {
  if (n_pop < 1) throw ConfigError("population size must be positive");
  if (rank < 1 || rank > n_pop)
    throw ConfigError("rank " + std::to_string(rank) + " outside 1.." + std::to_string(n_pop));
  if (n_pop == 1) return p_m_max;  // degenerate population: full mutation
  return p_m_max * (1.0 - double(rank - 1) / double(n_pop - 1));
}

// ---------------------------------------------------------------------------
// Fitness.

void GAConfig::validate() const {
  if (n_pop < 2) throw ConfigError("population size must be at least 2");
  if (p_c < 0.0 || p_c > 1.0) throw ConfigError("crossover probability outside [0, 1]");
  if (p_m_max < 0.0 || p_m_max > 1.0)
    throw ConfigError("maximum mutation probability outside [0, 1]");
  if (penalty <= 0.0) throw ConfigError("penalty constant must be positive");
  if (stall_window < 1) throw ConfigError("stall window must be at least 1 generation");
  if (max_generations < 1) throw ConfigError("generation cap must be at least 1");
  if (workers < 1) throw ConfigError("worker count must be at least 1");
  strategy_to_int(strategy);  // rejects out-of-range values
}

FitnessValue penalized_fitness(const Evaluation& ev, const GAConfig& cfg,
                               const ResponseScalars* baseline) {
  FitnessValue v;
  if (!ev.ok) {
    v.failed = true;
    v.fitness = cfg.sentinel_fitness > 0.0 ? cfg.sentinel_fitness : kDefaultSentinel;
    return v;
  }
  v.report = check_strategy(ev.scalars, cfg.strategy, baseline);
  v.feasible = v.report.pass;
  double violation = 0.0;
  if (cfg.normalized_penalty) {
    for (const auto& c : v.report.checks) {
      const double raw = std::max(0.0, c.value - c.limit);
      violation += c.limit > 0.0 ? raw / c.limit : raw;
    }
  } else {
    violation = v.report.total_violation;
  }
  v.fitness = ev.mass_t + cfg.penalty * violation;
  return v;
}

std::vector<int> assign_ranks(const std::vector<double>& fitness, bool worst_first) {
  std::vector<int> order(fitness.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return worst_first ? fitness[a] > fitness[b] : fitness[a] < fitness[b];
  });
  std::vector<int> ranks(fitness.size());
  for (size_t k = 0; k < order.size(); ++k) ranks[order[k]] = static_cast<int>(k) + 1;
  return ranks;
}

// ---------------------------------------------------------------------------
// The evolutionary loop.

namespace {

// Solves every not-yet-seen design of the generation on the worker pool and
// merges the results into the cache in population order, so the cache state
// never depends on scheduling. RNG is untouched here.
void evaluate_generation(const std::vector<DesignVector>& pop,
                         std::map<DesignVector, Evaluation>& cache, const Evaluator& evaluate,
                         int workers, int& evaluations, int& cache_hits) {
  std::vector<const DesignVector*> todo;
  std::set<DesignVector> queued;
  for (const auto& x : pop) {
    if (cache.count(x) || !queued.insert(x).second) {
      ++cache_hits;
      continue;
    }
    todo.push_back(&x);
  }
  std::vector<Evaluation> results(todo.size());
  auto solve_one = [&](size_t i) {
    try {
      results[i] = evaluate(*todo[i]);
    } catch (const std::exception& e) {
      results[i].ok = false;
      results[i].note = e.what();
    }
  };
  if (workers <= 1 || todo.size() <= 1) {
    for (size_t i = 0; i < todo.size(); ++i) solve_one(i);
  } else {
    std::atomic<size_t> next{0};
    auto drain = [&] {
      for (size_t i = next.fetch_add(1); i < todo.size(); i = next.fetch_add(1)) solve_one(i);
    };
    std::vector<std::thread> pool;
    const size_t n = std::min<size_t>(workers, todo.size());
    pool.reserve(n);
    for (size_t i = 0; i < n; ++i) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }
  for (size_t i = 0; i < todo.size(); ++i) cache.emplace(*todo[i], std::move(results[i]));
  evaluations += static_cast<int>(todo.size());
}

}  // namespace

GAResult run_ga(const ParameterGrid& grid, const GAConfig& cfg, const Evaluator& evaluate,
                const DesignVector* x0, const ResponseScalars* baseline,
                const std::vector<double>* baseline_values_mm) {
  grid.validate();
  cfg.validate();
  const size_t np = grid.params.size();
  if (cfg.strategy != Strategy::code_limits && baseline == nullptr)
    throw ConfigError("strategies 1 and 2 need baseline responses");
  if (baseline_values_mm && baseline_values_mm->size() != np)
    throw ConfigError("baseline value list does not match the grid");

  GAResult out;
  out.sentinel_fitness = cfg.sentinel_fitness > 0.0 ? cfg.sentinel_fitness : kDefaultSentinel;
  GAConfig resolved = cfg;
  resolved.sentinel_fitness = out.sentinel_fitness;

  std::mt19937_64 rng(cfg.seed);

  // Initial population: the anchor design (if any) plus uniform random draws.
  std::vector<DesignVector> pop;
  pop.reserve(cfg.n_pop);
  if (x0) {
    DesignVector v = *x0;
    decode_design(grid, v);  // bounds check
    repair_design(grid, v);
    pop.push_back(std::move(v));
  }
  while (static_cast<int>(pop.size()) < cfg.n_pop) {
    DesignVector v(np);
    for (size_t j = 0; j < np; ++j) {
      std::uniform_int_distribution<int> draw(0, grid.params[j].size() - 1);
      v[j] = draw(rng);
    }
    repair_design(grid, v);
    pop.push_back(std::move(v));
  }

  std::map<DesignVector, Evaluation> cache;
  double best_so_far = std::numeric_limits<double>::infinity();
  int stall = 0;

  for (int gen = 1; gen <= cfg.max_generations; ++gen) {
    evaluate_generation(pop, cache, evaluate, cfg.workers, out.evaluations, out.cache_hits);

    std::vector<FitnessValue> fit(pop.size());
    std::vector<double> f(pop.size());
    for (size_t i = 0; i < pop.size(); ++i) {
      fit[i] = penalized_fitness(cache.at(pop[i]), resolved, baseline);
      f[i] = fit[i].fitness;
    }
    size_t bi = 0;
    double mean = 0.0;
    for (size_t i = 0; i < pop.size(); ++i) {
      if (f[i] < f[bi]) bi = i;
      mean += f[i];
    }
    mean /= double(pop.size());

    GAGeneration g;
    g.generation = gen;
    g.best_fitness = f[bi];
    g.mean_fitness = mean;
    g.best = pop[bi];
    const Evaluation& best_ev = cache.at(pop[bi]);
    g.best_mass_t = best_ev.ok ? best_ev.mass_t : 0.0;
    g.best_feasible = fit[bi].feasible;
    g.best_failed = fit[bi].failed;
    g.best_report = fit[bi].report;
    if (baseline_values_mm) {
      g.sigma.resize(np);
      for (size_t j = 0; j < np; ++j) {
        const double b = (*baseline_values_mm)[j];
        g.sigma[j] = b != 0.0 ? (grid.params[j].value(pop[bi][j]) - b) / b
                              : std::numeric_limits<double>::quiet_NaN();
      }
    }
    out.generations.push_back(std::move(g));

    if (f[bi] < best_so_far) {
      best_so_far = f[bi];
      out.best = pop[bi];
      out.best_eval = best_ev;
      out.best_fitness = fit[bi];
      stall = 0;
    } else {
      ++stall;
    }
    if (stall >= cfg.stall_window) {
      out.stop_reason = "stall";
      break;
    }
    if (gen == cfg.max_generations) {
      out.stop_reason = "generation cap";
      break;
    }

    // Breed the next generation: carry the best unchanged, then fill with
    // tournament winners, crossed over with probability p_c and mutated at
    // the primary parent's rank probability.
    const std::vector<int> ranks = assign_ranks(f, cfg.rank_worst_first);
    std::uniform_int_distribution<int> pick(0, cfg.n_pop - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto tournament = [&] {
      const int i = pick(rng), j = pick(rng);
      return f[i] <= f[j] ? i : j;
    };
    std::vector<DesignVector> next;
    next.reserve(cfg.n_pop);
    next.push_back(pop[bi]);
    while (static_cast<int>(next.size()) < cfg.n_pop) {
      const int pa = tournament();
      DesignVector child;
      if (unit(rng) < cfg.p_c) {
        child = uniform_crossover(pop[pa], pop[tournament()], rng);
      } else {
        child = pop[pa];
      }
      mutate_design(grid, child, rank_mutation_probability(ranks[pa], cfg.n_pop, cfg.p_m_max),
                    rng);
      repair_design(grid, child);
      next.push_back(std::move(child));
    }
    pop = std::move(next);
  }
  return out;
}

DeviationReport parameter_deviation_report(const GAResult& result, const ParameterGrid& grid,
                                           const std::vector<double>& baseline_values_mm) {
  if (result.generations.empty()) throw ConfigError("deviation report needs a non-empty history");
  if (baseline_values_mm.size() != grid.params.size())
    throw ConfigError("baseline value list does not match the grid");

  DeviationReport rep;
  rep.labels.reserve(grid.params.size());
  for (const auto& g : grid.params) rep.labels.push_back(g.label);

  rep.sigma.reserve(result.generations.size());
  for (const auto& gen : result.generations) {
    std::vector<double> row(grid.params.size());
    for (size_t j = 0; j < grid.params.size(); ++j) {
      const double b = baseline_values_mm[j];
      row[j] = b != 0.0 ? (grid.params[j].value(gen.best[j]) - b) / b
                        : std::numeric_limits<double>::quiet_NaN();
    }
    rep.sigma.push_back(std::move(row));
  }

  const GAGeneration& last = result.generations.back();
  for (size_t j = 0; j < grid.params.size(); ++j) {
    DeviationEntry e;
    e.label = grid.params[j].label;
    e.baseline_mm = baseline_values_mm[j];
    e.final_mm = grid.params[j].value(last.best[j]);
    if (e.baseline_mm == 0.0) {
      e.defined = false;
      e.sigma = std::numeric_limits<double>::quiet_NaN();
    } else {
      e.sigma = (e.final_mm - e.baseline_mm) / e.baseline_mm;
      e.flagged = std::fabs(e.sigma) >= 0.3;
    }
    rep.final_entries.push_back(std::move(e));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Jacket driver.

std::vector<double> baseline_values(const ParameterGrid& grid, const JacketParams& params) {
  std::vector<double> out;
  out.reserve(grid.params.size());
  for (const auto& g : grid.params) {
    if (g.label == "BW") {
      out.push_back(params.base_width_mm);
      continue;
    }
    if (g.label.size() < 3 || g.label[g.label.size() - 2] != '-')
      throw ConfigError("grid parameter " + g.label + " is not of the form <label>-d/-t or BW");
    const char field = g.label.back();
    const SectionDef* sec = params.sections.find(g.label.substr(0, g.label.size() - 2));
    if (!sec) throw ConfigError("grid parameter " + g.label + " names an unknown section");
    if (field == 'd') {
      out.push_back(sec->d_start_mm);
    } else if (field == 't') {
      out.push_back(sec->t_mm);
    } else {
      throw ConfigError("grid parameter " + g.label + " must end in -d or -t");
    }
  }
  return out;
}

JacketParams apply_design(const JacketParams& base, const ParameterGrid& grid,
                          const DesignVector& x) {
  JacketParams p = base;
  apply_overrides(p, decode_design(grid, x));
  return p;
}

JacketGAOutcome optimize_jacket(const SimInputs& in, const ParameterGrid& grid, GAConfig cfg,
                                const SimOptions& opt) {
  grid.validate();

  JacketGAOutcome out;
  out.grid = grid;

  const SimResult base_sim = simulate_variant(in, {}, opt);
  out.baseline_mass_t = base_sim.mass_t;
  out.baseline = governing_scalars(base_sim.response);

  out.baseline_values_mm = baseline_values(grid, in.params);
  out.x0 = snap_to_grid(grid, out.baseline_values_mm);
  repair_design(grid, out.x0);

  if (cfg.sentinel_fitness <= 0.0) {
    DesignVector xmax(grid.params.size());
    for (size_t j = 0; j < xmax.size(); ++j) xmax[j] = grid.params[j].size() - 1;
    repair_design(grid, xmax);
    const JacketParams pmax = apply_design(in.params, grid, xmax);
    cfg.sentinel_fitness = 10.0 * compute_mass_t(pmax, generate_mesh(pmax));
  }
  out.config = cfg;

  const Evaluator evaluate = [&in, &grid, &opt](const DesignVector& x) {
    Evaluation e;
    try {
      const SimResult sim = simulate_variant(in, decode_design(grid, x), opt);
      e.ok = true;
      e.mass_t = sim.mass_t;
      e.scalars = governing_scalars(sim.response);
    } catch (const std::exception& ex) {
      e.ok = false;
      e.note = ex.what();
    }
    return e;
  };
  out.result = run_ga(grid, cfg, evaluate, &out.x0, &out.baseline, &out.baseline_values_mm);
  out.deviations = parameter_deviation_report(out.result, grid, out.baseline_values_mm);
  return out;
}

// ---------------------------------------------------------------------------
// Configuration file and writers.

GAFile parse_ga_file(const std::string& path) {
  const jsonio::json root = jsonio::load_file(path);
  jsonio::check_keys(root, path, {"parameters"}, {"config", "attempts", "note"});

  GAFile out;
  if (root.contains("config")) {
    const jsonio::json& c = root["config"];
    jsonio::check_keys(c, path + " config", {},
                       {"n_pop", "p_c", "p_m_max", "penalty", "stall_window", "max_generations",
                        "seed", "workers", "strategy", "rank_direction", "normalized_penalty",
                        "sentinel_fitness"});
    GAConfig& g = out.config;
    g.n_pop = static_cast<int>(jsonio::get_num_or(c, "n_pop", g.n_pop));
    g.p_c = jsonio::get_num_or(c, "p_c", g.p_c);
    g.p_m_max = jsonio::get_num_or(c, "p_m_max", g.p_m_max);
    g.penalty = jsonio::get_num_or(c, "penalty", g.penalty);
    g.stall_window = static_cast<int>(jsonio::get_num_or(c, "stall_window", g.stall_window));
    g.max_generations =
        static_cast<int>(jsonio::get_num_or(c, "max_generations", g.max_generations));
    g.seed = static_cast<std::uint64_t>(jsonio::get_num_or(c, "seed", double(g.seed)));
    g.workers = static_cast<int>(jsonio::get_num_or(c, "workers", g.workers));
    if (c.contains("strategy"))
      g.strategy = strategy_from_int(static_cast<int>(jsonio::get_num(c, path, "strategy")));
    if (c.contains("rank_direction")) {
      const std::string dir = jsonio::get_str(c, path, "rank_direction");
      if (dir == "worst_first") {
        g.rank_worst_first = true;
      } else if (dir == "best_first") {
        g.rank_worst_first = false;
      } else {
        throw ConfigError(path + ": rank_direction must be worst_first or best_first");
      }
    }
    if (c.contains("normalized_penalty")) {
      if (!c["normalized_penalty"].is_boolean())
        throw ConfigError(path + ": normalized_penalty must be a boolean");
      g.normalized_penalty = c["normalized_penalty"].get<bool>();
    }
    g.sentinel_fitness = jsonio::get_num_or(c, "sentinel_fitness", g.sentinel_fitness);
  }
  if (root.contains("attempts")) {
    out.attempts = static_cast<int>(jsonio::get_num(root, path, "attempts"));
    if (out.attempts < 1) throw ConfigError(path + ": attempts must be at least 1");
  }

  if (!root["parameters"].is_array())
    throw ConfigError(path + ": parameters must be an array");
  for (const auto& p : root["parameters"]) {
    jsonio::check_keys(p, path + " parameter", {"label", "lower_mm", "upper_mm", "interval_mm"});
    GridParam g;
    g.label = jsonio::get_str(p, path, "label");
    g.lower_mm = jsonio::get_num(p, path, "lower_mm");
    g.upper_mm = jsonio::get_num(p, path, "upper_mm");
    g.interval_mm = jsonio::get_num(p, path, "interval_mm");
    out.grid.params.push_back(std::move(g));
  }
  out.grid.validate();
  out.config.validate();
  return out;
}

std::string ga_history_csv(const GAResult& result) {
  // Margin columns follow the first generation whose best design produced a
  // constraint report (an all-failed run has none).
  std::vector<std::string> margin_names;
  for (const auto& g : result.generations) {
    if (g.best_failed) continue;
    for (const auto& c : g.best_report.checks) margin_names.push_back(c.name);
    break;
  }

  std::ostringstream os;
  os << "generation,best_fitness,mean_fitness,best_mass_t,best_feasible";
  for (const auto& n : margin_names) os << ",margin_" << n;
  os << '\n';
  for (const auto& g : result.generations) {
    os << g.generation << ',' << format_num(g.best_fitness) << ',' << format_num(g.mean_fitness)
       << ',' << (g.best_failed ? "" : format_num(g.best_mass_t)) << ','
       << (g.best_feasible ? 1 : 0);
    for (const auto& n : margin_names) {
      os << ',';
      for (const auto& c : g.best_report.checks) {
        if (c.name == n) {
          os << format_num(c.margin);
          break;
        }
      }
    }
    os << '\n';
  }
  return os.str();
}

void write_ga_history_csv(const GAResult& result, const std::string& path) {
  jsonio::write_file_atomic(path, ga_history_csv(result));
}

std::string deviations_csv(const DeviationReport& report) {
  std::ostringstream os;
  os << "generation";
  for (const auto& l : report.labels) os << ',' << l;
  os << '\n';
  for (size_t g = 0; g < report.sigma.size(); ++g) {
    os << (g + 1);
    for (double s : report.sigma[g]) {
      os << ',';
      if (!std::isnan(s)) os << format_num(s);
    }
    os << '\n';
  }
  return os.str();
}

void write_deviations_csv(const DeviationReport& report, const std::string& path) {
  jsonio::write_file_atomic(path, deviations_csv(report));
}

std::string ga_summary_json(const JacketGAOutcome& outcome) {
  using jsonio::json;
  const GAResult& res = outcome.result;

  json scalars_base;
  scalars_base["mass_t"] = outcome.baseline_mass_t;
  scalars_base["max_stress_mpa"] = outcome.baseline.stress_mpa;
  scalars_base["u_max_mm"] = outcome.baseline.u_max_mm;
  scalars_base["u_mudline_mm"] = outcome.baseline.u_mudline_mm;
  scalars_base["phi_max_deg"] = outcome.baseline.phi_max_deg;
  scalars_base["phi_mudline_deg"] = outcome.baseline.phi_mudline_deg;

  json best;
  best["fitness"] = res.best_fitness.fitness;
  best["feasible"] = res.best_fitness.feasible;
  best["failed"] = res.best_fitness.failed;
  if (res.best_eval.ok) {
    best["mass_t"] = res.best_eval.mass_t;
    best["max_stress_mpa"] = res.best_eval.scalars.stress_mpa;
    best["u_max_mm"] = res.best_eval.scalars.u_max_mm;
    best["u_mudline_mm"] = res.best_eval.scalars.u_mudline_mm;
    best["phi_max_deg"] = res.best_eval.scalars.phi_max_deg;
    best["phi_mudline_deg"] = res.best_eval.scalars.phi_mudline_deg;
    json margins = json::object();
    for (const auto& c : res.best_fitness.report.checks) margins[c.name] = c.margin;
    best["margins"] = margins;
  }
  json params = json::object();
  for (size_t j = 0; j < outcome.grid.params.size(); ++j)
    params[outcome.grid.params[j].label] = outcome.grid.params[j].value(res.best[j]);

  json flagged = json::array();
  for (const auto& e : outcome.deviations.final_entries) {
    if (!e.flagged) continue;
    json f;
    f["label"] = e.label;
    f["baseline_mm"] = e.baseline_mm;
    f["final_mm"] = e.final_mm;
    f["sigma"] = e.sigma;
    flagged.push_back(f);
  }

  json root;
  root["strategy"] = strategy_to_int(outcome.config.strategy);
  root["seed"] = outcome.config.seed;
  root["n_pop"] = outcome.config.n_pop;
  root["penalty"] = outcome.config.penalty;
  root["stop_reason"] = res.stop_reason;
  root["generations"] = res.generations.size();
  root["evaluations"] = res.evaluations;
  root["cache_hits"] = res.cache_hits;
  root["sentinel_fitness"] = res.sentinel_fitness;
  root["baseline"] = scalars_base;
  root["best"] = best;
  if (res.best_eval.ok) {
    root["mass_reduction_t"] = outcome.baseline_mass_t - res.best_eval.mass_t;
    root["mass_reduction_pct"] =
        100.0 * (outcome.baseline_mass_t - res.best_eval.mass_t) / outcome.baseline_mass_t;
  }
  root["best_parameters_mm"] = params;
  root["flagged_parameters"] = flagged;
  return root.dump(2) + "\n";
}

void write_ga_summary_json(const JacketGAOutcome& outcome, const std::string& path) {
  jsonio::write_file_atomic(path, ga_summary_json(outcome));
}

}  // namespace jacketopt
