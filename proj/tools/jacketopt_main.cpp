// Command-line front end tying the pipeline together:
//   gen       parse a design, generate the beam mesh, dump it
//   simulate  solve one design under a load combination and water level
//   sweep     run a parameter study and fit response-vs-mass gradients
//   optimize  GA mass minimization under a constraint strategy
//   report    comparison tables across results and optimization runs
// Every run writes a manifest with input digests so outputs are reproducible
// from the recorded inputs plus the seed.

#include <CLI11.hpp>

#include "jacketopt/errors.hpp"
#include "jacketopt/ga.hpp"
#include "jacketopt/manifest.hpp"
#include "jacketopt/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace jacketopt;

namespace {

struct GlobalArgs {
  std::uint64_t seed = 42;
  bool seed_given = false;
  int workers = 1;
  bool workers_given = false;
  std::string out = ".";
};

struct InputArgs {
  std::string model, sections, material, soil, loads, waves, cs_table;
  std::vector<std::string> sets;  // PARAM=VALUE overrides
};

struct CaseArgs {
  std::string combination = "ULS";
  std::string water_level = "HWL";
  std::string support = "spring";
};

std::string join_command(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    const std::string a = argv[i];
    s += a.find(' ') == std::string::npos ? a : '"' + a + '"';
  }
  return s;
}

std::vector<ParamOverride> parse_sets(const std::vector<std::string>& sets) {
  std::vector<ParamOverride> out;
  for (const std::string& s : sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ConfigError("--set wants PARAM=VALUE, got \"" + s + "\"");
    ParamOverride ov;
    ov.param = s.substr(0, eq);
    const std::string val = s.substr(eq + 1);
    size_t used = 0;
    try {
      ov.value = std::stod(val, &used);
    } catch (const std::exception&) {
      throw ConfigError("--set " + ov.param + ": \"" + val + "\" is not a number");
    }
    if (used != val.size())
      throw ConfigError("--set " + ov.param + ": \"" + val + "\" is not a number");
    out.push_back(std::move(ov));
  }
  return out;
}

void add_model_options(CLI::App* cmd, InputArgs& in) {
  cmd->add_option("--model", in.model, "jacket geometry file (model.jct.json)")->required();
  cmd->add_option("--sections", in.sections, "tube section table (sections.sec.json)")
      ->required();
  cmd->add_option("--material", in.material, "material properties file")->required();
  cmd->add_option("--set", in.sets,
                  "design override PARAM=VALUE (e.g. BW=32500 or SB1-t=55); repeatable");
}

void add_sim_options(CLI::App* cmd, InputArgs& in, CaseArgs& c) {
  add_model_options(cmd, in);
  cmd->add_option("--soil", in.soil, "soil layer profile")->required();
  cmd->add_option("--loads", in.loads, "load cases and combinations")->required();
  cmd->add_option("--waves", in.waves, "wave scenarios and water levels")->required();
  cmd->add_option("--cs-table", in.cs_table, "hydrodynamic coefficient table (optional)");
  cmd->add_option("--combination", c.combination, "load combination name (default ULS)");
  cmd->add_option("--water-level", c.water_level, "design water level")
      ->check(CLI::IsMember({"LWL", "MWL", "HWL"}));
  cmd->add_option("--support", c.support, "mudline support model")
      ->check(CLI::IsMember({"spring", "fixed"}));
}

SimInputs load_inputs(const InputArgs& in, RunManifest& man) {
  SimInputPaths p;
  p.model = in.model;
  p.sections = in.sections;
  p.material = in.material;
  p.soil = in.soil;
  p.loads = in.loads;
  p.waves = in.waves;
  p.cs_table = in.cs_table;
  man.add_input(in.model);
  man.add_input(in.sections);
  man.add_input(in.material);
  man.add_input(in.soil);
  man.add_input(in.loads);
  man.add_input(in.waves);
  if (!in.cs_table.empty()) man.add_input(in.cs_table);
  return load_sim_inputs(p);
}

SimOptions make_options(const CaseArgs& c) {
  SimOptions opt;
  opt.combination = c.combination;
  opt.water_level = c.water_level;
  opt.support = c.support == "fixed" ? Support::fixed : Support::spring;
  return opt;
}

void write_text(const std::string& path, const std::string& text, RunManifest& man) {
  std::ofstream out(path + ".tmp", std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  out.close();
  fs::rename(path + ".tmp", path);
  man.outputs.push_back(path);
}

// ---------------------------------------------------------------------------

int run_gen(const GlobalArgs& g, const InputArgs& in, double char_size, RunManifest& man) {
  // --out may name the mesh file directly (x.json) or a run directory.
  fs::path mesh_path, dir;
  if (fs::path(g.out).extension() == ".json") {
    mesh_path = g.out;
    dir = fs::path(g.out).parent_path();
  } else {
    dir = g.out;
    mesh_path = dir / "mesh.json";
  }
  if (!dir.empty()) fs::create_directories(dir);

  JacketParams params = parse_model_files(in.model, in.sections, in.material);
  man.add_input(in.model);
  man.add_input(in.sections);
  man.add_input(in.material);
  apply_overrides(params, parse_sets(in.sets));
  if (char_size > 0.0) params.mesh_size_mm = char_size;
  const Mesh mesh = generate_mesh(params);

  write_text(mesh_path.string(), serialize_mesh(params, mesh), man);
  std::printf("%s: %d components, %zu nodes, %zu elements, %.2f t\n",
              params.name.c_str(), mesh.component_count, mesh.nodes.size(),
              mesh.elements.size(), compute_mass_t(params, mesh));
  man.finished_utc = utc_timestamp();
  write_manifest(man, (dir / "manifest.json").string());
  return 0;
}

int run_simulate(const GlobalArgs& g, const InputArgs& in, const CaseArgs& c, RunManifest& man) {
  fs::create_directories(g.out);
  const SimInputs inputs = load_inputs(in, man);
  const SimOptions opt = make_options(c);
  const std::vector<ParamOverride> overrides = parse_sets(in.sets);

  const SimResult res = simulate_variant(inputs, overrides, opt);

  std::string label = inputs.params.name;
  if (!overrides.empty()) {
    label += " [";
    for (size_t i = 0; i < in.sets.size(); ++i) label += (i ? " " : "") + in.sets[i];
    label += "]";
  }
  write_text((fs::path(g.out) / "result.json").string(), result_json(label, opt, res), man);

  const ResponseScalars s = governing_scalars(res.response);
  std::printf("%s %s %s: mass %.2f t, stress %.2f MPa, u %.2f mm, u_mud %.2f mm, "
              "phi %.4f deg, phi_mud %.4f deg\n",
              c.combination.c_str(), c.water_level.c_str(), c.support.c_str(), res.mass_t,
              s.stress_mpa, s.u_max_mm, s.u_mudline_mm, s.phi_max_deg, s.phi_mudline_deg);
  for (const std::string& w : res.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  man.finished_utc = utc_timestamp();
  write_manifest(man, (fs::path(g.out) / "manifest.json").string());
  return 0;
}

int run_sweep(const GlobalArgs& g, const InputArgs& in, const CaseArgs& c,
              const std::string& kind, double from, double to, double step, bool range_given,
              const std::string& combinations, RunManifest& man) {
  fs::create_directories(g.out);
  const SimInputs inputs = load_inputs(in, man);

  SweepSpec spec;
  if (range_given && !combinations.empty())
    throw ConfigError("give either --from/--to/--step or --combinations, not both");
  if (range_given) {
    spec = make_range_sweep(kind, from, to, step);
  } else if (!combinations.empty()) {
    man.add_input(combinations);
    spec = make_combination_sweep(parse_combinations(combinations), kind);
  } else {
    throw ConfigError("sweep needs --from/--to/--step (PL, BW) or --combinations (BD, BT, LD, LT)");
  }
  spec.options = make_options(c);
  spec.workers = g.workers;

  const SweepTable table = run_sweep(inputs, spec);
  const GradientTable grads = fit_gradients({table});

  const fs::path dir = g.out;
  write_sweep_csv(table, (dir / "sweep.csv").string());
  man.outputs.push_back((dir / "sweep.csv").string());
  write_gradients_json(grads, (dir / "gradients.json").string());
  man.outputs.push_back((dir / "gradients.json").string());

  int ok = 0;
  for (const auto& row : table.rows) ok += row.ok ? 1 : 0;
  std::printf("%s sweep: %d/%zu points solved\n", spec.kind.c_str(), ok, table.rows.size());
  man.finished_utc = utc_timestamp();
  write_manifest(man, (dir / "manifest.json").string());
  return 0;
}

int run_optimize(const GlobalArgs& g, const InputArgs& in, const CaseArgs& c,
                 const std::string& ga_path, int strategy, int attempts_cli, RunManifest& man) {
  fs::create_directories(g.out);
  const SimInputs inputs = load_inputs(in, man);
  man.add_input(ga_path);
  const GAFile gaf = parse_ga_file(ga_path);

  GAConfig cfg = gaf.config;
  if (g.seed_given || cfg.seed == GAConfig{}.seed) cfg.seed = g.seed;
  if (g.workers_given || cfg.workers <= 1) cfg.workers = g.workers;
  if (strategy > 0) cfg.strategy = strategy_from_int(strategy);
  const int attempts = attempts_cli > 0 ? attempts_cli : gaf.attempts;

  const SimOptions opt = make_options(c);
  const fs::path base_dir = g.out;

  std::ostringstream attempts_csv;
  attempts_csv << "attempt,seed,generations,stop_reason,evaluations,best_mass_t,feasible,"
                  "mass_reduction_pct,max_stress_mpa,u_max_mm,phi_max_deg,phi_mudline_deg\n";

  for (int k = 0; k < attempts; ++k) {
    GAConfig ck = cfg;
    ck.seed = cfg.seed + static_cast<std::uint64_t>(k);
    const fs::path dir = attempts > 1 ? base_dir / ("attempt" + std::to_string(k + 1)) : base_dir;
    fs::create_directories(dir);

    const JacketGAOutcome outcome = optimize_jacket(inputs, gaf.grid, ck, opt);
    const GAResult& r = outcome.result;

    write_ga_history_csv(r, (dir / "ga_history.csv").string());
    man.outputs.push_back((dir / "ga_history.csv").string());
    write_deviations_csv(outcome.deviations, (dir / "deviations.csv").string());
    man.outputs.push_back((dir / "deviations.csv").string());
    write_ga_summary_json(outcome, (dir / "summary.json").string());
    man.outputs.push_back((dir / "summary.json").string());

    const JacketParams best = apply_design(inputs.params, gaf.grid, r.best);
    write_model(best, (dir / "best.jct.json").string());
    man.outputs.push_back((dir / "best.jct.json").string());
    write_sections(best.sections, (dir / "best.sec.json").string());
    man.outputs.push_back((dir / "best.sec.json").string());

    const double red =
        100.0 * (outcome.baseline_mass_t - r.best_eval.mass_t) / outcome.baseline_mass_t;
    std::printf("attempt %d (seed %llu): %zu generations (%s), best %.2f t (%.1f%% below "
                "baseline), %s\n",
                k + 1, static_cast<unsigned long long>(ck.seed), r.generations.size(),
                r.stop_reason.c_str(), r.best_eval.mass_t, red,
                r.best_fitness.feasible ? "feasible" : "infeasible");
    attempts_csv << (k + 1) << ',' << ck.seed << ',' << r.generations.size() << ','
                 << r.stop_reason << ',' << r.evaluations << ',' << r.best_eval.mass_t << ','
                 << (r.best_fitness.feasible ? 1 : 0) << ',' << red << ','
                 << r.best_eval.scalars.stress_mpa << ',' << r.best_eval.scalars.u_max_mm << ','
                 << r.best_eval.scalars.phi_max_deg << ','
                 << r.best_eval.scalars.phi_mudline_deg << '\n';
  }
  if (attempts > 1)
    write_text((base_dir / "attempts.csv").string(), attempts_csv.str(), man);
  man.finished_utc = utc_timestamp();
  write_manifest(man, (base_dir / "manifest.json").string());
  return 0;
}

int run_report(const GlobalArgs& g, const std::vector<std::string>& results,
               const std::string& baseline_path, int strategy, RunManifest& man) {
  fs::create_directories(g.out);
  std::vector<ResultEntry> entries;
  for (const std::string& path : results) {
    man.add_input(path);
    entries.push_back(parse_result_file(path));
  }
  ReportOptions ropt;
  ropt.strategy = strategy_from_int(strategy);
  ResponseScalars base;
  if (!baseline_path.empty()) {
    man.add_input(baseline_path);
    base = parse_result_file(baseline_path).scalars;
    ropt.baseline = &base;
  }
  const ReportBundle bundle = build_report(entries, ropt);
  const fs::path dir = g.out;
  write_text((dir / "report.csv").string(), bundle.table_csv, man);
  write_text((dir / "report.md").string(), bundle.table_md, man);
  write_text((dir / "margins.csv").string(), bundle.margins_csv, man);
  write_text((dir / "plot_fitness.csv").string(), plot_fitness_csv(entries), man);

  std::fputs(bundle.table_md.c_str(), stdout);
  man.finished_utc = utc_timestamp();
  write_manifest(man, (dir / "manifest.json").string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structural analysis and optimization of four-legged jacket substructures"};
  app.set_version_flag("--version", kToolVersion);
  app.require_subcommand(1);

  GlobalArgs g;
  auto* seed_opt = app.add_option("--seed", g.seed, "random seed (optimize)");
  auto* workers_opt = app.add_option("--workers", g.workers, "worker threads for batch solves")
                          ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output directory (default: current directory)");

  InputArgs in;
  CaseArgs cases;

  CLI::App* gen = app.add_subcommand("gen", "generate and dump the beam mesh for a design");
  double char_size = 0.0;
  add_model_options(gen, in);
  gen->add_option("--char-size", char_size, "target element size in mm")
      ->check(CLI::PositiveNumber);

  CLI::App* simulate = app.add_subcommand("simulate", "solve one design and write result.json");
  add_sim_options(simulate, in, cases);

  CLI::App* sweep = app.add_subcommand("sweep", "parameter study with gradient fits");
  std::string kind, combinations;
  double from = 0.0, to = 0.0, step = 0.0;
  add_sim_options(sweep, in, cases);
  sweep->add_option("--kind", kind, "parameter family: PL, BW, BD, BT, LD or LT")->required();
  auto* from_opt = sweep->add_option("--from", from, "range start in mm (PL, BW)");
  sweep->add_option("--to", to, "range end in mm")->needs(from_opt);
  sweep->add_option("--step", step, "range step in mm")->needs(from_opt);
  sweep->add_option("--combinations", combinations, "combination sets file (BD, BT, LD, LT)");

  CLI::App* optimize = app.add_subcommand("optimize", "GA mass minimization");
  std::string ga_path;
  int strategy = 0, attempts = 0;
  add_sim_options(optimize, in, cases);
  optimize->add_option("--ga", ga_path, "GA configuration and search grids")->required();
  optimize->add_option("--strategy", strategy, "constraint strategy 1, 2 or 3")
      ->check(CLI::Range(1, 3));
  optimize->add_option("--attempts", attempts, "independent attempts with derived seeds")
      ->check(CLI::PositiveNumber);

  CLI::App* report = app.add_subcommand("report", "comparison tables across results");
  std::vector<std::string> results;
  std::string baseline_path;
  int report_strategy = 3;
  report->add_option("--results", results, "result.json / summary.json files")
      ->required()
      ->expected(-1);
  report->add_option("--baseline", baseline_path,
                     "baseline result.json (limits for strategies 1 and 2)");
  report->add_option("--strategy", report_strategy, "strategy for the limits row")
      ->check(CLI::Range(1, 3));

  for (CLI::App* sub : {gen, simulate, sweep, optimize, report}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  g.seed_given = seed_opt->count() > 0;
  g.workers_given = workers_opt->count() > 0;

  RunManifest man;
  man.command = join_command(argc, argv);
  man.seed = g.seed;
  man.workers = g.workers;
  man.started_utc = utc_timestamp();

  try {
    if (*gen) return run_gen(g, in, char_size, man);
    if (*simulate) return run_simulate(g, in, cases, man);
    if (*sweep)
      return run_sweep(g, in, cases, kind, from, to, step, from_opt->count() > 0, combinations,
                       man);
    if (*optimize) return run_optimize(g, in, cases, ga_path, strategy, attempts, man);
    if (*report) return run_report(g, results, baseline_path, report_strategy, man);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const SolveError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
