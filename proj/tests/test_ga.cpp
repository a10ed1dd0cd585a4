#include <doctest.h>

#include "jacketopt/errors.hpp"
#include "jacketopt/ga.hpp"

#include "test_util.hpp"

#include <cmath>
#include <fstream>
#include <set>

using namespace jacketopt;

namespace {

const SimInputs& sim_inputs() {
  static const SimInputs in = [] {
    SimInputPaths p;
    p.model = data_file("model.jct.json");
    p.sections = data_file("sections.sec.json");
    p.material = data_file("material.json");
    p.soil = data_file("soil.json");
    p.loads = data_file("loads.json");
    p.waves = data_file("waves.json");
    p.cs_table = data_file("cs_table.json");
    return load_sim_inputs(p);
  }();
  return in;
}

const GAFile& shipped_ga() {
  static const GAFile f = parse_ga_file(data_file("ga.json"));
  return f;
}

GridParam gp(const std::string& label, double lo, double up, double step) {
  GridParam g;
  g.label = label;
  g.lower_mm = lo;
  g.upper_mm = up;
  g.interval_mm = step;
  return g;
}

ResponseScalars scalars(double sig, double u, double umud, double phi, double phimud) {
  ResponseScalars s;
  s.stress_mpa = sig;
  s.u_max_mm = u;
  s.u_mudline_mm = umud;
  s.phi_max_deg = phi;
  s.phi_mudline_deg = phimud;
  return s;
}

Evaluation feasible_eval(double mass) {
  Evaluation e;
  e.ok = true;
  e.mass_t = mass;
  e.scalars = scalars(100.0, 50.0, 10.0, 0.1, 0.05);
  return e;
}

// Six parameters on values {10,...,60}; "levels" v = value/10 in 1..6.
// Mass sum(i * v_i) is cheapest when the low-weight parameters carry the
// load; the stress cap 355 forces sum(v) >= 23. Unique optimum
// (6,6,6,3,1,1) with mass 59.
ParameterGrid toy_grid() {
  ParameterGrid grid;
  for (int i = 1; i <= 6; ++i) grid.params.push_back(gp("P" + std::to_string(i), 10, 60, 10));
  return grid;
}

Evaluation toy_eval(const ParameterGrid& grid, const DesignVector& x) {
  double mass = 0.0, sum_v = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double v = grid.params[j].value(x[j]) / 10.0;
    mass += double(j + 1) * v;
    sum_v += v;
  }
  Evaluation e;
  e.ok = true;
  e.mass_t = mass;
  e.scalars = scalars(400.0 - 2.0 * sum_v, 0.0, 0.0, 0.0, 0.0);
  return e;
}

// Deterministic rugged surrogate with a mix of feasible and infeasible
// designs; used for determinism/elitism checks.
Evaluation rugged_eval(const ParameterGrid& grid, const DesignVector& x) {
  double s = 0.0, w = 0.0;
  for (size_t j = 0; j < x.size(); ++j) {
    const double v = grid.params[j].value(x[j]);
    s += v;
    w += v * double(j + 1) / 10.0;
  }
  Evaluation e;
  e.ok = true;
  e.mass_t = 200.0 + w + 50.0 * std::sin(s * 0.37);
  e.scalars = scalars(330.0 + 40.0 * std::sin(s * 0.11), 100.0, 10.0, 0.1, 0.05);
  return e;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/jacketopt_test_") + name;
}

}  // namespace

TEST_SUITE("ga") {

TEST_CASE("grid values, sizes and nearest-point snapping") {
  const GridParam g = gp("X", 0, 100, 10);
  CHECK(g.size() == 11);
  CHECK(g.value(0) == 0.0);
  CHECK(g.value(3) == 30.0);
  CHECK(g.value(10) == 100.0);
  CHECK(g.snap(34.0) == 3);
  CHECK(g.snap(35.0) == 4);  // ties round toward the upper value
  CHECK(g.snap(36.0) == 4);
  CHECK(g.snap(-50.0) == 0);
  CHECK(g.snap(1e4) == 10);

  const GridParam h = gp("Y", 1350, 1650, 50);
  CHECK(h.size() == 7);
  CHECK(h.snap(1375.0) == 1);  // midpoint snaps up
  CHECK(h.snap(1420.0) == 1);  // 1400 is nearer than 1450
}

TEST_CASE("grid validation rejects malformed parameter sets") {
  ParameterGrid empty;
  CHECK_THROWS_AS(empty.validate(), ConfigError);

  ParameterGrid bad;
  bad.params.push_back(gp("A", 0, 95, 10));  // span not divisible
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad.params = {gp("A", 100, 100, 10)};  // no span
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad.params = {gp("A", 0, 100, 0)};  // no interval
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad.params = {gp("A", 0, 100, 10), gp("A", 0, 50, 10)};  // duplicate label
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  // Smallest diameter 50 cannot clear d > 2t even at t = 30.
  bad.params = {gp("X-d", 50, 100, 10), gp("X-t", 30, 40, 5)};
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  ParameterGrid ok;
  ok.params = {gp("X-d", 61, 101, 10), gp("X-t", 30, 40, 5)};
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("decode, bounds checks and thickness repair") {
  ParameterGrid grid;
  grid.params = {gp("X-d", 100, 200, 50), gp("X-t", 30, 60, 10), gp("Y-t", 5, 10, 5)};
  grid.validate();

  DesignVector x = {2, 3, 1};
  const auto ovs = decode_design(grid, x);
  REQUIRE(ovs.size() == 3);
  CHECK(ovs[0].param == "X-d");
  CHECK(ovs[0].value == 200.0);
  CHECK(ovs[1].value == 60.0);
  CHECK(ovs[2].param == "Y-t");

  CHECK_THROWS_AS(decode_design(grid, DesignVector{0, 0}), ConfigError);
  CHECK_THROWS_AS(decode_design(grid, DesignVector{0, 9, 0}), ConfigError);

  // d = 100 with t = 60 violates d > 2t; repair clamps t down to 40.
  DesignVector r = {0, 3, 1};
  repair_design(grid, r);
  CHECK(r == DesignVector{0, 1, 1});
  // d = 200 with t = 60 is fine; repair is a no-op, and the unpaired Y-t is
  // never touched.
  DesignVector r2 = {2, 3, 0};
  repair_design(grid, r2);
  CHECK(r2 == DesignVector{2, 3, 0});
}

TEST_CASE("rank-based mutation probability is the linear map on ranks") {
  CHECK(rank_mutation_probability(1, 300, 0.8) == 0.8);
  CHECK(rank_mutation_probability(300, 300, 0.8) == 0.0);
  CHECK(rank_mutation_probability(150, 299, 0.8) == 0.4);  // odd-size midpoint
  CHECK(rank_mutation_probability(1, 1, 0.8) == 0.8);      // degenerate population
  for (int r = 1; r < 17; ++r)
    CHECK(rank_mutation_probability(r, 17, 0.8) > rank_mutation_probability(r + 1, 17, 0.8));
  CHECK_THROWS_AS(rank_mutation_probability(0, 10, 0.8), ConfigError);
  CHECK_THROWS_AS(rank_mutation_probability(11, 10, 0.8), ConfigError);
}

TEST_CASE("rank assignment orients ties deterministically") {
  const std::vector<double> f = {5.0, 2.0, 9.0, 2.0};
  CHECK(assign_ranks(f, true) == std::vector<int>{2, 3, 1, 4});
  CHECK(assign_ranks(f, false) == std::vector<int>{3, 1, 4, 2});
}

TEST_CASE("penalized fitness: mass for feasible designs, 1e5 per violation unit") {
  GAConfig cfg;
  cfg.strategy = Strategy::code_limits;

  Evaluation ev = feasible_eval(1500.0);
  CHECK(penalized_fitness(ev, cfg, nullptr).fitness == 1500.0);
  CHECK(penalized_fitness(ev, cfg, nullptr).feasible);

  ev.scalars = scalars(357.0, 50.0, 10.0, 0.1, 0.05);  // 2 MPa over yield
  const FitnessValue one = penalized_fitness(ev, cfg, nullptr);
  CHECK_FALSE(one.feasible);
  CHECK(one.fitness == 1500.0 + 1e5 * 2.0);

  ev.scalars = scalars(356.0, 172.5, 10.0, 0.1, 0.05);  // 1 MPa + 0.5 mm over
  CHECK(penalized_fitness(ev, cfg, nullptr).fitness == 1500.0 + 1e5 * 1.5);

  Evaluation failed;
  failed.ok = false;
  const FitnessValue f = penalized_fitness(failed, cfg, nullptr);
  CHECK(f.failed);
  CHECK(f.fitness == 1e5);  // default sentinel
  GAConfig with_sentinel = cfg;
  with_sentinel.sentinel_fitness = 17500.0;
  CHECK(penalized_fitness(failed, with_sentinel, nullptr).fitness == 17500.0);

  GAConfig norm = cfg;
  norm.normalized_penalty = true;
  ev.scalars = scalars(357.0, 50.0, 10.0, 0.1, 0.05);
  CHECK(penalized_fitness(ev, norm, nullptr).fitness ==
        doctest::Approx(1500.0 + 1e5 * 2.0 / 355.0).epsilon(1e-12));
}

TEST_CASE("any feasible design outranks any design violating by 0.11 units") {
  // With penalty 1e5 and masses below 1e4 t, a violation of 0.11 units costs
  // 1.1e4 t-equivalent, more than any feasible mass advantage.
  GAConfig cfg;
  cfg.strategy = Strategy::code_limits;
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> mass(1.0, 9999.0);
  std::uniform_real_distribution<double> extra(0.11, 40.0);
  double worst_feasible = 0.0, best_infeasible = 1e300;
  for (int i = 0; i < 500; ++i) {
    Evaluation fe = feasible_eval(mass(rng));
    Evaluation in = feasible_eval(mass(rng));
    in.scalars.stress_mpa = kYieldStressMpa + extra(rng);
    worst_feasible = std::max(worst_feasible, penalized_fitness(fe, cfg, nullptr).fitness);
    best_infeasible = std::min(best_infeasible, penalized_fitness(in, cfg, nullptr).fitness);
  }
  CHECK(worst_feasible < best_infeasible);
}

TEST_CASE("crossover and mutation never leave the grid") {
  ParameterGrid grid;
  grid.params = {gp("A", 0, 10, 1), gp("B", 5, 20, 5), gp("C", 100, 1000, 100),
                 gp("D", 0, 2, 1), gp("E", 7, 77, 7)};
  grid.validate();
  std::mt19937_64 rng(4);
  bool all_ok = true;
  for (int it = 0; it < 100000; ++it) {  // 5 genes x 2 operations x 1e5 = 1e6 gene draws
    DesignVector a(grid.params.size()), b(grid.params.size());
    for (size_t j = 0; j < grid.params.size(); ++j) {
      std::uniform_int_distribution<int> d(0, grid.params[j].size() - 1);
      a[j] = d(rng);
      b[j] = d(rng);
    }
    DesignVector child = uniform_crossover(a, b, rng);
    mutate_design(grid, child, 0.7, rng);
    for (size_t j = 0; j < child.size(); ++j)
      all_ok = all_ok && child[j] >= 0 && child[j] < grid.params[j].size();
  }
  CHECK(all_ok);
}

TEST_CASE("config validation bounds") {
  GAConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  GAConfig bad = cfg;
  bad.n_pop = 1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.p_c = 1.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.p_m_max = -0.1;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.penalty = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.stall_window = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cfg;
  bad.workers = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("same seed gives byte-identical histories at any worker count") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 20;
  cfg.max_generations = 30;
  cfg.stall_window = 10;
  cfg.seed = 1234;
  cfg.strategy = Strategy::code_limits;
  const Evaluator ev = [&](const DesignVector& x) { return rugged_eval(grid, x); };

  const GAResult a = run_ga(grid, cfg, ev);
  const GAResult b = run_ga(grid, cfg, ev);
  CHECK(ga_history_csv(a) == ga_history_csv(b));
  CHECK(a.best == b.best);
  CHECK(a.stop_reason == b.stop_reason);

  GAConfig par = cfg;
  par.workers = 4;
  const GAResult c = run_ga(grid, par, ev);
  CHECK(ga_history_csv(a) == ga_history_csv(c));
  CHECK(a.best == c.best);
  CHECK(a.evaluations == c.evaluations);
  CHECK(a.cache_hits == c.cache_hits);
}

TEST_CASE("elitism keeps the best fitness non-increasing") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 16;
  cfg.max_generations = 40;
  cfg.stall_window = 15;
  cfg.seed = 7;
  const Evaluator ev = [&](const DesignVector& x) { return rugged_eval(grid, x); };
  const GAResult r = run_ga(grid, cfg, ev);
  REQUIRE(r.generations.size() >= 2);
  for (size_t g = 1; g < r.generations.size(); ++g)
    CHECK(r.generations[g].best_fitness <= r.generations[g - 1].best_fitness);
}

TEST_CASE("constant fitness stalls out after exactly the window") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 8;
  cfg.p_c = 0.0;
  cfg.p_m_max = 0.0;  // no variation: children are copies
  cfg.stall_window = 5;
  cfg.max_generations = 100;
  const Evaluator ev = [](const DesignVector&) { return feasible_eval(100.0); };
  const GAResult r = run_ga(grid, cfg, ev);
  CHECK(r.stop_reason == "stall");
  CHECK(r.generations.size() == 6);  // improving first generation + 5 stalled
  for (const auto& g : r.generations) CHECK(g.best_fitness == 100.0);
}

TEST_CASE("generation cap stops long runs") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 8;
  cfg.max_generations = 3;
  cfg.stall_window = 50;
  const Evaluator ev = [&](const DesignVector& x) { return rugged_eval(grid, x); };
  const GAResult r = run_ga(grid, cfg, ev);
  CHECK(r.stop_reason == "generation cap");
  CHECK(r.generations.size() == 3);
}

TEST_CASE("the injected anchor design is part of the first generation") {
  ParameterGrid grid;
  for (int i = 0; i < 8; ++i) grid.params.push_back(gp("Q" + std::to_string(i), 0, 9, 1));
  const DesignVector x0 = {3, 1, 4, 1, 5, 9, 2, 6};
  const Evaluator ev = [&](const DesignVector& x) {
    double m = 5.0;
    for (size_t j = 0; j < x.size(); ++j) {
      const double d = grid.params[j].value(x[j]) - grid.params[j].value(x0[j]);
      m += d * d;
    }
    Evaluation e;
    e.ok = true;
    e.mass_t = m;
    e.scalars = scalars(0.0, 0.0, 0.0, 0.0, 0.0);
    return e;
  };
  GAConfig cfg;
  cfg.n_pop = 10;
  cfg.max_generations = 1;
  const GAResult r = run_ga(grid, cfg, ev, &x0);
  CHECK(r.generations[0].best_fitness == 5.0);
  CHECK(r.best == x0);
}

TEST_CASE("an all-infeasible population still evolves by penalty rank") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 8;
  cfg.max_generations = 15;
  cfg.stall_window = 5;
  const Evaluator ev = [&](const DesignVector& x) {
    Evaluation e = toy_eval(grid, x);
    e.scalars.stress_mpa = 400.0 + e.mass_t;  // never feasible
    return e;
  };
  const GAResult r = run_ga(grid, cfg, ev);
  CHECK_FALSE(r.best_fitness.feasible);
  CHECK_FALSE(r.best_fitness.failed);
  CHECK(r.best_fitness.fitness > 1e5);  // penalty-dominated
  CHECK((r.stop_reason == "stall" || r.stop_reason == "generation cap"));
}

TEST_CASE("failed evaluations get the sentinel and stay in the population") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 8;
  cfg.max_generations = 4;
  cfg.stall_window = 3;

  SUBCASE("every evaluation fails") {
    const Evaluator ev = [](const DesignVector&) {
      Evaluation e;
      e.note = "solver blew up";
      return e;
    };
    const GAResult r = run_ga(grid, cfg, ev);
    CHECK(r.sentinel_fitness == 1e5);
    CHECK(r.best_fitness.failed);
    CHECK(r.best_fitness.fitness == 1e5);
    for (const auto& g : r.generations) CHECK(g.best_failed);
  }

  SUBCASE("throwing evaluators are treated as failures, not crashes") {
    const Evaluator ev = [&](const DesignVector& x) -> Evaluation {
      int sum = 0;
      for (int v : x) sum += v;
      if (sum % 2 == 1) throw SolveError("odd-sum design diverged");
      return toy_eval(grid, x);
    };
    const GAResult r = run_ga(grid, cfg, ev);
    CHECK_FALSE(r.best_fitness.failed);  // even-sum designs exist and win
    int even = 0;
    for (int v : r.best) even += v;
    CHECK(even % 2 == 0);
  }
}

TEST_CASE("toy grid: GA matches the exhaustive-enumeration optimum") {
  const ParameterGrid grid = toy_grid();
  // The 6^6 space is small but carries a penalty ridge (the optimum is a
  // coordinated two-gene move away from several near-optima), so the toy run
  // gets a roomier population and stall window than the jacket defaults.
  GAConfig base;
  base.n_pop = 150;
  base.max_generations = 400;
  base.stall_window = 40;
  base.strategy = Strategy::code_limits;

  // Exhaustive oracle over all 6^6 designs, same penalized fitness.
  DesignVector best_x;
  double best_f = 1e300;
  DesignVector x(6, 0);
  for (int i0 = 0; i0 < 6; ++i0)
    for (int i1 = 0; i1 < 6; ++i1)
      for (int i2 = 0; i2 < 6; ++i2)
        for (int i3 = 0; i3 < 6; ++i3)
          for (int i4 = 0; i4 < 6; ++i4)
            for (int i5 = 0; i5 < 6; ++i5) {
              x = {i0, i1, i2, i3, i4, i5};
              const double f = penalized_fitness(toy_eval(grid, x), base, nullptr).fitness;
              if (f < best_f) {
                best_f = f;
                best_x = x;
              }
            }
  CHECK(best_x == DesignVector{5, 5, 5, 2, 0, 0});
  CHECK(best_f == 59.0);

  const Evaluator ev = [&](const DesignVector& d) { return toy_eval(grid, d); };
  int hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    GAConfig cfg = base;
    cfg.seed = seed;
    const GAResult r = run_ga(grid, cfg, ev);
    if (r.best == best_x && r.best_fitness.fitness == best_f) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("deviation report: relative shifts of the generation bests") {
  ParameterGrid grid;
  grid.params = {gp("A", 42, 60, 18), gp("B", 100, 140, 20), gp("C", 5, 10, 5),
                 gp("D", 35, 50, 15)};
  GAResult res;
  GAGeneration g1, g2;
  g1.generation = 1;
  g1.best = {1, 0, 0, 0};  // 60, 100, 5, 35
  g2.generation = 2;
  g2.best = {0, 2, 1, 1};  // 42, 140, 10, 50
  res.generations = {g1, g2};

  const std::vector<double> base = {60.0, 100.0, 0.0, 35.0};
  const DeviationReport rep = parameter_deviation_report(res, grid, base);
  REQUIRE(rep.labels.size() == 4);
  REQUIRE(rep.sigma.size() == 2);
  CHECK(rep.sigma[0][0] == 0.0);
  CHECK(rep.sigma[0][1] == 0.0);
  CHECK(std::isnan(rep.sigma[0][2]));
  CHECK(rep.sigma[1][0] == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(rep.sigma[1][1] == doctest::Approx(0.4).epsilon(1e-12));

  const auto& fin = rep.final_entries;
  CHECK(fin[0].sigma == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(fin[0].flagged);  // the threshold itself counts
  CHECK(fin[1].sigma == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(fin[1].flagged);
  CHECK_FALSE(fin[2].defined);  // zero baseline: deviation undefined
  CHECK(fin[3].sigma == doctest::Approx(15.0 / 35.0).epsilon(1e-9));  // 35 -> 50: +42.9 %
  CHECK(fin[3].flagged);

  GAResult empty;
  CHECK_THROWS_AS(parameter_deviation_report(empty, grid, base), ConfigError);
}

TEST_CASE("run_ga input validation") {
  const ParameterGrid grid = toy_grid();
  const Evaluator ev = [&](const DesignVector& x) { return toy_eval(grid, x); };
  GAConfig cfg;
  cfg.n_pop = 4;
  cfg.max_generations = 1;
  cfg.strategy = Strategy::below_baseline;
  CHECK_THROWS_AS(run_ga(grid, cfg, ev), ConfigError);  // baseline missing

  cfg.strategy = Strategy::code_limits;
  const std::vector<double> short_base = {1.0, 2.0};
  CHECK_THROWS_AS(run_ga(grid, cfg, ev, nullptr, nullptr, &short_base), ConfigError);

  GAConfig bad = cfg;
  bad.n_pop = 1;
  CHECK_THROWS_AS(run_ga(grid, bad, ev), ConfigError);
}

TEST_CASE("shipped search grids: 48 parameters, all walkable from the lower limit") {
  const GAFile& f = shipped_ga();
  REQUIRE(f.grid.params.size() == 48);
  CHECK(f.config.n_pop == 300);
  CHECK(f.config.p_c == 0.4);
  CHECK(f.config.p_m_max == 0.8);
  CHECK(f.config.penalty == 1e5);
  CHECK(f.config.stall_window == 20);
  CHECK(f.config.max_generations == 300);
  CHECK(f.config.rank_worst_first);
  CHECK_FALSE(f.config.normalized_penalty);
  CHECK(f.attempts == 1);

  std::set<std::string> labels;
  for (const auto& g : f.grid.params) {
    labels.insert(g.label);
    CHECK(g.size() >= 2);
  }
  CHECK(labels.size() == 48);
  CHECK(labels.count("BW") == 1);
  CHECK(labels.count("CS2-t") == 1);   // thickness-only: the taper is tied
  CHECK(labels.count("CS2-d") == 0);

  const auto& bw = f.grid.params[f.grid.index_of("BW")];
  CHECK(bw.lower_mm == 25000.0);
  CHECK(bw.upper_mm == 40000.0);
  CHECK(bw.interval_mm == 1000.0);
  CHECK(bw.size() == 16);

  const auto& sb1 = f.grid.params[f.grid.index_of("SB1-d")];
  CHECK(sb1.lower_mm == 825.0);
  CHECK(sb1.upper_mm == 1075.0);
  // The two rows whose nominal span is not a whole number of intervals ship
  // with the last attainable value as the cap.
  CHECK(f.grid.params[f.grid.index_of("SB2-t")].upper_mm == 56.0);
  CHECK(f.grid.params[f.grid.index_of("UPC3-d")].upper_mm == 1630.0);
}

TEST_CASE("as-built design lands on the grid except four near-miss values") {
  const GAFile& f = shipped_ga();
  const std::vector<double> base = baseline_values(f.grid, sim_inputs().params);
  REQUIRE(base.size() == 48);
  CHECK(base[f.grid.index_of("BW")] == 35000.0);
  CHECK(base[f.grid.index_of("UPC-d")] == 1420.0);
  CHECK(base[f.grid.index_of("CS2-t")] == 85.0);
  CHECK(base[f.grid.index_of("CS1-d")] == 3600.0);

  const DesignVector x0 = snap_to_grid(f.grid, base);
  std::set<std::string> moved;
  for (size_t j = 0; j < base.size(); ++j) {
    const double snapped = f.grid.params[j].value(x0[j]);
    if (snapped != base[j]) moved.insert(f.grid.params[j].label);
  }
  // Off-grid as-built values and where they snap: UPC-d 1420 -> 1400,
  // UPC2-d 1420 -> 1410, BC3-d 710 -> 730, SB2-t 45 -> 46.
  CHECK(moved == std::set<std::string>{"UPC-d", "UPC2-d", "BC3-d", "SB2-t"});
  CHECK(f.grid.params[f.grid.index_of("UPC-d")].value(x0[f.grid.index_of("UPC-d")]) == 1400.0);
  CHECK(f.grid.params[f.grid.index_of("UPC2-d")].value(x0[f.grid.index_of("UPC2-d")]) == 1410.0);
  CHECK(f.grid.params[f.grid.index_of("BC3-d")].value(x0[f.grid.index_of("BC3-d")]) == 730.0);
  CHECK(f.grid.params[f.grid.index_of("SB2-t")].value(x0[f.grid.index_of("SB2-t")]) == 46.0);

  DesignVector repaired = x0;
  repair_design(f.grid, repaired);
  CHECK(repaired == x0);  // snapped as-built needs no repair
}

TEST_CASE("ga file parsing rejects malformed inputs") {
  auto write = [](const std::string& name, const std::string& text) {
    const std::string path = temp_path(name);
    std::ofstream(path) << text;
    return path;
  };
  CHECK_THROWS_AS(parse_ga_file(write("ga_bad1.json", R"({"config": {}})")), ConfigError);
  CHECK_THROWS_AS(parse_ga_file(write("ga_bad2.json", R"({
    "parameters": [{"label": "A", "lower_mm": 0, "upper_mm": 10, "interval_mm": 1}],
    "config": {"n_pop": 10, "bogus": 1}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_ga_file(write("ga_bad3.json", R"({
    "parameters": [{"label": "A", "lower_mm": 0, "upper_mm": 10, "interval_mm": 1}],
    "config": {"rank_direction": "sideways"}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_ga_file(write("ga_bad4.json", R"({
    "parameters": [{"label": "A", "lower_mm": 0, "upper_mm": 10, "interval_mm": 1}],
    "attempts": 0})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_ga_file(write("ga_bad5.json", R"({
    "parameters": [{"label": "A", "lower_mm": 0, "upper_mm": 10, "interval_mm": 3}]})")),
                  ConfigError);

  const std::string good = write("ga_good.json", R"({
    "parameters": [{"label": "A", "lower_mm": 0, "upper_mm": 10, "interval_mm": 5}],
    "config": {"n_pop": 12, "strategy": 2, "rank_direction": "best_first",
               "normalized_penalty": true, "seed": 9, "workers": 3},
    "attempts": 2})");
  const GAFile f = parse_ga_file(good);
  CHECK(f.config.n_pop == 12);
  CHECK(f.config.strategy == Strategy::below_baseline_top_only);
  CHECK_FALSE(f.config.rank_worst_first);
  CHECK(f.config.normalized_penalty);
  CHECK(f.config.seed == 9);
  CHECK(f.config.workers == 3);
  CHECK(f.attempts == 2);
}

TEST_CASE("history and deviation writers") {
  const ParameterGrid grid = toy_grid();
  GAConfig cfg;
  cfg.n_pop = 10;
  cfg.max_generations = 5;
  cfg.stall_window = 10;
  cfg.seed = 3;
  const std::vector<double> base = {10.0, 20.0, 30.0, 40.0, 50.0, 60.0};
  const Evaluator ev = [&](const DesignVector& x) { return rugged_eval(grid, x); };
  const GAResult r = run_ga(grid, cfg, ev, nullptr, nullptr, &base);

  const std::string hist = ga_history_csv(r);
  CHECK(hist.rfind("generation,best_fitness,mean_fitness,best_mass_t,best_feasible", 0) == 0);
  CHECK(hist.find(",margin_max_stress") != std::string::npos);
  const size_t lines = std::count(hist.begin(), hist.end(), '\n');
  CHECK(lines == r.generations.size() + 1);

  const DeviationReport rep = parameter_deviation_report(r, grid, base);
  const std::string dev = deviations_csv(rep);
  CHECK(dev.rfind("generation,P1,P2,P3,P4,P5,P6", 0) == 0);
  CHECK(std::count(dev.begin(), dev.end(), '\n') == r.generations.size() + 1);

  write_ga_history_csv(r, temp_path("ga_hist.csv"));
  write_deviations_csv(rep, temp_path("ga_dev.csv"));
  std::ifstream back(temp_path("ga_hist.csv"));
  std::stringstream ss;
  ss << back.rdbuf();
  CHECK(ss.str() == hist);
}

TEST_CASE("jacket driver: baseline, anchor and a short reproducible run") {
  const GAFile& f = shipped_ga();
  GAConfig cfg = f.config;
  cfg.n_pop = 4;
  cfg.max_generations = 2;
  cfg.stall_window = 5;
  cfg.seed = 7;
  cfg.workers = 2;
  cfg.strategy = Strategy::code_limits;
  SimOptions opt;  // spring support, HWL, ULS

  const JacketGAOutcome out = optimize_jacket(sim_inputs(), f.grid, cfg, opt);

  // The baseline block matches a direct simulation of the as-built design.
  const SimResult direct = simulate_variant(sim_inputs(), {}, opt);
  CHECK(out.baseline_mass_t == direct.mass_t);
  CHECK(out.baseline.stress_mpa == governing_scalars(direct.response).stress_mpa);
  CHECK(out.baseline.u_max_mm == governing_scalars(direct.response).u_max_mm);

  // Sentinel is ten times the grid-maximum design's mass.
  DesignVector xmax(f.grid.params.size());
  for (size_t j = 0; j < xmax.size(); ++j) xmax[j] = f.grid.params[j].size() - 1;
  const JacketParams pmax = apply_design(sim_inputs().params, f.grid, xmax);
  CHECK(out.config.sentinel_fitness ==
        doctest::Approx(10.0 * compute_mass_t(pmax, generate_mesh(pmax))).epsilon(1e-12));
  CHECK(out.result.sentinel_fitness == out.config.sentinel_fitness);

  REQUIRE(out.result.generations.size() == 2);
  CHECK(out.result.best_eval.ok);
  CHECK(out.result.best_fitness.fitness > 0.0);
  CHECK(out.deviations.sigma.size() == 2);

  // Same configuration, fresh run: byte-identical history.
  const JacketGAOutcome again = optimize_jacket(sim_inputs(), f.grid, cfg, opt);
  CHECK(ga_history_csv(out.result) == ga_history_csv(again.result));
  CHECK(out.result.best == again.result.best);

  const std::string summary = ga_summary_json(out);
  CHECK(summary.find("\"strategy\": 3") != std::string::npos);
  CHECK(summary.find("\"baseline\"") != std::string::npos);
  CHECK(summary.find("\"best_parameters_mm\"") != std::string::npos);
  write_ga_summary_json(out, temp_path("ga_summary.json"));
}

}  // TEST_SUITE
