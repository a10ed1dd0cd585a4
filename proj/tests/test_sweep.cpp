#include <doctest.h>

#include "jacketopt/errors.hpp"
#include "jacketopt/sweep.hpp"

#include "test_util.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

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

const CombinationSets& shipped_combinations() {
  static const CombinationSets sets = parse_combinations(data_file("combinations.json"));
  return sets;
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

SweepRow ok_row(const std::string& label, double mass, ResponseScalars s) {
  SweepRow r;
  r.label = label;
  r.ok = true;
  r.status = "ok";
  r.mass_t = mass;
  r.scalars = s;
  return r;
}

std::string temp_path(const std::string& name) {
  return std::string("/tmp/jacketopt_test_") + name;
}

}  // namespace

TEST_SUITE_BEGIN("sweep");

TEST_CASE("governing scalars map the overall and mudline response extremes") {
  SolveResult r;
  r.max_stress_mpa = 188.0;
  r.u_overall_max_mm = 114.0;
  r.u_top_max_mm = 102.0;
  r.u_mudline_max_mm = 27.8;
  r.phi_overall_tilt_deg = 0.159;
  r.phi_top_tilt_deg = 0.140;
  r.phi_mudline_tilt_deg = 0.0876;
  r.phi_overall_z_deg = 0.9;  // must not leak into the tracked tilt scalars
  const ResponseScalars s = governing_scalars(r);
  CHECK(s.stress_mpa == 188.0);
  CHECK(s.u_max_mm == 114.0);
  CHECK(s.u_mudline_mm == 27.8);
  CHECK(s.phi_max_deg == 0.159);
  CHECK(s.phi_mudline_deg == 0.0876);
}

TEST_CASE("range sweep generation covers the inclusive bounds in order") {
  const SweepSpec spec = make_range_sweep("BW", 22500, 40000, 2500);
  REQUIRE(spec.points.size() == 8);
  CHECK(spec.kind == "BW");
  CHECK(spec.points.front().label == "BW=22500");
  CHECK(spec.points.back().label == "BW=40000");
  for (size_t i = 0; i < spec.points.size(); ++i) {
    REQUIRE(spec.points[i].overrides.size() == 1);
    CHECK(spec.points[i].overrides[0].param == "BW");
    CHECK(spec.points[i].overrides[0].value == doctest::Approx(22500.0 + 2500.0 * i));
  }

  const SweepSpec one = make_range_sweep("PL", 3000, 3000, 500);
  REQUIRE(one.points.size() == 1);
  CHECK(one.points[0].overrides[0].value == 3000.0);

  CHECK_THROWS_AS(make_range_sweep("XX", 0, 1, 1), ConfigError);
  CHECK_THROWS_AS(make_range_sweep("BW", 0, 1, 0), ConfigError);
  CHECK_THROWS_AS(make_range_sweep("BW", 2, 1, 1), ConfigError);
}

TEST_CASE("shipped combinations file: four kinds, six ordered sets, full coverage") {
  const CombinationSets& sets = shipped_combinations();
  CHECK(sets.note.find("reconstructed") != std::string::npos);
  REQUIRE(sets.kinds.size() == 4);
  const std::map<std::string, size_t> group_counts = {
      {"BD", 13}, {"BT", 13}, {"LD", 10}, {"LT", 11}};
  for (const auto& [kind, count] : group_counts) {
    REQUIRE(sets.kinds.count(kind) == 1);
    const auto& points = sets.kinds.at(kind);
    REQUIRE(points.size() == 6);
    const char want = (kind == "BD" || kind == "LD") ? 'd' : 't';
    for (size_t i = 0; i < points.size(); ++i) {
      CHECK(points[i].label == "Comb" + std::to_string(i + 1));
      REQUIRE(points[i].overrides.size() == count);
      for (const auto& ov : points[i].overrides) CHECK(ov.param.back() == want);
    }
  }
  // Thinnest brace set reaches below the as-built thinnest bay; the full leg
  // diameter set ends 150 mm above the as-built values.
  const auto& bt1 = sets.kinds.at("BT")[0];
  double bc4 = 0.0;
  for (const auto& ov : bt1.overrides)
    if (ov.param == "BC4_t") bc4 = ov.value;
  CHECK(bc4 == 10.0);
  const auto& ld6 = sets.kinds.at("LD")[5];
  for (const auto& ov : ld6.overrides)
    if (ov.param == "CS1_d") CHECK(ov.value == 3750.0);
}

TEST_CASE("combination parsing rejects inconsistent or mislabeled sets") {
  const std::string good = temp_path("combo_good.json");
  {
    std::ofstream f(good);
    f << R"({"BD": {"Comb1": {"SB1_d": 900}, "Comb2": {"SB1_d": 950}}})";
  }
  const CombinationSets sets = parse_combinations(good);
  REQUIRE(sets.kinds.at("BD").size() == 2);
  CHECK(sets.kinds.at("BD")[0].overrides[0].value == 900.0);

  const std::string bad_cover = temp_path("combo_cover.json");
  {
    std::ofstream f(bad_cover);
    f << R"({"BD": {"Comb1": {"SB1_d": 900}, "Comb2": {"SB2_d": 950}}})";
  }
  CHECK_THROWS_AS(parse_combinations(bad_cover), ConfigError);

  const std::string bad_suffix = temp_path("combo_suffix.json");
  {
    std::ofstream f(bad_suffix);
    f << R"({"BD": {"Comb1": {"SB1_t": 55}}})";
  }
  CHECK_THROWS_AS(parse_combinations(bad_suffix), ConfigError);

  const std::string bad_kind = temp_path("combo_kind.json");
  {
    std::ofstream f(bad_kind);
    f << R"({"ZZ": {"Comb1": {"SB1_d": 900}}})";
  }
  CHECK_THROWS_AS(parse_combinations(bad_kind), ConfigError);

  CHECK_THROWS_AS(make_combination_sweep(sets, "LT"), ConfigError);
}

TEST_CASE("single-point sweep equals a direct simulation") {
  SweepSpec spec = make_range_sweep("BW", 30000, 30000, 1000);
  const SweepTable table = run_sweep(sim_inputs(), spec);
  REQUIRE(table.rows.size() == 2);  // baseline + the one point
  REQUIRE(table.rows[1].ok);

  const SimResult direct =
      simulate_variant(sim_inputs(), {{"BW", 30000}}, spec.options);
  const ResponseScalars want = governing_scalars(direct.response);
  CHECK(table.rows[1].mass_t == direct.mass_t);
  CHECK(table.rows[1].scalars.stress_mpa == want.stress_mpa);
  CHECK(table.rows[1].scalars.u_max_mm == want.u_max_mm);
  CHECK(table.rows[1].scalars.u_mudline_mm == want.u_mudline_mm);
  CHECK(table.rows[1].scalars.phi_max_deg == want.phi_max_deg);
  CHECK(table.rows[1].scalars.phi_mudline_deg == want.phi_mudline_deg);
}

TEST_CASE("invalid points are marked failed and the sweep continues") {
  SweepSpec spec;
  spec.kind = "BT";
  spec.points.push_back({"bad", {{"BC1_t", 500.0}}});  // violates d > 2t
  spec.points.push_back({"good", {{"BC1_t", 50.0}}});
  const SweepTable table = run_sweep(sim_inputs(), spec);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0].ok);  // baseline
  CHECK_FALSE(table.rows[1].ok);
  CHECK(table.rows[1].status != "ok");
  CHECK_FALSE(table.rows[1].status.empty());
  CHECK(table.rows[2].ok);
  CHECK(table.rows[2].scalars.stress_mpa > 0.0);
}

TEST_CASE("sweep is deterministic and worker-count invariant") {
  SweepSpec spec = make_range_sweep("BW", 30000, 32500, 2500);
  spec.workers = 1;
  const SweepTable serial = run_sweep(sim_inputs(), spec);
  spec.workers = 4;
  const SweepTable pooled = run_sweep(sim_inputs(), spec);
  REQUIRE(serial.rows.size() == pooled.rows.size());
  for (size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].label == pooled.rows[i].label);
    CHECK(serial.rows[i].mass_t == pooled.rows[i].mass_t);
    CHECK(serial.rows[i].scalars.stress_mpa == pooled.rows[i].scalars.stress_mpa);
    CHECK(serial.rows[i].scalars.u_max_mm == pooled.rows[i].scalars.u_max_mm);
  }
}

TEST_CASE("gradient fit recovers an exact linear relation") {
  SweepTable t;
  t.kind = "BW";
  for (int i = 0; i < 5; ++i) {
    const double m = 1700.0 + 25.0 * i;
    t.rows.push_back(ok_row("p" + std::to_string(i), m,
                            scalars(2.0 * m + 5.0, -0.5 * m + 3.0, 0.25 * m, 1.5 * m - 7.0,
                                    -2.0 * m + 11.0)));
  }
  const GradientTable g = fit_gradients({t});
  REQUIRE(g.kinds.size() == 1);
  CHECK(g.kinds[0].first == "BW");
  REQUIRE(g.kinds[0].second.valid);
  CHECK(g.kinds[0].second.points == 5);
  CHECK(g.kinds[0].second.per_ton.stress_mpa == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(g.kinds[0].second.per_ton.u_max_mm == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(g.kinds[0].second.per_ton.u_mudline_mm == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.kinds[0].second.per_ton.phi_max_deg == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(g.kinds[0].second.per_ton.phi_mudline_deg == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("gradient fit matches the closed-form least-squares slope") {
  // Three noisy points; oracle slope from the normal equations.
  const double m[3] = {1700.0, 1750.0, 1825.0};
  const double y[3] = {301.7, 288.9, 263.15};
  SweepTable t;
  t.kind = "LD";
  for (int i = 0; i < 3; ++i)
    t.rows.push_back(ok_row("p" + std::to_string(i), m[i], scalars(y[i], 0, 0, 0, 0)));

  double sm = 0, sy = 0, smm = 0, smy = 0;
  for (int i = 0; i < 3; ++i) {
    sm += m[i];
    sy += y[i];
    smm += m[i] * m[i];
    smy += m[i] * y[i];
  }
  const double oracle = (3.0 * smy - sm * sy) / (3.0 * smm - sm * sm);

  const GradientTable g = fit_gradients({t});
  REQUIRE(g.kinds[0].second.valid);
  CHECK(g.kinds[0].second.per_ton.stress_mpa == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("constant-mass and under-determined sweeps are excluded with a note") {
  SweepTable flat;
  flat.kind = "PL";
  for (int i = 0; i < 4; ++i)
    flat.rows.push_back(ok_row("p" + std::to_string(i), 1781.0, scalars(188 + i, 0, 0, 0, 0)));

  SweepTable thin;
  thin.kind = "BD";
  thin.rows.push_back(ok_row("a", 1700.0, scalars(190, 0, 0, 0, 0)));
  thin.rows.push_back(ok_row("b", 1750.0, scalars(189, 0, 0, 0, 0)));
  SweepRow failed;
  failed.label = "c";
  failed.status = "boom";
  thin.rows.push_back(failed);  // failed rows do not count toward the minimum

  const GradientTable g = fit_gradients({flat, thin});
  REQUIRE(g.kinds.size() == 2);
  CHECK_FALSE(g.kinds[0].second.valid);
  CHECK(g.kinds[0].second.note.find("constant mass") != std::string::npos);
  CHECK_FALSE(g.kinds[1].second.valid);
  CHECK(g.kinds[1].second.note.find("3 successful rows") != std::string::npos);
}

TEST_CASE("estimated changes superpose gradients linearly") {
  GradientTable g;
  GradientRow bw;
  bw.valid = true;
  bw.per_ton = scalars(-0.2, -0.4, -0.01, -3.0e-4, 1.0e-4);
  GradientRow lt;
  lt.valid = true;
  lt.per_ton = scalars(-0.25, -0.08, -0.003, -1.5e-4, 3.0e-6);
  GradientRow pl;
  pl.valid = false;
  pl.note = "constant mass";
  g.kinds = {{"BW", bw}, {"LT", lt}, {"PL", pl}};

  SUBCASE("no selections produce zero deltas") {
    const EstimatedChange none = estimate_changes(g, {});
    CHECK(none.mass_delta_t == 0.0);
    CHECK(none.delta.stress_mpa == 0.0);
  }

  SUBCASE("single-kind product") {
    const EstimatedChange one = estimate_changes(g, {{"BW", "Comb6", 50.0}});
    CHECK(one.mass_delta_t == 50.0);
    CHECK(one.delta.stress_mpa == doctest::Approx(-10.0).epsilon(1e-12));
    CHECK(one.delta.u_max_mm == doctest::Approx(-20.0).epsilon(1e-12));
  }

  SUBCASE("two kinds match an independent dot product and scale linearly") {
    const std::vector<KindSelection> picks = {{"BW", "Comb6", 47.13}, {"LT", "Comb3", -126.68}};
    const EstimatedChange est = estimate_changes(g, picks);
    const double oracle_stress = -0.2 * 47.13 + -0.25 * -126.68;
    const double oracle_phimud = 1.0e-4 * 47.13 + 3.0e-6 * -126.68;
    CHECK(est.mass_delta_t == doctest::Approx(47.13 - 126.68).epsilon(1e-12));
    CHECK(est.delta.stress_mpa == doctest::Approx(oracle_stress).epsilon(1e-9));
    CHECK(est.delta.phi_mudline_deg == doctest::Approx(oracle_phimud).epsilon(1e-9));

    std::vector<KindSelection> doubled = picks;
    for (auto& p : doubled) p.mass_delta_t *= 2.0;
    const EstimatedChange est2 = estimate_changes(g, doubled);
    CHECK(est2.delta.stress_mpa == doctest::Approx(2.0 * est.delta.stress_mpa).epsilon(1e-12));
    CHECK(est2.delta.u_mudline_mm == doctest::Approx(2.0 * est.delta.u_mudline_mm).epsilon(1e-12));
  }

  SUBCASE("unknown or excluded kinds are rejected") {
    CHECK_THROWS_AS(estimate_changes(g, {{"XX", "", 1.0}}), ConfigError);
    CHECK_THROWS_AS(estimate_changes(g, {{"PL", "", 1.0}}), ConfigError);
  }
}

TEST_CASE("strategy 1: every scalar strictly below the baseline") {
  const ResponseScalars base = scalars(288.7, 87.15, 19.04, 0.3088, 0.1203);

  const StrategyReport self = check_strategy(base, Strategy::below_baseline, &base);
  REQUIRE(self.checks.size() == 5);
  CHECK_FALSE(self.pass);  // strict inequality: equal is not better
  for (const auto& c : self.checks) {
    CHECK(c.margin == 0.0);
    CHECK_FALSE(c.pass);
  }

  ResponseScalars better = scalars(267.4, 80.0, 18.0, 0.30, 0.12);
  const StrategyReport good = check_strategy(better, Strategy::below_baseline, &base);
  CHECK(good.pass);
  CHECK(good.total_violation == 0.0);

  better.u_mudline_mm = 19.05;  // one scalar above baseline sinks the verdict
  const StrategyReport bad = check_strategy(better, Strategy::below_baseline, &base);
  CHECK_FALSE(bad.pass);
  CHECK(bad.total_violation == doctest::Approx(0.01).epsilon(1e-9));

  CHECK_THROWS_AS(check_strategy(better, Strategy::below_baseline, nullptr), ConfigError);
}

TEST_CASE("strategy 2 drops the mudline displacement and caps the mudline tilt") {
  const ResponseScalars base = scalars(288.7, 87.15, 19.04, 0.3088, 0.1203);
  ResponseScalars r = scalars(280.0, 85.0, 0.0, 0.30, 0.0);
  r.u_mudline_mm = 1.0e6;  // enormous, but unconstrained under strategy 2
  r.phi_mudline_deg = 0.30;

  const StrategyReport rep = check_strategy(r, Strategy::below_baseline_top_only, &base);
  REQUIRE(rep.checks.size() == 4);
  for (const auto& c : rep.checks) CHECK(c.name != "u_mudline");
  CHECK_FALSE(rep.pass);
  const auto& mud = rep.checks.back();
  CHECK(mud.name == "phi_mudline");
  CHECK(mud.limit == 0.25);
  CHECK(mud.margin == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK_FALSE(mud.pass);

  r.phi_mudline_deg = 0.20;
  CHECK(check_strategy(r, Strategy::below_baseline_top_only, &base).pass);
}

TEST_CASE("strategy 3 applies the absolute code limits") {
  ResponseScalars r = scalars(332.3, 171.15, 18.0, 0.374, 0.22);
  const StrategyReport rep = check_strategy(r, Strategy::code_limits, nullptr);
  REQUIRE(rep.checks.size() == 4);
  CHECK(rep.pass);
  CHECK(rep.checks[0].name == "max_stress");
  CHECK(rep.checks[0].limit == 355.0);
  CHECK(rep.checks[0].margin == doctest::Approx(22.7).epsilon(1e-9));
  CHECK(rep.checks[1].limit == 172.0);
  CHECK(rep.checks[2].limit == 0.3819);
  CHECK(rep.checks[3].limit == 0.25);

  r.stress_mpa = 356.0;
  r.phi_max_deg = 0.40;
  const StrategyReport bad = check_strategy(r, Strategy::code_limits, nullptr);
  CHECK_FALSE(bad.pass);
  CHECK(bad.total_violation == doctest::Approx(1.0 + (0.40 - 0.3819)).epsilon(1e-9));
}

TEST_CASE("strategy ids round-trip and reject out-of-range values") {
  CHECK(strategy_from_int(1) == Strategy::below_baseline);
  CHECK(strategy_from_int(2) == Strategy::below_baseline_top_only);
  CHECK(strategy_from_int(3) == Strategy::code_limits);
  for (Strategy s : {Strategy::below_baseline, Strategy::below_baseline_top_only,
                     Strategy::code_limits})
    CHECK(strategy_from_int(strategy_to_int(s)) == s);
  CHECK_THROWS_AS(strategy_from_int(0), ConfigError);
  CHECK_THROWS_AS(strategy_from_int(4), ConfigError);
}

TEST_CASE("sweep csv and gradients json round out the artifacts") {
  SweepTable t;
  t.kind = "BT";
  t.rows.push_back(ok_row("baseline", 1781.0, scalars(188.64, 114.06, 27.83, 0.159, 0.0876)));
  SweepRow failed;
  failed.label = "bad";
  failed.overrides = {{"BC1_t", 500.0}};
  failed.status = "section BC1: wall too thick, d <= 2t";
  t.rows.push_back(failed);

  const std::string csv = temp_path("sweep.csv");
  write_sweep_csv(t, csv);
  std::ifstream f(csv);
  std::string header, line1, line2;
  REQUIRE(std::getline(f, header));
  CHECK(header ==
        "label,parameters,mass_t,max_stress_mpa,u_max_mm,u_mudline_mm,"
        "phi_max_deg,phi_mudline_deg,status");
  REQUIRE(std::getline(f, line1));
  CHECK(line1.find("baseline,,1781,188.64,114.06,27.83,0.159,0.0876,ok") == 0);
  REQUIRE(std::getline(f, line2));
  CHECK(line2.find("bad,BC1_t=500,,,,,,") == 0);
  CHECK(line2.find("wall too thick") != std::string::npos);

  GradientTable g = fit_gradients({t});  // one ok row -> invalid, serialized with note
  const std::string gj = temp_path("gradients.json");
  write_gradients_json(g, gj);
  std::ifstream jf(gj);
  std::stringstream buf;
  buf << jf.rdbuf();
  CHECK(buf.str().find("\"kind\": \"BT\"") != std::string::npos);
  CHECK(buf.str().find("3 successful rows") != std::string::npos);
}

TEST_CASE("shipped model: pile stick-up sweep keeps mass constant and grows displacement") {
  SweepSpec spec = make_range_sweep("PL", 1400, 5900, 1500);
  const SweepTable t = run_sweep(sim_inputs(), spec);
  REQUIRE(t.rows.size() == 5);
  for (const auto& r : t.rows) {
    REQUIRE(r.ok);
    CHECK(r.mass_t == doctest::Approx(t.rows[0].mass_t).epsilon(1e-12));
  }
  for (size_t i = 2; i < t.rows.size(); ++i)
    CHECK(t.rows[i].scalars.u_max_mm > t.rows[i - 1].scalars.u_max_mm);
}

TEST_CASE("shipped model: base-width sweep adds mass and stiffens the frame") {
  SweepSpec spec = make_range_sweep("BW", 22500, 40000, 2500);
  const SweepTable t = run_sweep(sim_inputs(), spec);
  REQUIRE(t.rows.size() == 9);
  for (const auto& r : t.rows) REQUIRE(r.ok);
  for (size_t i = 2; i < t.rows.size(); ++i) {
    CHECK(t.rows[i].mass_t > t.rows[i - 1].mass_t);
    CHECK(t.rows[i].scalars.u_max_mm < t.rows[i - 1].scalars.u_max_mm);
  }
  // Mass agreement at the published range ends: 1664 and 1838 tons within 5 %.
  CHECK(t.rows[1].mass_t == doctest::Approx(1664.0).epsilon(0.05));
  CHECK(t.rows.back().mass_t == doctest::Approx(1838.0).epsilon(0.05));
}

TEST_CASE("shipped model: leg-diameter sweep strictly lowers the peak stress") {
  const SweepTable t = run_sweep(sim_inputs(), make_combination_sweep(shipped_combinations(), "LD"));
  REQUIRE(t.rows.size() == 7);
  for (const auto& r : t.rows) REQUIRE(r.ok);
  for (size_t i = 2; i < t.rows.size(); ++i)
    CHECK(t.rows[i].scalars.stress_mpa < t.rows[i - 1].scalars.stress_mpa);
}

TEST_CASE("shipped model: brace-thickness sweep drops stress fastest at the thinnest sets") {
  const SweepTable t = run_sweep(sim_inputs(), make_combination_sweep(shipped_combinations(), "BT"));
  REQUIRE(t.rows.size() == 7);
  for (const auto& r : t.rows) REQUIRE(r.ok);
  // Rows 1..6 are Comb1..Comb6 ordered thinnest to thickest.
  CHECK(t.rows[1].scalars.stress_mpa > t.rows.back().scalars.stress_mpa);
  const double first_drop = t.rows[1].scalars.stress_mpa - t.rows[2].scalars.stress_mpa;
  CHECK(first_drop > 0.0);
  for (size_t i = 2; i + 1 < t.rows.size(); ++i)
    CHECK(first_drop > t.rows[i].scalars.stress_mpa - t.rows[i + 1].scalars.stress_mpa);
}

TEST_SUITE_END();
