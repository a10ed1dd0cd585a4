#include "jacketopt/sweep.hpp"

#include "jacketopt/errors.hpp"
#include "jsonio.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <thread>

namespace jacketopt {

namespace {

const std::set<std::string> kRangeKinds = {"PL", "BW"};
const std::set<std::string> kComboKinds = {"BD", "BT", "LD", "LT"};

bool is_thickness_kind(const std::string& kind) { return kind == "BT" || kind == "LT"; }

void require_kind(const std::string& kind, const std::set<std::string>& allowed) {
  if (!allowed.count(kind)) {
    std::ostringstream os;
    os << "unknown sweep kind '" << kind << "' (expected one of";
    for (const auto& k : allowed) os << ' ' << k;
    os << ")";
    throw ConfigError(os.str());
  }
}

std::string format_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string overrides_text(const std::vector<ParamOverride>& ovs) {
  std::string out;
  for (const auto& ov : ovs) {
    if (!out.empty()) out += ';';
    out += ov.param + '=' + format_num(ov.value);
  }
  return out;
}

}  // namespace

ResponseScalars governing_scalars(const SolveResult& r) {
  ResponseScalars s;
  s.stress_mpa = r.max_stress_mpa;
  s.u_max_mm = r.u_overall_max_mm;
  s.u_mudline_mm = r.u_mudline_max_mm;
  s.phi_max_deg = r.phi_overall_tilt_deg;
  s.phi_mudline_deg = r.phi_mudline_tilt_deg;
  return s;
}

SweepSpec make_range_sweep(const std::string& kind, double from_mm, double to_mm,
                           double step_mm) {
  require_kind(kind, kRangeKinds);
  if (step_mm <= 0.0) throw ConfigError("sweep step must be positive");
  if (to_mm < from_mm) throw ConfigError("sweep range must be ordered (from <= to)");
  SweepSpec spec;
  spec.kind = kind;
  // Half-step slack keeps the inclusive upper bound robust to rounding.
  for (double v = from_mm; v <= to_mm + 0.5 * step_mm; v += step_mm) {
    SweepPoint p;
    p.label = kind + "=" + format_num(v);
    p.overrides.push_back({kind, v});
    spec.points.push_back(std::move(p));
  }
  return spec;
}

CombinationSets parse_combinations(const std::string& path) {
  const jsonio::json root = jsonio::load_file(path);
  if (!root.is_object()) throw ConfigError(path + ": expected a JSON object");
  CombinationSets sets;
  for (const auto& [key, val] : root.items()) {
    if (key == "note" || key == "source") {
      sets.note = val.is_string() ? val.get<std::string>() : "";
      continue;
    }
    require_kind(key, kComboKinds);
    if (!val.is_object()) throw ConfigError(path + ": " + key + " must map names to value sets");
    const std::string want_suffix = is_thickness_kind(key) ? "t" : "d";
    std::vector<SweepPoint>& points = sets.kinds[key];
    std::set<std::string> first_params;
    for (const auto& [name, combo] : val.items()) {
      if (!combo.is_object())
        throw ConfigError(path + ": " + key + "." + name + " must be a group->value map");
      SweepPoint p;
      p.label = name;
      std::set<std::string> params;
      for (const auto& [param, num] : combo.items()) {
        if (!num.is_number())
          throw ConfigError(path + ": " + key + "." + name + "." + param + " must be a number");
        if (param.size() < 3 || param.substr(param.size() - 1) != want_suffix ||
            (param[param.size() - 2] != '_' && param[param.size() - 2] != '-'))
          throw ConfigError(path + ": parameter " + param + " does not belong to kind " + key);
        p.overrides.push_back({param, num.get<double>()});
        params.insert(param);
      }
      if (p.overrides.empty())
        throw ConfigError(path + ": " + key + "." + name + " is empty");
      if (points.empty())
        first_params = params;
      else if (params != first_params)
        throw ConfigError(path + ": " + key + "." + name +
                          " does not cover the same groups as the other combinations");
      points.push_back(std::move(p));
    }
    // items() follows nlohmann's sorted key order, which already matches the
    // Comb1..CombN naming; sort defensively in case of other labels.
    std::sort(points.begin(), points.end(),
              [](const SweepPoint& a, const SweepPoint& b) { return a.label < b.label; });
    if (points.empty()) throw ConfigError(path + ": " + key + " has no combinations");
  }
  return sets;
}

SweepSpec make_combination_sweep(const CombinationSets& sets, const std::string& kind) {
  require_kind(kind, kComboKinds);
  auto it = sets.kinds.find(kind);
  if (it == sets.kinds.end())
    throw ConfigError("combinations file has no entry for kind " + kind);
  SweepSpec spec;
  spec.kind = kind;
  spec.points = it->second;
  return spec;
}

SweepTable run_sweep(const SimInputs& in, const SweepSpec& spec) {
  if (!kRangeKinds.count(spec.kind)) require_kind(spec.kind, kComboKinds);

  SweepTable table;
  table.kind = spec.kind;
  table.rows.resize(spec.points.size() + 1);
  table.rows[0].label = "baseline";
  for (size_t i = 0; i < spec.points.size(); ++i) {
    table.rows[i + 1].label = spec.points[i].label;
    table.rows[i + 1].overrides = spec.points[i].overrides;
  }

  auto evaluate = [&](SweepRow& row) {
    try {
      const SimResult sim = simulate_variant(in, row.overrides, spec.options);
      row.mass_t = sim.mass_t;
      row.scalars = governing_scalars(sim.response);
      row.ok = true;
      row.status = "ok";
    } catch (const std::exception& e) {
      row.ok = false;
      row.status = e.what();
    }
  };

  const int workers = std::max(1, spec.workers);
  if (workers == 1 || table.rows.size() <= 1) {
    for (auto& row : table.rows) evaluate(row);
  } else {
    std::atomic<size_t> next{0};
    auto drain = [&] {
      for (size_t i = next.fetch_add(1); i < table.rows.size(); i = next.fetch_add(1))
        evaluate(table.rows[i]);
    };
    std::vector<std::thread> pool;
    const size_t n = std::min<size_t>(workers, table.rows.size());
    pool.reserve(n);
    for (size_t i = 0; i < n; ++i) pool.emplace_back(drain);
    for (auto& t : pool) t.join();
  }
  return table;
}

void write_sweep_csv(const SweepTable& table, const std::string& path) {
  std::ostringstream os;
  os << "label,parameters,mass_t,max_stress_mpa,u_max_mm,u_mudline_mm,"
        "phi_max_deg,phi_mudline_deg,status\n";
  for (const auto& row : table.rows) {
    os << row.label << ',' << overrides_text(row.overrides) << ',';
    if (row.ok) {
      os << format_num(row.mass_t) << ',' << format_num(row.scalars.stress_mpa) << ','
         << format_num(row.scalars.u_max_mm) << ',' << format_num(row.scalars.u_mudline_mm) << ','
         << format_num(row.scalars.phi_max_deg) << ',' << format_num(row.scalars.phi_mudline_deg);
    } else {
      os << ",,,,,";
    }
    // Quote the status so failure messages with commas stay in one cell.
    std::string status = row.status;
    if (status.find_first_of(",\"\n") != std::string::npos) {
      std::string quoted = "\"";
      for (char c : status) {
        if (c == '"') quoted += '"';
        quoted += c == '\n' ? ' ' : c;
      }
      quoted += '"';
      status = quoted;
    }
    os << ',' << status << '\n';
  }
  jsonio::write_file_atomic(path, os.str());
}

GradientTable fit_gradients(const std::vector<SweepTable>& tables) {
  GradientTable out;
  for (const auto& table : tables) {
    GradientRow g;
    std::vector<const SweepRow*> rows;
    for (const auto& r : table.rows)
      if (r.ok) rows.push_back(&r);
    g.points = static_cast<int>(rows.size());
    if (rows.size() < 3) {
      g.note = "needs at least 3 successful rows";
    } else {
      double m_min = rows[0]->mass_t, m_max = rows[0]->mass_t;
      double m_mean = 0.0;
      for (const auto* r : rows) {
        m_min = std::min(m_min, r->mass_t);
        m_max = std::max(m_max, r->mass_t);
        m_mean += r->mass_t;
      }
      m_mean /= static_cast<double>(rows.size());
      if (m_max - m_min < 1e-6 * std::max(1.0, std::abs(m_mean))) {
        g.note = "constant mass across the sweep; per-ton gradients are undefined";
      } else {
        auto slope = [&](auto pick) {
          double sxx = 0.0, sxy = 0.0, y_mean = 0.0;
          for (const auto* r : rows) y_mean += pick(r->scalars);
          y_mean /= static_cast<double>(rows.size());
          for (const auto* r : rows) {
            const double dm = r->mass_t - m_mean;
            sxx += dm * dm;
            sxy += dm * (pick(r->scalars) - y_mean);
          }
          return sxy / sxx;
        };
        g.per_ton.stress_mpa = slope([](const ResponseScalars& s) { return s.stress_mpa; });
        g.per_ton.u_max_mm = slope([](const ResponseScalars& s) { return s.u_max_mm; });
        g.per_ton.u_mudline_mm = slope([](const ResponseScalars& s) { return s.u_mudline_mm; });
        g.per_ton.phi_max_deg = slope([](const ResponseScalars& s) { return s.phi_max_deg; });
        g.per_ton.phi_mudline_deg = slope([](const ResponseScalars& s) { return s.phi_mudline_deg; });
        g.valid = true;
      }
    }
    out.kinds.emplace_back(table.kind, std::move(g));
  }
  return out;
}

void write_gradients_json(const GradientTable& grads, const std::string& path) {
  jsonio::json root;
  root["unit"] = "response change per ton of added mass";
  jsonio::json list = jsonio::json::array();
  for (const auto& [kind, g] : grads.kinds) {
    jsonio::json e;
    e["kind"] = kind;
    e["valid"] = g.valid;
    e["points"] = g.points;
    if (g.valid) {
      e["stress_mpa_per_t"] = g.per_ton.stress_mpa;
      e["u_max_mm_per_t"] = g.per_ton.u_max_mm;
      e["u_mudline_mm_per_t"] = g.per_ton.u_mudline_mm;
      e["phi_max_deg_per_t"] = g.per_ton.phi_max_deg;
      e["phi_mudline_deg_per_t"] = g.per_ton.phi_mudline_deg;
    } else {
      e["note"] = g.note;
    }
    list.push_back(std::move(e));
  }
  root["gradients"] = std::move(list);
  jsonio::write_file_atomic(path, root.dump(2) + "\n");
}

EstimatedChange estimate_changes(const GradientTable& grads,
                                 const std::vector<KindSelection>& picks) {
  EstimatedChange est;
  for (const auto& pick : picks) {
    const GradientRow* g = nullptr;
    for (const auto& [kind, row] : grads.kinds)
      if (kind == pick.kind) g = &row;
    if (!g) throw ConfigError("no fitted gradient for kind " + pick.kind);
    if (!g->valid)
      throw ConfigError("gradient for kind " + pick.kind + " is unavailable: " + g->note);
    est.mass_delta_t += pick.mass_delta_t;
    est.delta.stress_mpa += g->per_ton.stress_mpa * pick.mass_delta_t;
    est.delta.u_max_mm += g->per_ton.u_max_mm * pick.mass_delta_t;
    est.delta.u_mudline_mm += g->per_ton.u_mudline_mm * pick.mass_delta_t;
    est.delta.phi_max_deg += g->per_ton.phi_max_deg * pick.mass_delta_t;
    est.delta.phi_mudline_deg += g->per_ton.phi_mudline_deg * pick.mass_delta_t;
  }
  return est;
}

Strategy strategy_from_int(int n) {
  switch (n) {
    case 1: return Strategy::below_baseline;
    case 2: return Strategy::below_baseline_top_only;
    case 3: return Strategy::code_limits;
    default: throw ConfigError("strategy must be 1, 2 or 3");
  }
}

int strategy_to_int(Strategy s) { return static_cast<int>(s); }

StrategyReport check_strategy(const ResponseScalars& result, Strategy strategy,
                              const ResponseScalars* baseline) {
  if (strategy != Strategy::code_limits && baseline == nullptr)
    throw ConfigError("baseline-relative strategies need the baseline response");

  StrategyReport rep;
  rep.strategy = strategy;
  auto add = [&rep](const std::string& name, double value, double limit) {
    ConstraintCheck c;
    c.name = name;
    c.value = value;
    c.limit = limit;
    c.margin = limit - value;
    c.pass = value < limit;
    rep.checks.push_back(std::move(c));
  };

  switch (strategy) {
    case Strategy::below_baseline:
      add("max_stress", result.stress_mpa, baseline->stress_mpa);
      add("u_max", result.u_max_mm, baseline->u_max_mm);
      add("phi_max", result.phi_max_deg, baseline->phi_max_deg);
      add("u_mudline", result.u_mudline_mm, baseline->u_mudline_mm);
      add("phi_mudline", result.phi_mudline_deg, baseline->phi_mudline_deg);
      break;
    case Strategy::below_baseline_top_only:
      add("max_stress", result.stress_mpa, baseline->stress_mpa);
      add("u_max", result.u_max_mm, baseline->u_max_mm);
      add("phi_max", result.phi_max_deg, baseline->phi_max_deg);
      add("phi_mudline", result.phi_mudline_deg, kMudlineTiltCapDeg);
      break;
    case Strategy::code_limits:
      add("max_stress", result.stress_mpa, kYieldStressMpa);
      add("u_max", result.u_max_mm, kDriftCapMm);
      add("phi_max", result.phi_max_deg, kTiltCapDeg);
      add("phi_mudline", result.phi_mudline_deg, kMudlineTiltCapDeg);
      break;
  }

  rep.pass = true;
  for (const auto& c : rep.checks) {
    rep.pass = rep.pass && c.pass;
    rep.total_violation += std::max(0.0, -c.margin);
  }
  return rep;
}

StrategyReport check_strategy(const SolveResult& result, Strategy strategy,
                              const SolveResult* baseline) {
  const ResponseScalars r = governing_scalars(result);
  if (baseline == nullptr) return check_strategy(r, strategy, nullptr);
  const ResponseScalars b = governing_scalars(*baseline);
  return check_strategy(r, strategy, &b);
}

}  // namespace jacketopt
