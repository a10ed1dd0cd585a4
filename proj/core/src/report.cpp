#include "jacketopt/report.hpp"

#include "jacketopt/errors.hpp"
#include "jsonio.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace jacketopt {

namespace {

std::string format_num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string fixed1(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.1f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

// One table line: label, mass and the five scalars, any cell may be blank.
struct Cells {
  std::string label, mass, stress, u, umud, phi, phimud;
};

Cells value_cells(const ResultEntry& e) {
  return {e.model,
          format_num(e.mass_t),
          format_num(e.scalars.stress_mpa),
          format_num(e.scalars.u_max_mm),
          format_num(e.scalars.u_mudline_mm),
          format_num(e.scalars.phi_max_deg),
          format_num(e.scalars.phi_mudline_deg)};
}

Cells limit_cells(const ReportOptions& opt) {
  switch (opt.strategy) {
    case Strategy::below_baseline:
      if (!opt.baseline) throw ConfigError("strategy 1 limits need baseline responses");
      return {"baseline limits (strategy 1)",
              "",
              format_num(opt.baseline->stress_mpa),
              format_num(opt.baseline->u_max_mm),
              format_num(opt.baseline->u_mudline_mm),
              format_num(opt.baseline->phi_max_deg),
              format_num(opt.baseline->phi_mudline_deg)};
    case Strategy::below_baseline_top_only:
      if (!opt.baseline) throw ConfigError("strategy 2 limits need baseline responses");
      return {"limits (strategy 2)",
              "",
              format_num(opt.baseline->stress_mpa),
              format_num(opt.baseline->u_max_mm),
              "",
              format_num(opt.baseline->phi_max_deg),
              fixed4(kMudlineTiltCapDeg)};
    case Strategy::code_limits:
      return {"code limits (strategy 3)",
              "",
              fixed1(kYieldStressMpa),
              fixed1(kDriftCapMm),
              "",
              fixed4(kTiltCapDeg),
              fixed4(kMudlineTiltCapDeg)};
  }
  throw ConfigError("unknown strategy");
}

std::string csv_line(const Cells& c) {
  return c.label + ',' + c.mass + ',' + c.stress + ',' + c.u + ',' + c.umud + ',' + c.phi +
         ',' + c.phimud + '\n';
}

std::string md_cell(const std::string& s) { return s.empty() ? "-" : s; }

std::string md_line(const Cells& c) {
  return "| " + md_cell(c.label) + " | " + md_cell(c.mass) + " | " + md_cell(c.stress) +
         " | " + md_cell(c.u) + " | " + md_cell(c.umud) + " | " + md_cell(c.phi) + " | " +
         md_cell(c.phimud) + " |\n";
}

Cells md_value_cells(const ResultEntry& e) {
  char mass[48], stress[48], u[48], umud[48];
  std::snprintf(mass, sizeof(mass), "%.2f", e.mass_t);
  std::snprintf(stress, sizeof(stress), "%.2f", e.scalars.stress_mpa);
  std::snprintf(u, sizeof(u), "%.2f", e.scalars.u_max_mm);
  std::snprintf(umud, sizeof(umud), "%.2f", e.scalars.u_mudline_mm);
  return {e.model, mass,       stress,
          u,       umud,       fixed4(e.scalars.phi_max_deg),
          fixed4(e.scalars.phi_mudline_deg)};
}

}  // namespace

std::string result_json(const std::string& model_label, const SimOptions& opt,
                        const SimResult& res) {
  using jsonio::json;
  const ResponseScalars s = governing_scalars(res.response);
  json root;
  root["model"] = model_label;
  root["combination"] = opt.combination;
  root["water_level"] = opt.water_level;
  root["support"] = opt.support == Support::spring ? "spring" : "fixed";
  root["mass_t"] = res.mass_t;
  root["max_stress_mpa"] = s.stress_mpa;
  root["u_max_mm"] = s.u_max_mm;
  root["u_mudline_mm"] = s.u_mudline_mm;
  root["phi_max_deg"] = s.phi_max_deg;
  root["phi_mudline_deg"] = s.phi_mudline_deg;
  root["warnings"] = res.warnings;
  return root.dump(2) + "\n";
}

ResultEntry parse_result_file(const std::string& path) {
  const jsonio::json root = jsonio::load_file(path);
  if (!root.is_object()) throw ConfigError(path + ": expected a JSON object");

  ResultEntry e;
  e.source_path = path;

  if (root.contains("best") && root.contains("baseline")) {
    // Optimizer summary: report the best design found.
    const jsonio::json& best = root.at("best");
    if (best.contains("failed") && best.at("failed").is_boolean() && best.at("failed").get<bool>())
      throw ConfigError(path + ": the optimization's best design failed to evaluate");
    e.from_optimizer = true;
    const std::string dir = std::filesystem::path(path).parent_path().filename().string();
    e.model = dir.empty() ? "optimized" : dir;
    e.mass_t = jsonio::get_num(best, path, "mass_t");
    e.scalars.stress_mpa = jsonio::get_num(best, path, "max_stress_mpa");
    e.scalars.u_max_mm = jsonio::get_num(best, path, "u_max_mm");
    e.scalars.u_mudline_mm = jsonio::get_num(best, path, "u_mudline_mm");
    e.scalars.phi_max_deg = jsonio::get_num(best, path, "phi_max_deg");
    e.scalars.phi_mudline_deg = jsonio::get_num(best, path, "phi_mudline_deg");
    return e;
  }

  e.model = jsonio::get_str(root, path, "model");
  e.mass_t = jsonio::get_num(root, path, "mass_t");
  e.scalars.stress_mpa = jsonio::get_num(root, path, "max_stress_mpa");
  e.scalars.u_max_mm = jsonio::get_num(root, path, "u_max_mm");
  e.scalars.u_mudline_mm = jsonio::get_num(root, path, "u_mudline_mm");
  e.scalars.phi_max_deg = jsonio::get_num(root, path, "phi_max_deg");
  e.scalars.phi_mudline_deg = jsonio::get_num(root, path, "phi_mudline_deg");
  return e;
}

std::vector<ResultEntry> sort_by_mass(std::vector<ResultEntry> entries) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ResultEntry& a, const ResultEntry& b) { return a.mass_t < b.mass_t; });
  return entries;
}

ReportBundle build_report(std::vector<ResultEntry> entries, const ReportOptions& opt) {
  if (entries.empty()) throw ConfigError("report needs at least one result");
  if (opt.strategy != Strategy::code_limits && !opt.baseline)
    throw ConfigError("strategies 1 and 2 need a baseline result for the limits");
  entries = sort_by_mass(std::move(entries));
  const Cells limits = limit_cells(opt);

  ReportBundle out;

  std::ostringstream csv;
  csv << "model,mass_t,max_stress_mpa,u_max_mm,u_mudline_mm,phi_max_deg,phi_mudline_deg\n";
  for (const auto& e : entries) csv << csv_line(value_cells(e));
  csv << csv_line(limits);
  out.table_csv = csv.str();

  std::ostringstream md;
  md << "| model | mass (t) | max stress (MPa) | max displacement (mm) | mudline displacement "
        "(mm) | max rotation (deg) | mudline rotation (deg) |\n";
  md << "| --- | --- | --- | --- | --- | --- | --- |\n";
  for (const auto& e : entries) md << md_line(md_value_cells(e));
  md << md_line(limits);
  out.table_md = md.str();

  std::ostringstream margins;
  margins << "model,constraint,value,limit,margin,pass\n";
  for (const auto& e : entries) {
    const StrategyReport rep = check_strategy(e.scalars, opt.strategy, opt.baseline);
    for (const auto& c : rep.checks)
      margins << e.model << ',' << c.name << ',' << format_num(c.value) << ','
              << format_num(c.limit) << ',' << format_num(c.margin) << ',' << (c.pass ? 1 : 0)
              << '\n';
  }
  out.margins_csv = margins.str();
  return out;
}

std::string plot_fitness_csv(const std::vector<ResultEntry>& entries) {
  std::ostringstream os;
  os << "model,generation,best_fitness,mean_fitness\n";
  for (const auto& e : entries) {
    if (!e.from_optimizer) continue;
    const std::filesystem::path hist =
        std::filesystem::path(e.source_path).parent_path() / "ga_history.csv";
    std::ifstream in(hist);
    if (!in) continue;
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
      if (header) {
        header = false;
        continue;
      }
      // generation,best_fitness,mean_fitness are the first three columns.
      size_t p1 = line.find(',');
      if (p1 == std::string::npos) continue;
      size_t p2 = line.find(',', p1 + 1);
      if (p2 == std::string::npos) continue;
      size_t p3 = line.find(',', p2 + 1);
      os << e.model << ',' << line.substr(0, p3 == std::string::npos ? line.size() : p3) << '\n';
    }
  }
  return os.str();
}

}  // namespace jacketopt
