#include "jacketopt/loads.hpp"

#include "jsonio.hpp"

#include <cmath>
#include <cstdlib>

namespace jacketopt {

const WaveScenario& WaveEnvironment::require(const std::string& name) const {
  for (const auto& w : waves)
    if (w.name == name) return w;
  throw ConfigError("unknown wave scenario: " + name);
}

double WaveEnvironment::level_depth_m(const std::string& level) const {
  const auto it = water_levels_m.find(level);
  if (it == water_levels_m.end()) throw ConfigError("unknown water level: " + level);
  return it->second;
}

WaveEnvironment parse_waves(const std::string& path) {
  using jsonio::json;
  const json j = jsonio::load_file(path);
  jsonio::check_keys(j, path, {"rho_w_kg_m3", "g_m_s2", "water_levels_m", "waves"},
                     {"direction_deg", "notes"});
  WaveEnvironment env;
  env.rho_kg_m3 = jsonio::get_num(j, path, "rho_w_kg_m3");
  env.g_m_s2 = jsonio::get_num(j, path, "g_m_s2");
  env.direction_deg = jsonio::get_num_or(j, "direction_deg", 45.0);
  if (env.rho_kg_m3 <= 0 || env.g_m_s2 <= 0)
    throw ConfigError(path + ": water density and gravity must be positive");

  const json& levels = j.at("water_levels_m");
  if (!levels.is_object()) throw ConfigError(path + ": water_levels_m must be an object");
  for (const auto& [name, v] : levels.items()) {
    if (name != "LWL" && name != "MWL" && name != "HWL")
      throw ConfigError(path + ": water level must be LWL, MWL or HWL, got " + name);
    if (!v.is_number() || v.get<double>() <= 0)
      throw ConfigError(path + ": water level " + name + " must be a positive depth");
    env.water_levels_m[name] = v.get<double>();
  }
  if (env.water_levels_m.empty()) throw ConfigError(path + ": no water levels");

  for (const auto& e : j.at("waves")) {
    const std::string where = path + " wave entry";
    jsonio::check_keys(e, where, {"name", "Hs_m", "Tp_s", "L_m"}, {"notes"});
    WaveScenario w;
    w.name = jsonio::get_str(e, where, "name");
    w.hs_m = jsonio::get_num(e, where, "Hs_m");
    w.tp_s = jsonio::get_num(e, where, "Tp_s");
    w.length_m = jsonio::get_num(e, where, "L_m");
    if (w.hs_m < 0 || w.tp_s <= 0 || w.length_m <= 0)
      throw ConfigError(where + " " + w.name + ": needs Hs >= 0, Tp > 0, L > 0");
    for (const auto& prev : env.waves)
      if (prev.name == w.name) throw ConfigError(path + ": duplicate wave name " + w.name);
    env.waves.push_back(std::move(w));
  }
  return env;
}

const LoadCaseDef& LoadSet::require(const std::string& name) const {
  for (const auto& c : cases)
    if (c.name == name) return c;
  throw ConfigError("unknown load case: " + name);
}

const std::vector<CombinationTerm>& LoadSet::require_combination(const std::string& name) const {
  for (const auto& [n, terms] : combinations)
    if (n == name) return terms;
  throw ConfigError("unknown load combination: " + name);
}

LoadSet parse_loads(const std::string& path) {
  using jsonio::json;
  const json j = jsonio::load_file(path);
  jsonio::check_keys(j, path, {"cases"}, {"combinations", "notes"});
  LoadSet set;
  for (const auto& e : j.at("cases")) {
    const std::string where = path + " load case";
    jsonio::check_keys(e, where, {"name"},
                       {"Fx_kN", "Fy_kN", "Fz_kN", "Mx_kNm", "My_kNm", "Mz_kNm",
                        "self_weight", "wave", "notes"});
    LoadCaseDef c;
    c.name = jsonio::get_str(e, where, "name");
    c.rp.fx_n = jsonio::get_num_or(e, "Fx_kN", 0.0) * 1e3;
    c.rp.fy_n = jsonio::get_num_or(e, "Fy_kN", 0.0) * 1e3;
    c.rp.fz_n = jsonio::get_num_or(e, "Fz_kN", 0.0) * 1e3;
    c.rp.mx_nmm = jsonio::get_num_or(e, "Mx_kNm", 0.0) * 1e6;
    c.rp.my_nmm = jsonio::get_num_or(e, "My_kNm", 0.0) * 1e6;
    c.rp.mz_nmm = jsonio::get_num_or(e, "Mz_kNm", 0.0) * 1e6;
    if (e.contains("self_weight")) {
      if (!e.at("self_weight").is_boolean())
        throw ConfigError(where + " " + c.name + ": self_weight must be a boolean");
      c.self_weight = e.at("self_weight").get<bool>();
    }
    if (e.contains("wave")) c.wave = jsonio::get_str(e, where, "wave");
    for (const auto& prev : set.cases)
      if (prev.name == c.name) throw ConfigError(path + ": duplicate load case " + c.name);
    set.cases.push_back(std::move(c));
  }
  if (j.contains("combinations")) {
    for (const auto& e : j.at("combinations")) {
      const std::string where = path + " combination";
      jsonio::check_keys(e, where, {"name", "expr"}, {"notes"});
      const std::string name = jsonio::get_str(e, where, "name");
      auto terms = parse_combination(jsonio::get_str(e, where, "expr"));
      for (const auto& t : terms) set.require(t.case_name);  // must resolve
      set.combinations.emplace_back(name, std::move(terms));
    }
  }
  return set;
}

std::vector<CombinationTerm> parse_combination(const std::string& expr) {
  std::vector<CombinationTerm> terms;
  size_t pos = 0;
  while (pos <= expr.size()) {
    size_t plus = expr.find('+', pos);
    if (plus == std::string::npos) plus = expr.size();
    std::string term = expr.substr(pos, plus - pos);
    pos = plus + 1;

    // Split the term on '*': numeric tokens multiply into the factor, the
    // single remaining token is the case name.
    double factor = 1.0;
    std::string name;
    size_t tpos = 0;
    while (tpos <= term.size()) {
      size_t star = term.find('*', tpos);
      if (star == std::string::npos) star = term.size();
      std::string tok = term.substr(tpos, star - tpos);
      tpos = star + 1;
      // Trim whitespace and a single layer of parentheses.
      const auto first = tok.find_first_not_of(" \t");
      if (first == std::string::npos) {
        if (star == term.size() && tpos > term.size()) break;
        throw ConfigError("empty token in load combination term: \"" + term + "\"");
      }
      tok = tok.substr(first, tok.find_last_not_of(" \t") - first + 1);
      if (tok.size() >= 2 && tok.front() == '(' && tok.back() == ')')
        tok = tok.substr(1, tok.size() - 2);
      if (tok.empty()) throw ConfigError("empty token in load combination: \"" + expr + "\"");

      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() + tok.size()) {
        factor *= v;
      } else {
        if (!name.empty())
          throw ConfigError("load combination term has two case names: \"" + term + "\"");
        name = tok;
      }
      if (tpos > term.size()) break;
    }
    if (name.empty())
      throw ConfigError("load combination term has no case name: \"" + term + "\"");
    terms.push_back({factor, name});
  }
  if (terms.empty()) throw ConfigError("empty load combination expression");
  return terms;
}

CombinedLoading combine_loads(const LoadSet& set, const std::vector<CombinationTerm>& terms) {
  CombinedLoading out;
  for (const auto& t : terms) {
    if (!std::isfinite(t.factor))
      throw ConfigError("non-finite factor in load combination");
    const LoadCaseDef& c = set.require(t.case_name);
    out.rp.fx_n += t.factor * c.rp.fx_n;
    out.rp.fy_n += t.factor * c.rp.fy_n;
    out.rp.fz_n += t.factor * c.rp.fz_n;
    out.rp.mx_nmm += t.factor * c.rp.mx_nmm;
    out.rp.my_nmm += t.factor * c.rp.my_nmm;
    out.rp.mz_nmm += t.factor * c.rp.mz_nmm;
    if (c.self_weight) out.self_weight_factor += t.factor;
    if (!c.wave.empty()) out.waves.emplace_back(t.factor, c.wave);
  }
  return out;
}

}  // namespace jacketopt
