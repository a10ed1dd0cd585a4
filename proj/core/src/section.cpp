#include "jacketopt/section.hpp"

#include "jsonio.hpp"

#include <cmath>
#include <numbers>

namespace jacketopt {

TubeProps tube_props(const TubeGeom& g) {
  if (g.d_mm <= 0.0 || g.t_mm <= 0.0)
    throw ConfigError("tube geometry must have positive diameter and thickness");
  if (g.d_mm <= 2.0 * g.t_mm)
    throw ConfigError("tube wall too thick: d <= 2t for d=" + std::to_string(g.d_mm) +
                      " t=" + std::to_string(g.t_mm));
  const double ro = 0.5 * g.d_mm;
  const double ri = ro - g.t_mm;
  const double pi = std::numbers::pi;
  TubeProps p;
  p.area_mm2 = pi * (ro * ro - ri * ri);
  p.inertia_mm4 = pi / 4.0 * (std::pow(ro, 4) - std::pow(ri, 4));
  p.torsion_mm4 = 2.0 * p.inertia_mm4;
  return p;
}

TubeGeom SectionDef::at(double s) const {
  TubeGeom g;
  g.d_mm = d_start_mm + (d_end_mm - d_start_mm) * s;
  g.t_mm = t_mm;
  return g;
}

const SectionDef* SectionSet::find(const std::string& label) const {
  for (const auto& s : sections)
    if (s.label == label) return &s;
  return nullptr;
}

SectionDef& SectionSet::require(const std::string& label) {
  for (auto& s : sections)
    if (s.label == label) return s;
  throw ConfigError("unknown section label: " + label);
}

const SectionDef& SectionSet::require(const std::string& label) const {
  const SectionDef* s = find(label);
  if (!s) throw ConfigError("unknown section label: " + label);
  return *s;
}

SectionSet parse_sections(const std::string& path) {
  using jsonio::json;
  const json j = jsonio::load_file(path);
  jsonio::check_keys(j, path, {"sections"}, {"notes"});
  if (!j.at("sections").is_array()) throw ConfigError(path + ": \"sections\" must be an array");

  SectionSet set;
  for (const auto& e : j.at("sections")) {
    const std::string where = path + " section entry";
    jsonio::check_keys(e, where, {"label", "d_outer", "t_wall"}, {"notes"});
    SectionDef s;
    s.label = jsonio::get_str(e, where, "label");
    s.t_mm = jsonio::get_num(e, where, "t_wall");
    const json& d = e.at("d_outer");
    if (d.is_number()) {
      s.d_start_mm = s.d_end_mm = d.get<double>();
      s.tapered = false;
    } else if (d.is_array() && d.size() == 2 && d[0].is_number() && d[1].is_number()) {
      s.d_start_mm = d[0].get<double>();
      s.d_end_mm = d[1].get<double>();
      s.tapered = true;
    } else {
      throw ConfigError(where + " \"" + s.label +
                        "\": d_outer must be a number or a [d_start, d_end] pair");
    }
    if (set.find(s.label)) throw ConfigError(path + ": duplicate section label " + s.label);
    tube_props(s.at(0.0));  // validates d > 2t at both ends
    tube_props(s.at(1.0));
    set.sections.push_back(std::move(s));
  }
  return set;
}

std::string serialize_sections(const SectionSet& set) {
  using jsonio::json;
  json arr = json::array();
  for (const auto& s : set.sections) {
    json e;
    e["label"] = s.label;
    if (s.tapered)
      e["d_outer"] = json::array({s.d_start_mm, s.d_end_mm});
    else
      e["d_outer"] = s.d_start_mm;
    e["t_wall"] = s.t_mm;
    arr.push_back(std::move(e));
  }
  json j;
  j["sections"] = std::move(arr);
  return j.dump(2) + "\n";
}

void write_sections(const SectionSet& set, const std::string& path) {
  jsonio::write_file_atomic(path, serialize_sections(set));
}

}  // namespace jacketopt
