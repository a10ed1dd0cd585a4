#include "jacketopt/model.hpp"

#include "jsonio.hpp"

#include <cmath>

namespace jacketopt {

MaterialSpec parse_material(const std::string& path) {
  using jsonio::json;
  const json j = jsonio::load_file(path);
  jsonio::check_keys(j, path, {"E_MPa", "nu", "rho_kg_m3", "sigma_y_MPa"}, {"notes"});
  MaterialSpec m;
  m.e_mpa = jsonio::get_num(j, path, "E_MPa");
  m.nu = jsonio::get_num(j, path, "nu");
  // kg/m^3 -> t/mm^3 (the solver works in N, mm, tonnes, seconds).
  m.rho_t_mm3 = jsonio::get_num(j, path, "rho_kg_m3") * 1e-12;
  m.fy_mpa = jsonio::get_num(j, path, "sigma_y_MPa");
  if (m.e_mpa <= 0 || m.rho_t_mm3 <= 0 || m.fy_mpa <= 0)
    throw ConfigError(path + ": material constants must be positive");
  return m;
}

double JacketParams::chain_length_mm() const {
  double s = 0.0;
  for (const auto& e : leg_chain) s += e.length_mm;
  return s;
}

double JacketParams::chain_station_bottom(const std::string& group) const {
  double s = 0.0;
  for (const auto& e : leg_chain) {
    if (e.group == group) return s;
    s += e.length_mm;
  }
  throw ConfigError("group not in leg chain: " + group);
}

double JacketParams::chain_station_top(const std::string& group) const {
  double s = 0.0;
  for (const auto& e : leg_chain) {
    s += e.length_mm;
    if (e.group == group) return s;
  }
  throw ConfigError("group not in leg chain: " + group);
}

double JacketParams::top_elevation_mm() const {
  // The chain length is the hypotenuse; the horizontal run follows from the
  // footprint shrink between pile head and top, split equally in x and y.
  const double s = chain_length_mm();
  const double half_shrink = 0.5 * (base_width_mm - top_width_mm);
  const double run2 = 2.0 * half_shrink * half_shrink;  // squared diagonal run
  const double h2 = s * s - run2;
  if (h2 <= 0.0)
    throw ConfigError("leg chain too short for the base/top width difference");
  return pile_length_mm + std::sqrt(h2);
}

void JacketParams::apply_taper_ties() {
  for (const auto& [target, srcs] : taper_ties) {
    SectionDef& t = sections.require(target);
    if (!t.tapered) throw ConfigError("taper tie target is not tapered: " + target);
    t.d_start_mm = sections.require(srcs.first).d_start_mm;
    t.d_end_mm = sections.require(srcs.second).d_end_mm;
  }
}

JacketParams parse_model_files(const std::string& model_path,
                               const std::string& sections_path,
                               const std::string& material_path) {
  using jsonio::json;
  const json j = jsonio::load_file(model_path);
  jsonio::check_keys(j, model_path,
                     {"name", "base_width_mm", "top_width_mm", "pile_length_mm",
                      "pile_embed_mm", "pile_group", "leg_chain", "bays"},
                     {"top_frame_mass_t", "mesh_size_mm", "taper_ties", "notes"});

  JacketParams p;
  p.name = jsonio::get_str(j, model_path, "name");
  p.base_width_mm = jsonio::get_num(j, model_path, "base_width_mm");
  p.top_width_mm = jsonio::get_num(j, model_path, "top_width_mm");
  p.pile_length_mm = jsonio::get_num(j, model_path, "pile_length_mm");
  p.pile_embed_mm = jsonio::get_num(j, model_path, "pile_embed_mm");
  p.pile_group = jsonio::get_str(j, model_path, "pile_group");
  p.top_frame_mass_t = jsonio::get_num_or(j, "top_frame_mass_t", 0.0);
  p.mesh_size_mm = jsonio::get_num_or(j, "mesh_size_mm", 1000.0);
  if (p.base_width_mm <= p.top_width_mm)
    throw ConfigError(model_path + ": base width must exceed top width");
  if (p.pile_length_mm < 0 || p.pile_embed_mm <= 0 || p.mesh_size_mm <= 0)
    throw ConfigError(model_path + ": nonpositive length parameter");

  for (const auto& e : j.at("leg_chain")) {
    const std::string where = model_path + " leg_chain entry";
    jsonio::check_keys(e, where, {"group", "length_mm"});
    ChainEntry c;
    c.group = jsonio::get_str(e, where, "group");
    c.length_mm = jsonio::get_num(e, where, "length_mm");
    if (c.length_mm <= 0) throw ConfigError(where + " " + c.group + ": nonpositive length");
    for (const auto& prev : p.leg_chain)
      if (prev.group == c.group)
        throw ConfigError(model_path + ": duplicate leg chain group " + c.group);
    p.leg_chain.push_back(std::move(c));
  }
  if (p.leg_chain.empty()) throw ConfigError(model_path + ": empty leg_chain");

  for (const auto& e : j.at("bays")) {
    const std::string where = model_path + " bay entry";
    jsonio::check_keys(e, where,
                       {"from", "to", "brace_group", "joint_group", "joint_can_length_mm",
                        "stub_bottom_group", "stub_bottom_length_mm", "stub_top_group",
                        "stub_top_length_mm"});
    BayDef b;
    b.from_group = jsonio::get_str(e, where, "from");
    b.to_group = jsonio::get_str(e, where, "to");
    b.brace_group = jsonio::get_str(e, where, "brace_group");
    b.joint_group = jsonio::get_str(e, where, "joint_group");
    b.joint_can_length_mm = jsonio::get_num(e, where, "joint_can_length_mm");
    b.stub_bottom_group = jsonio::get_str(e, where, "stub_bottom_group");
    b.stub_bottom_length_mm = jsonio::get_num(e, where, "stub_bottom_length_mm");
    b.stub_top_group = jsonio::get_str(e, where, "stub_top_group");
    b.stub_top_length_mm = jsonio::get_num(e, where, "stub_top_length_mm");
    p.chain_station_top(b.from_group);  // validates membership
    p.chain_station_bottom(b.to_group);
    p.bays.push_back(std::move(b));
  }
  if (p.bays.empty()) throw ConfigError(model_path + ": no bays");

  if (j.contains("taper_ties")) {
    for (auto it = j.at("taper_ties").begin(); it != j.at("taper_ties").end(); ++it) {
      const auto& pair = it.value();
      if (!pair.is_array() || pair.size() != 2)
        throw ConfigError(model_path + ": taper_ties values must be [start_label, end_label]");
      p.taper_ties[it.key()] = {pair[0].get<std::string>(), pair[1].get<std::string>()};
    }
  }

  p.sections = parse_sections(sections_path);
  p.material = parse_material(material_path);

  // Every referenced group must have a section.
  p.sections.require(p.pile_group);
  for (const auto& c : p.leg_chain) p.sections.require(c.group);
  for (const auto& b : p.bays) {
    p.sections.require(b.brace_group);
    p.sections.require(b.joint_group);
    p.sections.require(b.stub_bottom_group);
    p.sections.require(b.stub_top_group);
  }
  p.apply_taper_ties();
  p.top_elevation_mm();  // validates chain vs widths
  return p;
}

std::string serialize_model(const JacketParams& p) {
  using jsonio::json;
  json j;
  j["name"] = p.name;
  j["base_width_mm"] = p.base_width_mm;
  j["top_width_mm"] = p.top_width_mm;
  j["pile_length_mm"] = p.pile_length_mm;
  j["pile_embed_mm"] = p.pile_embed_mm;
  j["pile_group"] = p.pile_group;
  j["top_frame_mass_t"] = p.top_frame_mass_t;
  j["mesh_size_mm"] = p.mesh_size_mm;
  json chain = json::array();
  for (const auto& c : p.leg_chain) chain.push_back({{"group", c.group}, {"length_mm", c.length_mm}});
  j["leg_chain"] = std::move(chain);
  json bays = json::array();
  for (const auto& b : p.bays) {
    bays.push_back({{"from", b.from_group},
                    {"to", b.to_group},
                    {"brace_group", b.brace_group},
                    {"joint_group", b.joint_group},
                    {"joint_can_length_mm", b.joint_can_length_mm},
                    {"stub_bottom_group", b.stub_bottom_group},
                    {"stub_bottom_length_mm", b.stub_bottom_length_mm},
                    {"stub_top_group", b.stub_top_group},
                    {"stub_top_length_mm", b.stub_top_length_mm}});
  }
  j["bays"] = std::move(bays);
  if (!p.taper_ties.empty()) {
    json ties;
    for (const auto& [k, v] : p.taper_ties) ties[k] = {v.first, v.second};
    j["taper_ties"] = std::move(ties);
  }
  return j.dump(2) + "\n";
}

void write_model(const JacketParams& p, const std::string& path) {
  jsonio::write_file_atomic(path, serialize_model(p));
}

void apply_overrides(JacketParams& p, const std::vector<ParamOverride>& ovs) {
  for (const auto& ov : ovs) {
    if (ov.param == "BW") {
      if (ov.value <= p.top_width_mm)
        throw ConfigError("BW override must exceed the top width");
      p.base_width_mm = ov.value;
      continue;
    }
    if (ov.param == "PL") {
      if (ov.value <= 0.0) throw ConfigError("PL override must be positive");
      p.pile_length_mm = ov.value;
      continue;
    }
    // Section parameters are "<label>-d" / "<label>-t"; "_" works as the
    // separator too since grid and combination files use it in key names.
    auto dash = ov.param.find_last_of("-_");
    if (dash == std::string::npos || dash + 2 != ov.param.size())
      throw ConfigError("bad parameter name: " + ov.param +
                        " (want <label>-d, <label>-t, BW or PL)");
    const std::string label = ov.param.substr(0, dash);
    const char field = ov.param[dash + 1];
    if (field != 'd' && field != 't')
      throw ConfigError("bad parameter name: " + ov.param);
    if (field == 'd' && p.taper_ties.count(label))
      throw ConfigError("parameter " + ov.param + " is tied to its neighbours; set those instead");
    SectionDef& s = p.sections.require(label);
    if (field == 'd') {
      s.d_start_mm = s.d_end_mm = ov.value;
    } else {
      s.t_mm = ov.value;
    }
  }
  p.apply_taper_ties();
  for (const auto& s : p.sections.sections) {
    tube_props(s.at(0.0));  // re-validate d > 2t after the edits
    tube_props(s.at(1.0));
  }
}

}  // namespace jacketopt
