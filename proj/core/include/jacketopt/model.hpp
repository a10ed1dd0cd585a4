#pragma once

// Parametric description of a four-legged X-braced jacket. The model file
// gives the footprint, the ordered stack of leg members ("leg chain", from the
// pile head upward) and one entry per X-brace bay. Everything else (work
// points, brace lengths, elevations) is derived:
//
//   * Piles are vertical at the footprint corners; the battered legs run in a
//     straight line from the pile head (z = pile_length_mm, half-width
//     base_width_mm/2) to the leg top (half-width top_width_mm/2). The top
//     elevation follows from the fixed chain length and the horizontal run.
//   * A bay's lower brace work points sit at the top of its "from" chain
//     member, the upper work points at the bottom of its "to" member, on both
//     legs of each face. The two face diagonals cross at the point where an
//     X-joint can (joint_group) is centered on the through diagonal; the
//     abutting diagonal lands on that can mid-length. Brace stubs of fixed
//     length sit at the four corners and the main brace tubes fill the rest.
//
// Units: mm, t, N, MPa throughout (1 N = 1 t*mm/s^2).

#include "jacketopt/section.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace jacketopt {

// Parsed from material.json ({E_MPa, nu, rho_kg_m3, sigma_y_MPa}) and converted
// to the solver's N-mm-tonne-second unit system.
struct MaterialSpec {
  double e_mpa = 210000.0;
  double nu = 0.3;
  double rho_t_mm3 = 7.85e-9;
  double fy_mpa = 355.0;
};

// Standard gravity in solver units (mm/s^2); applied to tonne masses it yields N.
inline constexpr double kGravityMmS2 = 9810.0;

MaterialSpec parse_material(const std::string& path);

struct ChainEntry {
  std::string group;   // section label, e.g. "CS2"
  double length_mm = 0.0;
};

struct BayDef {
  std::string from_group;  // lower work points at the top of this chain member
  std::string to_group;    // upper work points at the bottom of this chain member
  std::string brace_group;
  std::string joint_group;
  double joint_can_length_mm = 0.0;
  std::string stub_bottom_group;
  double stub_bottom_length_mm = 0.0;
  std::string stub_top_group;
  double stub_top_length_mm = 0.0;
};

struct JacketParams {
  std::string name;
  double base_width_mm = 0.0;   // square footprint width at the (vertical) piles
  double top_width_mm = 0.0;    // leg spacing at the chain top
  double pile_length_mm = 0.0;  // pile head extension above the mudline
  double pile_embed_mm = 0.0;   // embedded pile length below the mudline
  std::string pile_group;       // pile section label; excluded from reported mass
  double top_frame_mass_t = 0.0;
  double mesh_size_mm = 1000.0;
  std::vector<ChainEntry> leg_chain;  // from pile head upward
  std::vector<BayDef> bays;           // bottom bay first
  // Tapered label -> (label feeding d_start, label feeding d_end). Keeps e.g.
  // a leg transition piece continuous with the tubes above and below it when
  // those are resized.
  std::map<std::string, std::pair<std::string, std::string>> taper_ties;
  SectionSet sections;
  MaterialSpec material;

  double chain_length_mm() const;                       // sum of leg_chain lengths
  double chain_station_bottom(const std::string& group) const;
  double chain_station_top(const std::string& group) const;
  double top_elevation_mm() const;  // z of the leg tops above the mudline

  // Re-derives tied taper endpoints from their source sections.
  void apply_taper_ties();
};

JacketParams parse_model_files(const std::string& model_path,
                               const std::string& sections_path,
                               const std::string& material_path);

// Serializes the geometry part back to the model file format (sections and
// material are written separately).
std::string serialize_model(const JacketParams& p);
void write_model(const JacketParams& p, const std::string& path);

// A single design-variable assignment. Parameter names are "<label>-d",
// "<label>-t" (mm) or "BW" (base width, mm). Labels that are taper-tie
// targets cannot be set directly.
struct ParamOverride {
  std::string param;
  double value = 0.0;
};

void apply_overrides(JacketParams& p, const std::vector<ParamOverride>& ovs);

}  // namespace jacketopt
