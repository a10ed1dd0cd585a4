#pragma once

// Hollow circular tube sections. All lengths in mm. A section group is shared
// by every member carrying its label, so editing one entry retubes the whole
// group. Tapered entries interpolate the outer diameter linearly along the
// member; wall thickness is constant.

#include <string>
#include <vector>

namespace jacketopt {

struct TubeGeom {
  double d_mm = 0.0;  // outer diameter
  double t_mm = 0.0;  // wall thickness
};

struct TubeProps {
  double area_mm2 = 0.0;
  double inertia_mm4 = 0.0;  // bending, equal about both transverse axes
  double torsion_mm4 = 0.0;  // polar, = 2 * inertia for a circular tube
};

TubeProps tube_props(const TubeGeom& g);

struct SectionDef {
  std::string label;
  double d_start_mm = 0.0;
  double d_end_mm = 0.0;  // equals d_start_mm for prismatic sections
  double t_mm = 0.0;
  bool tapered = false;

  // Geometry at fractional position s in [0,1] measured from member start.
  TubeGeom at(double s) const;
};

struct SectionSet {
  std::vector<SectionDef> sections;  // file order preserved for serialization

  const SectionDef* find(const std::string& label) const;
  SectionDef& require(const std::string& label);
  const SectionDef& require(const std::string& label) const;
};

SectionSet parse_sections(const std::string& path);
std::string serialize_sections(const SectionSet& set);
void write_sections(const SectionSet& set, const std::string& path);

}  // namespace jacketopt
