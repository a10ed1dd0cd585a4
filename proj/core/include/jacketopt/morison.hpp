#pragma once

// Morison loading on slender inclined cylinders and the per-point design-load
// envelope over one wave period. SI units (N, m, s); conversion to the mm
// system happens when loads are applied to the mesh.

#include "jacketopt/wave.hpp"

#include <string>
#include <vector>

namespace jacketopt {

struct MorisonParams {
  double rho_kg_m3 = 1025.0;
  double cd = 1.2;
  double cm = 2.0;
};

// Drag/inertia overrides keyed by depth band and member inclination band.
// First matching rule wins; outside all rules the defaults apply.
struct CsRule {
  double z_min_m = 0.0, z_max_m = 0.0;          // z relative to SWL, z_min <= z <= z_max
  double alpha_min_deg = 0.0, alpha_max_deg = 90.0;
  double cd = 0.0, cm = 0.0;
};
using CsTable = std::vector<CsRule>;

CsTable parse_cs_table(const std::string& path);

struct CsCoeffs {
  double cd = 0.0, cm = 0.0;
};
CsCoeffs cs_lookup(const CsTable& table, const MorisonParams& defaults, double z_rel_m,
                   double alpha_deg);

// Normal force per unit length on a cylinder whose axis makes angle alpha
// with the flow direction: inertia + drag, both scaled by sin(alpha). The
// first form takes the displaced-volume area A explicitly; the second uses
// A = pi D^2/4 of the same cylinder.
double morison_force_n_m(double rho, double cd, double cm, double d_m, double area_m2,
                         double sin_alpha, double u_m_s, double a_m_s2);
double morison_force_n_m(double rho, double cd, double cm, double d_m, double sin_alpha,
                         double u_m_s, double a_m_s2);

struct PointLoadSpec {
  double x_m = 0.0;       // position along the propagation axis
  double z_rel_m = 0.0;   // below SWL is negative
  double d_m = 0.0;       // local tube diameter
  double sin_alpha = 1.0; // axis vs flow direction
  double cd = 1.2, cm = 2.0;
};

// Largest force magnitude over one period: a uniform phase scan (at least
// n_phases samples) followed by golden-section refinement of the peak to a
// 1e-8 relative tolerance. Momentarily dry points (above the instantaneous
// surface, or above SWL at all times) carry zero force.
double design_point_load_n_m(const WaveState& w, const MorisonParams& mp,
                             const PointLoadSpec& spec, int n_phases = 720,
                             double* t_at_max = nullptr);

}  // namespace jacketopt
