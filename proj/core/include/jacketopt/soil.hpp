#pragma once

// Nonlinear lateral (p-y) and axial (t-z) soil support for the embedded
// piles. Each curve is piecewise linear with three segments through the
// origin, odd in the displacement, and continues with the final slope beyond
// the last breakpoint. A layered profile assigns curves by depth below the
// mudline; springs are built per embedded pile node with tributary lengths.
//
// Units at this interface: displacements mm, tractions N/mm (force per unit
// pile length), depths m.

#include "jacketopt/mesh.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace jacketopt {

struct SoilCurve {
  // Breakpoints for positive displacement, strictly increasing in both
  // coordinates; the origin is implied.
  std::vector<std::pair<double, double>> points;  // (disp_mm, traction_n_mm)

  double eval(double disp_mm) const;   // odd in disp
  double slope(double disp_mm) const;  // tangent slope of the active segment
  double initial_slope() const;
};

struct SoilLayer {
  std::string name;
  double top_depth_m = 0.0;
  double bottom_depth_m = 0.0;
  SoilCurve py;  // horizontal
  SoilCurve tz;  // vertical
};

struct SoilProfile {
  std::vector<SoilLayer> layers;  // contiguous from the mudline down
  // Nodes exactly on an interface belong to the deeper layer.
  const SoilLayer& layer_at(double depth_m) const;
  double bottom_depth_m() const;
};

SoilProfile parse_soil(const std::string& path);

// Three-segment piecewise-linear approximations of the classical API RP 2A /
// DNV closed-form transfer curves, for building profiles from site parameters
// instead of direct breakpoint tables. Inputs are SI (kPa, kN/m^3, m, deg);
// the returned curves use the internal mm / N-per-mm convention.
//
// Soft clay lateral (Matlock): ultimate resistance
//   p_u = min(3 + gamma'*z/s_u + J*z/D, 9) * s_u * D,
// with the cubic-root backbone p/p_u = 0.5*(y/y_c)^(1/3), y_c = 2.5*eps50*D,
// sampled at y_c and 8*y_c and a plateau beyond.
SoilCurve make_soft_clay_py(double su_kpa, double gamma_eff_kn_m3, double d_m, double depth_m,
                            double eps50, double j_factor = 0.5);

// Sand lateral (O'Neill/Murchison): p = A*p_u*tanh(k*z*y/(A*p_u)) with the
// C1/C2/C3 wedge coefficients from the friction angle and the initial modulus
// k interpolated from the API chart (submerged). Sampled at fractions of the
// knee y* = A*p_u/(k*z), keeping the initial tangent within 2% of k*z.
SoilCurve make_sand_py(double phi_deg, double gamma_eff_kn_m3, double d_m, double depth_m);

// Clay axial: t_max = alpha*s_u*pi*D mobilized at z_peak = 0.01*D with a
// plateau beyond (API t-z for clay, peak branch only).
SoilCurve make_clay_tz(double su_kpa, double alpha, double d_m);

// Sand axial: t_max = beta*sigma'_v*pi*D mobilized at z_peak = 2.5 mm.
SoilCurve make_sand_tz(double sigma_v_eff_kpa, double beta, double d_m);

// Distributed reaction (N/mm) for a relative displacement delta (mm) between
// pile and far field. The horizontal components act along the resultant
// horizontal displacement; as it vanishes the initial p-y slope applies, so
// the force and its tangent stay continuous through zero.
Eigen::Vector3d soil_traction(const SoilLayer& layer, const Eigen::Vector3d& delta_mm);
Eigen::Matrix3d soil_tangent(const SoilLayer& layer, const Eigen::Vector3d& delta_mm);

// Two-node spring element (pile node, ground node) with the difference map
// B = [I, -I]: f = L B^T T(B u), K = L B^T (dT/dDelta) B.
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;
Vec6 spring_element_force(const SoilLayer& layer, double trib_len_mm, const Vec6& u_mm);
Mat6 spring_element_stiffness(const SoilLayer& layer, double trib_len_mm, const Vec6& u_mm);

struct NodeSpring {
  int node = -1;
  double depth_m = 0.0;
  double trib_len_mm = 0.0;
  int layer = -1;  // index into SoilProfile::layers
};

// One spring per embedded pile node (including the mudline node); tributary
// lengths halve the adjacent embedded elements and sum to the embedded length
// on each pile. Throws if the profile does not reach the pile tip.
std::vector<NodeSpring> build_spring_field(const Mesh& mesh, const SoilProfile& profile);

}  // namespace jacketopt
