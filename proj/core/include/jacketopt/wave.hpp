#pragma once

// Fifth-order regular-wave kinematics after Skjelbreia & Hendrickson (1960).
// The expansion parameter lambda is found from the crest-to-trough height
// equation; wave celerity, surface elevation and horizontal particle
// velocity/acceleration follow from tabulated functions of the dimensionless
// depth kd. The coefficient set below was re-derived symbolically from the
// free-surface boundary conditions; two long-standing misprints of the 1960
// tables (the A15 denominator and the sign of the c^8 term in C2) are
// corrected, and the implementation is validated against high-precision
// reference values shipped with the test data.
//
// This module works in SI units (m, s, N); z is measured from the still water
// level, positive up, and kinematics are only evaluated for z <= 0 (no
// stretching above the still water level).

#include <array>
#include <string>

namespace jacketopt {

struct WaveCoeffs {
  double a11, a13, a15, a22, a24, a33, a35, a44, a55;
  double b22, b24, b33, b35, b44, b55;
  double c1, c2;
};

// Coefficient functions of kd = beta * depth. Valid for kd > 0.
WaveCoeffs wave_coeffs(double kd);

struct WaveInput {
  std::string name;
  double height_m = 0.0;  // crest-to-trough height H
  double period_s = 0.0;  // T
  double length_m = 0.0;  // L, prescribed (see dispersion_gap_rel)
  double depth_m = 0.0;   // still water depth d
};

struct WaveState {
  WaveInput in;
  double beta = 0.0;      // wave number 2*pi/L
  double omega = 0.0;     // 2*pi/T
  double lambda = 0.0;    // perturbation amplitude
  double celerity_m_s = 0.0;
  std::array<double, 6> kappa{};  // velocity profile amplitudes, index 1..5
  std::array<double, 6> eta{};    // surface harmonics: beta*eta = sum eta[n]*cos(n*theta)
  // Relative gap between the prescribed length and first-order dispersion;
  // above 0.05 the inputs are internally inconsistent and a warning is due.
  double dispersion_gap_rel = 0.0;
};

// Solves the height equation for lambda (Newton with a bisection fallback,
// residual < 1e-10) and assembles the kinematic amplitudes. H = 0 yields the
// quiescent state. Throws SolveError if no root exists for the inputs.
WaveState build_wave_state(const WaveInput& in);

// First-order wavelength for the same period and depth, from the linear
// dispersion relation (bisection, relative tolerance 1e-12).
double linear_wavelength_m(double period_s, double depth_m, double g = 9.81);

// Free surface elevation relative to SWL at horizontal position x (measured
// along the propagation direction) and time t.
double surface_elevation_m(const WaveState& w, double x_m, double t_s);

struct WaveKinematics {
  double u_m_s = 0.0;   // horizontal particle velocity along the propagation axis
  double a_m_s2 = 0.0;  // local horizontal acceleration du/dt
};

// Kinematics at z_rel <= 0 (below SWL). Values above the instantaneous free
// surface are the caller's concern (see the Morison envelope, which zeroes
// momentarily dry points).
WaveKinematics wave_kinematics(const WaveState& w, double x_m, double z_rel_m, double t_s);

}  // namespace jacketopt
