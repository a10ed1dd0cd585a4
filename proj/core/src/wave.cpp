#include "jacketopt/wave.hpp"

#include "jacketopt/errors.hpp"

#include <cmath>
#include <numbers>

namespace jacketopt {

namespace {
constexpr double kG = 9.81;
}

WaveCoeffs wave_coeffs(double kd) {
  if (!(kd > 0.0)) throw ConfigError("wave_coeffs: kd must be positive");
  const double c = std::cosh(kd);
  const double s = std::sinh(kd);
  const double c2 = c * c;
  const double c4 = c2 * c2;
  const double c6 = c4 * c2;
  const double c8 = c4 * c4;
  const double c10 = c8 * c2;
  const double c12 = c8 * c4;
  const double c14 = c12 * c2;
  const double c16 = c8 * c8;
  const double s2 = s * s;
  const double s3 = s2 * s;
  const double s4 = s2 * s2;
  const double s5 = s4 * s;
  const double s6 = s4 * s2;
  const double s7 = s6 * s;
  const double s9 = s6 * s3;
  const double s10 = s6 * s4;
  const double s11 = s10 * s;
  const double s12 = s6 * s6;
  const double s13 = s12 * s;
  // Common resonance-style denominators of the higher-order terms.
  const double d35 = 6.0 * c2 - 1.0;
  const double d55 = 8.0 * c4 - 11.0 * c2 + 3.0;

  WaveCoeffs w;
  w.a11 = 1.0 / s;
  w.a13 = -c2 * (5.0 * c2 + 1.0) / (8.0 * s5);
  // Denominator 1536 (a widely reprinted 512 variant is exactly 3x too big).
  w.a15 = -(1184.0 * c10 - 1440.0 * c8 - 1992.0 * c6 + 2641.0 * c4 - 249.0 * c2 + 18.0) /
          (1536.0 * s11);
  w.a22 = 3.0 / (8.0 * s4);
  w.a24 = (192.0 * c8 - 424.0 * c6 - 312.0 * c4 + 480.0 * c2 - 17.0) / (768.0 * s10);
  w.a33 = (13.0 - 4.0 * c2) / (64.0 * s7);
  w.a35 = (512.0 * c12 + 4224.0 * c10 - 6800.0 * c8 - 12808.0 * c6 + 16704.0 * c4 -
           3154.0 * c2 + 107.0) /
          (4096.0 * s13 * d35);
  w.a44 = (80.0 * c6 - 816.0 * c4 + 1338.0 * c2 - 197.0) / (1536.0 * s10 * d35);
  w.a55 = -(2880.0 * c10 - 72480.0 * c8 + 324000.0 * c6 - 432000.0 * c4 +
            163470.0 * c2 - 16245.0) /
          (61440.0 * s11 * d35 * d55);

  w.b22 = c * (2.0 * c2 + 1.0) / (4.0 * s3);
  w.b24 = c * (272.0 * c8 - 504.0 * c6 - 192.0 * c4 + 322.0 * c2 + 21.0) / (384.0 * s9);
  w.b33 = 3.0 * (8.0 * c6 + 1.0) / (64.0 * s6);
  w.b35 = (88128.0 * c14 - 208224.0 * c12 + 70848.0 * c10 + 54000.0 * c8 -
           21816.0 * c6 + 6264.0 * c4 - 54.0 * c2 - 81.0) /
          (12288.0 * s12 * d35);
  w.b44 = c * (768.0 * c10 - 448.0 * c8 - 48.0 * c6 + 48.0 * c4 + 106.0 * c2 - 21.0) /
          (384.0 * s9 * d35);
  w.b55 = (192000.0 * c16 - 262720.0 * c14 + 83680.0 * c12 + 20160.0 * c10 -
           7280.0 * c8 + 7160.0 * c6 - 1800.0 * c4 - 1050.0 * c2 + 225.0) /
          (12288.0 * s10 * d35 * d55);

  w.c1 = (8.0 * c4 - 8.0 * c2 + 9.0) / (8.0 * s4);
  // The c^8 term is negative; the +2592 of the original tables is a misprint.
  w.c2 = (3840.0 * c12 - 4096.0 * c10 - 2592.0 * c8 - 1008.0 * c6 + 5944.0 * c4 -
          1830.0 * c2 + 147.0) /
         (512.0 * s10 * d35);
  return w;
}

double linear_wavelength_m(double period_s, double depth_m, double g) {
  if (period_s <= 0.0 || depth_m <= 0.0)
    throw ConfigError("linear_wavelength: period and depth must be positive");
  const double om = 2.0 * std::numbers::pi / period_s;
  const double target = om * om / g;  // k tanh(k d) = omega^2 / g
  double lo = 1e-12, hi = target / std::tanh(1e-12 * depth_m);
  // For large k, k tanh(kd) ~ k > target, so `target` bounds the root above
  // once tanh saturates; expand until bracketed to be safe.
  hi = std::max(hi, target * 2.0);
  while (hi * std::tanh(hi * depth_m) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::tanh(mid * depth_m) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    if ((hi - lo) <= 1e-12 * hi) break;
  }
  return 2.0 * std::numbers::pi / (0.5 * (lo + hi));
}

WaveState build_wave_state(const WaveInput& in) {
  if (in.period_s <= 0.0 || in.length_m <= 0.0 || in.depth_m <= 0.0)
    throw ConfigError("wave input: period, length and depth must be positive");
  if (in.height_m < 0.0) throw ConfigError("wave input: height must be nonnegative");

  WaveState w;
  w.in = in;
  w.beta = 2.0 * std::numbers::pi / in.length_m;
  w.omega = 2.0 * std::numbers::pi / in.period_s;
  const double kd = w.beta * in.depth_m;
  const WaveCoeffs cf = wave_coeffs(kd);

  const double lin = linear_wavelength_m(in.period_s, in.depth_m);
  w.dispersion_gap_rel = std::abs(in.length_m - lin) / lin;

  // Height equation: beta*H/2 = lambda + B33 lambda^3 + (B35+B55) lambda^5.
  const double rhs = 0.5 * w.beta * in.height_m;
  const double q3 = cf.b33;
  const double q5 = cf.b35 + cf.b55;
  auto f = [&](double x) { return x + q3 * x * x * x + q5 * x * x * x * x * x - rhs; };
  auto fp = [&](double x) {
    return 1.0 + 3.0 * q3 * x * x + 5.0 * q5 * x * x * x * x;
  };

  double lam = rhs;  // first-order start
  bool converged = false;
  for (int i = 0; i < 50; ++i) {
    const double r = f(lam);
    if (std::abs(r) < 1e-10) {
      converged = true;
      break;
    }
    const double d = fp(lam);
    if (d == 0.0) break;
    const double next = lam - r / d;
    if (!std::isfinite(next) || next < 0.0 || next > 10.0 * (rhs + 1.0)) break;
    lam = next;
  }
  if (!converged) {
    // Bisection fallback on [0, hi] with f(0) = -rhs <= 0.
    double lo = 0.0, hi = std::max(rhs * 2.0, 1e-3);
    int guard = 0;
    while (f(hi) < 0.0) {
      hi *= 2.0;
      if (++guard > 100) throw SolveError("wave height equation has no accessible root");
    }
    for (int i = 0; i < 500; ++i) {
      lam = 0.5 * (lo + hi);
      const double r = f(lam);
      if (std::abs(r) < 1e-10) {
        converged = true;
        break;
      }
      if (r < 0.0) {
        lo = lam;
      } else {
        hi = lam;
      }
    }
    if (!converged) throw SolveError("wave height equation did not converge");
  }
  w.lambda = lam;

  const double l2 = lam * lam;
  const double l3 = l2 * lam;
  const double l4 = l2 * l2;
  const double l5 = l4 * lam;
  w.kappa[1] = lam * cf.a11 + l3 * cf.a13 + l5 * cf.a15;
  w.kappa[2] = l2 * cf.a22 + l4 * cf.a24;
  w.kappa[3] = l3 * cf.a33 + l5 * cf.a35;
  w.kappa[4] = l4 * cf.a44;
  w.kappa[5] = l5 * cf.a55;

  w.eta[1] = lam;
  w.eta[2] = l2 * cf.b22 + l4 * cf.b24;
  w.eta[3] = l3 * cf.b33 + l5 * cf.b35;
  w.eta[4] = l4 * cf.b44;
  w.eta[5] = l5 * cf.b55;

  const double g = kG;
  w.celerity_m_s =
      std::sqrt(g / w.beta * std::tanh(kd) * (1.0 + l2 * cf.c1 + l4 * cf.c2));
  return w;
}

double surface_elevation_m(const WaveState& w, double x_m, double t_s) {
  const double theta = w.beta * x_m - w.omega * t_s;
  double be = 0.0;
  for (int n = 1; n <= 5; ++n) be += w.eta[n] * std::cos(n * theta);
  return be / w.beta;
}

WaveKinematics wave_kinematics(const WaveState& w, double x_m, double z_rel_m, double t_s) {
  WaveKinematics k;
  if (w.lambda == 0.0) return k;
  const double theta = w.beta * x_m - w.omega * t_s;
  const double zz = w.in.depth_m + z_rel_m;  // height above the sea bed
  for (int n = 1; n <= 5; ++n) {
    const double ch = std::cosh(n * w.beta * zz);
    k.u_m_s += n * w.kappa[n] * ch * std::cos(n * theta);
    k.a_m_s2 += n * n * w.kappa[n] * ch * std::sin(n * theta);
  }
  k.u_m_s *= w.celerity_m_s;
  k.a_m_s2 *= w.celerity_m_s * w.omega;
  return k;
}

}  // namespace jacketopt
