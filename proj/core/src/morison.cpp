#include "jacketopt/morison.hpp"

#include "jsonio.hpp"

#include <cmath>
#include <numbers>

namespace jacketopt {

CsTable parse_cs_table(const std::string& path) {
  using jsonio::json;
  const json j = jsonio::load_file(path);
  jsonio::check_keys(j, path, {"rules"}, {"notes"});
  CsTable table;
  for (const auto& e : j.at("rules")) {
    const std::string where = path + " rule";
    jsonio::check_keys(e, where, {"z_min_m", "z_max_m", "cd", "cm"},
                       {"alpha_min_deg", "alpha_max_deg", "notes"});
    CsRule r;
    r.z_min_m = jsonio::get_num(e, where, "z_min_m");
    r.z_max_m = jsonio::get_num(e, where, "z_max_m");
    r.alpha_min_deg = jsonio::get_num_or(e, "alpha_min_deg", 0.0);
    r.alpha_max_deg = jsonio::get_num_or(e, "alpha_max_deg", 90.0);
    r.cd = jsonio::get_num(e, where, "cd");
    r.cm = jsonio::get_num(e, where, "cm");
    if (r.z_min_m > r.z_max_m || r.alpha_min_deg > r.alpha_max_deg)
      throw ConfigError(where + ": empty band");
    table.push_back(r);
  }
  return table;
}

CsCoeffs cs_lookup(const CsTable& table, const MorisonParams& defaults, double z_rel_m,
                   double alpha_deg) {
  for (const auto& r : table) {
    if (z_rel_m >= r.z_min_m && z_rel_m <= r.z_max_m && alpha_deg >= r.alpha_min_deg &&
        alpha_deg <= r.alpha_max_deg)
      return {r.cd, r.cm};
  }
  return {defaults.cd, defaults.cm};
}

double morison_force_n_m(double rho, double cd, double cm, double d_m, double area_m2,
                         double sin_alpha, double u_m_s, double a_m_s2) {
  const double inertia = rho * cm * area_m2 * a_m_s2 * sin_alpha;
  const double drag = 0.5 * rho * cd * d_m * std::abs(u_m_s) * u_m_s * sin_alpha;
  return inertia + drag;
}

double morison_force_n_m(double rho, double cd, double cm, double d_m, double sin_alpha,
                         double u_m_s, double a_m_s2) {
  return morison_force_n_m(rho, cd, cm, d_m, std::numbers::pi * d_m * d_m / 4.0, sin_alpha,
                           u_m_s, a_m_s2);
}

namespace {

// Signed force at phase time t; zero when the point is momentarily dry.
double force_at(const WaveState& w, const MorisonParams& mp, const PointLoadSpec& s,
                double t) {
  if (s.z_rel_m > 0.0) return 0.0;  // never loaded above SWL (no stretching)
  const double eta = surface_elevation_m(w, s.x_m, t);
  if (s.z_rel_m > eta) return 0.0;
  const WaveKinematics k = wave_kinematics(w, s.x_m, s.z_rel_m, t);
  return morison_force_n_m(mp.rho_kg_m3, s.cd, s.cm, s.d_m, s.sin_alpha, k.u_m_s,
                           k.a_m_s2);
}

}  // namespace

double design_point_load_n_m(const WaveState& w, const MorisonParams& mp,
                             const PointLoadSpec& spec, int n_phases, double* t_at_max) {
  if (w.lambda == 0.0) {
    if (t_at_max) *t_at_max = 0.0;
    return 0.0;
  }
  if (n_phases < 8) n_phases = 8;
  const double T = w.in.period_s;

  double best = -1.0, t_best = 0.0;
  for (int i = 0; i < n_phases; ++i) {
    const double t = T * i / n_phases;
    const double f = std::abs(force_at(w, mp, spec, t));
    if (f > best) {
      best = f;
      t_best = t;
    }
  }
  if (best <= 0.0) {
    if (t_at_max) *t_at_max = t_best;
    return 0.0;
  }

  // Golden-section refinement around the best sample.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = t_best - T / n_phases;
  double b = t_best + T / n_phases;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = std::abs(force_at(w, mp, spec, x1));
  double f2 = std::abs(force_at(w, mp, spec, x2));
  for (int it = 0; it < 200; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = std::abs(force_at(w, mp, spec, x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = std::abs(force_at(w, mp, spec, x1));
    }
    const double span = std::abs(f1 - f2);
    const double scale = std::max(f1, f2);
    if (scale > 0.0 && span < 1e-8 * scale && (b - a) < T * 1e-10) break;
  }
  const double f_ref = std::max(f1, f2);
  if (f_ref > best) {
    best = f_ref;
    t_best = (f1 > f2) ? x1 : x2;
  }
  if (t_at_max) *t_at_max = t_best;
  return best;
}

}  // namespace jacketopt
