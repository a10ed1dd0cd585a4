#include "jacketopt/soil.hpp"

#include "jsonio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jacketopt {

namespace {
constexpr double kTinyDisp = 1e-12;
}

double SoilCurve::eval(double disp_mm) const {
  const double d = std::abs(disp_mm);
  const double sign = disp_mm < 0.0 ? -1.0 : 1.0;
  double d0 = 0.0, p0 = 0.0;
  for (const auto& [dk, pk] : points) {
    if (d <= dk) return sign * (p0 + (pk - p0) * (d - d0) / (dk - d0));
    d0 = dk;
    p0 = pk;
  }
  // Continue with the final segment slope.
  const auto& [d1, p1] = points[points.size() - 2];
  const auto& [d2, p2] = points.back();
  return sign * (p2 + (p2 - p1) / (d2 - d1) * (d - d2));
}

double SoilCurve::slope(double disp_mm) const {
  const double d = std::abs(disp_mm);
  double d0 = 0.0, p0 = 0.0;
  for (const auto& [dk, pk] : points) {
    if (d <= dk) return (pk - p0) / (dk - d0);
    d0 = dk;
    p0 = pk;
  }
  const auto& [d1, p1] = points[points.size() - 2];
  const auto& [d2, p2] = points.back();
  return (p2 - p1) / (d2 - d1);
}

double SoilCurve::initial_slope() const { return points.front().second / points.front().first; }

const SoilLayer& SoilProfile::layer_at(double depth_m) const {
  if (depth_m < 0.0) throw ConfigError("soil lookup above the mudline");
  // Deeper layer wins on interfaces: walk from the bottom up.
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
    if (depth_m >= it->top_depth_m) {
      if (depth_m > it->bottom_depth_m + 1e-9)
        throw ConfigError("soil profile does not reach depth " + std::to_string(depth_m));
      return *it;
    }
  }
  throw ConfigError("soil profile has no layer at depth " + std::to_string(depth_m));
}

double SoilProfile::bottom_depth_m() const { return layers.back().bottom_depth_m; }

namespace {

// File curves are [[disp_m, traction_N_per_m], ...] with 4 points (origin
// included) making 3 segments; converted to internal mm / N-per-mm here.
SoilCurve parse_curve(const jsonio::json& e, const std::string& where) {
  if (!e.is_array())
    throw ConfigError(where + ": curve must be an array of [disp_m, traction_N_per_m] points");
  SoilCurve c;
  for (const auto& pt : e) {
    if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
      throw ConfigError(where + ": curve points must be [disp_m, traction_N_per_m]");
    c.points.emplace_back(pt[0].get<double>() * 1000.0, pt[1].get<double>() / 1000.0);
  }
  if (c.points.size() != 4)
    throw ConfigError(where + ": expected exactly 4 points (origin + 3 segments)");
  if (c.points.front().first != 0.0 || c.points.front().second != 0.0)
    throw ConfigError(where + ": first curve point must be the origin [0, 0]");
  c.points.erase(c.points.begin());  // origin is implicit internally
  double d0 = 0.0, p0 = 0.0;
  for (const auto& [d, p] : c.points) {
    if (d <= d0) throw ConfigError(where + ": displacements must strictly increase");
    if (p < p0) throw ConfigError(where + ": tractions must be non-decreasing");
    d0 = d;
    p0 = p;
  }
  if (c.points.front().second <= 0.0)
    throw ConfigError(where + ": initial tangent must be positive");
  return c;
}

}  // namespace

SoilProfile parse_soil(const std::string& path) {
  using jsonio::json;
  const json j = jsonio::load_file(path);
  jsonio::check_keys(j, path, {"layers"}, {"notes"});
  SoilProfile prof;
  double expect_top = 0.0;
  for (const auto& e : j.at("layers")) {
    const std::string where = path + " layer";
    jsonio::check_keys(e, where, {"name", "depth_top_m", "depth_bottom_m", "py", "tz"},
                       {"notes"});
    SoilLayer layer;
    layer.name = jsonio::get_str(e, where, "name");
    layer.top_depth_m = jsonio::get_num(e, where, "depth_top_m");
    layer.bottom_depth_m = jsonio::get_num(e, where, "depth_bottom_m");
    if (std::abs(layer.top_depth_m - expect_top) > 1e-9)
      throw ConfigError(path + ": layers must be contiguous from the mudline down");
    if (layer.bottom_depth_m <= layer.top_depth_m)
      throw ConfigError(path + ": layer " + layer.name + " has nonpositive thickness");
    layer.py = parse_curve(e.at("py"), where + " " + layer.name + " py");
    layer.tz = parse_curve(e.at("tz"), where + " " + layer.name + " tz");
    expect_top = layer.bottom_depth_m;
    prof.layers.push_back(std::move(layer));
  }
  if (prof.layers.empty()) throw ConfigError(path + ": no layers");
  return prof;
}

SoilCurve make_soft_clay_py(double su_kpa, double gamma_eff_kn_m3, double d_m, double depth_m,
                            double eps50, double j_factor) {
  if (su_kpa <= 0 || d_m <= 0 || depth_m < 0 || eps50 <= 0)
    throw ConfigError("soft clay p-y generator needs positive s_u, D, eps50 and depth >= 0");
  // kPa * m = kN/m = N/mm, so no unit factor on the resistance.
  const double shallow = (3.0 + gamma_eff_kn_m3 * depth_m / su_kpa + j_factor * depth_m / d_m);
  const double pu = std::min(shallow, 9.0) * su_kpa * d_m;
  const double yc_mm = 2.5 * eps50 * d_m * 1000.0;
  SoilCurve c;
  c.points = {{yc_mm, 0.5 * pu}, {8.0 * yc_mm, pu}, {10.0 * yc_mm, pu}};
  return c;
}

namespace {

// API initial modulus of subgrade reaction for submerged sand, kN/m^3 against
// friction angle; linear interpolation between charted values.
double sand_k_kn_m3(double phi_deg) {
  static const std::vector<std::pair<double, double>> chart = {
      {25.0, 5400.0}, {30.0, 11000.0}, {35.0, 22000.0}, {40.0, 45000.0}};
  if (phi_deg <= chart.front().first) return chart.front().second;
  if (phi_deg >= chart.back().first) return chart.back().second;
  for (size_t i = 1; i < chart.size(); ++i) {
    if (phi_deg <= chart[i].first) {
      const auto& [p0, k0] = chart[i - 1];
      const auto& [p1, k1] = chart[i];
      return k0 + (k1 - k0) * (phi_deg - p0) / (p1 - p0);
    }
  }
  return chart.back().second;
}

}  // namespace

SoilCurve make_sand_py(double phi_deg, double gamma_eff_kn_m3, double d_m, double depth_m) {
  if (phi_deg <= 0 || gamma_eff_kn_m3 <= 0 || d_m <= 0 || depth_m <= 0)
    throw ConfigError("sand p-y generator needs positive phi, gamma', D and depth");
  const double phi = phi_deg * std::numbers::pi / 180.0;
  const double alpha = 0.5 * phi;
  const double beta = std::numbers::pi / 4.0 + 0.5 * phi;
  const double ka = (1.0 - std::sin(phi)) / (1.0 + std::sin(phi));
  const double k0 = 0.4;
  const double tb = std::tan(beta);
  // Wedge / flow coefficients (Reese et al. form quoted in the API commentary).
  const double c1 = tb * tb * std::tan(alpha) / std::tan(beta - phi) +
                    k0 * (std::tan(phi) * std::sin(beta) /
                              (std::cos(alpha) * std::tan(beta - phi)) +
                          tb * (std::tan(phi) * std::sin(beta) - std::tan(alpha)));
  const double c2 = tb / std::tan(beta - phi) - ka;
  const double c3 = ka * (std::pow(tb, 8) - 1.0) + k0 * std::tan(phi) * std::pow(tb, 4);
  const double pu_kn_m = std::min(c1 * depth_m + c2 * d_m, c3 * d_m) *
                         gamma_eff_kn_m3 * depth_m;  // kN/m = N/mm
  const double a_fac = std::max(3.0 - 0.8 * depth_m / d_m, 0.9);
  const double cap = a_fac * pu_kn_m;
  const double k_init = sand_k_kn_m3(phi_deg) * depth_m * 1e-6;  // kN/m^2 -> N/mm^2
  const double ystar_mm = cap / k_init;  // knee of the tanh backbone
  SoilCurve c;
  c.points = {{0.25 * ystar_mm, cap * std::tanh(0.25)},
              {2.5 * ystar_mm, cap * std::tanh(2.5)},
              {4.0 * ystar_mm, cap * std::tanh(2.5)}};  // flat tail at ~0.99 cap
  return c;
}

SoilCurve make_clay_tz(double su_kpa, double alpha, double d_m) {
  if (su_kpa <= 0 || alpha <= 0 || d_m <= 0)
    throw ConfigError("clay t-z generator needs positive s_u, alpha and D");
  const double tmax = alpha * su_kpa * std::numbers::pi * d_m;  // kN/m = N/mm
  const double zpk_mm = 0.01 * d_m * 1000.0;
  SoilCurve c;
  c.points = {{0.31 * zpk_mm, 0.5 * tmax}, {zpk_mm, tmax}, {1.2 * zpk_mm, tmax}};
  return c;
}

SoilCurve make_sand_tz(double sigma_v_eff_kpa, double beta, double d_m) {
  if (sigma_v_eff_kpa <= 0 || beta <= 0 || d_m <= 0)
    throw ConfigError("sand t-z generator needs positive sigma'_v, beta and D");
  const double tmax = beta * sigma_v_eff_kpa * std::numbers::pi * d_m;  // kN/m = N/mm
  const double zpk_mm = 2.5;
  SoilCurve c;
  c.points = {{0.4 * zpk_mm, 0.55 * tmax}, {zpk_mm, tmax}, {1.2 * zpk_mm, tmax}};
  return c;
}

Eigen::Vector3d soil_traction(const SoilLayer& layer, const Eigen::Vector3d& delta_mm) {
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  const double r = std::hypot(delta_mm.x(), delta_mm.y());
  if (r < kTinyDisp) {
    const double k0 = layer.py.initial_slope();
    t.x() = k0 * delta_mm.x();
    t.y() = k0 * delta_mm.y();
  } else {
    const double p = layer.py.eval(r);
    t.x() = p / r * delta_mm.x();
    t.y() = p / r * delta_mm.y();
  }
  t.z() = layer.tz.eval(delta_mm.z());
  return t;
}

Eigen::Matrix3d soil_tangent(const SoilLayer& layer, const Eigen::Vector3d& delta_mm) {
  Eigen::Matrix3d k = Eigen::Matrix3d::Zero();
  const double r = std::hypot(delta_mm.x(), delta_mm.y());
  if (r < kTinyDisp) {
    const double k0 = layer.py.initial_slope();
    k(0, 0) = k(1, 1) = k0;
  } else {
    const double p = layer.py.eval(r);
    const double kt = layer.py.slope(r);
    const double nx = delta_mm.x() / r, ny = delta_mm.y() / r;
    // Secant stiffness normal to the resultant, tangent stiffness along it.
    const double ks = p / r;
    k(0, 0) = ks + (kt - ks) * nx * nx;
    k(1, 1) = ks + (kt - ks) * ny * ny;
    k(0, 1) = k(1, 0) = (kt - ks) * nx * ny;
  }
  k(2, 2) = layer.tz.slope(delta_mm.z());
  return k;
}

Vec6 spring_element_force(const SoilLayer& layer, double trib_len_mm, const Vec6& u_mm) {
  const Eigen::Vector3d delta = u_mm.head<3>() - u_mm.tail<3>();
  const Eigen::Vector3d t = trib_len_mm * soil_traction(layer, delta);
  Vec6 f;
  f.head<3>() = t;
  f.tail<3>() = -t;
  return f;
}

Mat6 spring_element_stiffness(const SoilLayer& layer, double trib_len_mm, const Vec6& u_mm) {
  const Eigen::Vector3d delta = u_mm.head<3>() - u_mm.tail<3>();
  const Eigen::Matrix3d kt = trib_len_mm * soil_tangent(layer, delta);
  Mat6 k;
  k.topLeftCorner<3, 3>() = kt;
  k.topRightCorner<3, 3>() = -kt;
  k.bottomLeftCorner<3, 3>() = -kt;
  k.bottomRightCorner<3, 3>() = kt;
  return k;
}

std::vector<NodeSpring> build_spring_field(const Mesh& mesh, const SoilProfile& profile) {
  std::vector<NodeSpring> springs;
  for (int L = 0; L < 4; ++L) {
    const auto& chain = mesh.embedded_nodes[L];
    if (chain.size() < 2) throw ConfigError("embedded pile has no elements");
    const double tip_depth = -mesh.nodes[chain.back()].z() / 1000.0;
    if (tip_depth > profile.bottom_depth_m() + 1e-9)
      throw ConfigError("soil profile shallower than the pile tip");
    for (size_t i = 0; i < chain.size(); ++i) {
      NodeSpring s;
      s.node = chain[i];
      s.depth_m = -mesh.nodes[chain[i]].z() / 1000.0;
      double trib = 0.0;
      if (i > 0) trib += 0.5 * (mesh.nodes[chain[i - 1]] - mesh.nodes[chain[i]]).norm();
      if (i + 1 < chain.size())
        trib += 0.5 * (mesh.nodes[chain[i]] - mesh.nodes[chain[i + 1]]).norm();
      s.trib_len_mm = trib;
      const SoilLayer& layer = profile.layer_at(s.depth_m);
      s.layer = static_cast<int>(&layer - profile.layers.data());
      springs.push_back(s);
    }
  }
  return springs;
}

}  // namespace jacketopt
