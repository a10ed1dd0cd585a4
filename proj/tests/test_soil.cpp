#include <doctest.h>

#include "jacketopt/errors.hpp"
#include "jacketopt/soil.hpp"

#include "test_util.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

using namespace jacketopt;

namespace {

SoilProfile load_profile() { return parse_soil(data_file("soil.json")); }

JacketParams load_baseline() {
  return parse_model_files(data_file("model.jct.json"), data_file("sections.sec.json"),
                           data_file("material.json"));
}

}  // namespace

TEST_SUITE_BEGIN("soil");

TEST_CASE("curve evaluation is piecewise linear, odd, with final-slope continuation") {
  SoilCurve c;
  c.points = {{8.0, 140.0}, {25.0, 330.0}, {60.0, 480.0}};
  CHECK(c.eval(0.0) == 0.0);
  CHECK(c.eval(4.0) == doctest::Approx(70.0));                 // first segment
  CHECK(c.eval(8.0) == doctest::Approx(140.0));
  CHECK(c.eval(16.5) == doctest::Approx(0.5 * (140.0 + 330.0)));
  CHECK(c.eval(60.0) == doctest::Approx(480.0));
  // Beyond the last breakpoint the final slope continues.
  const double s3 = (480.0 - 330.0) / (60.0 - 25.0);
  CHECK(c.eval(81.0) == doctest::Approx(480.0 + 21.0 * s3));
  CHECK(c.slope(100.0) == doctest::Approx(s3));
  // Odd symmetry.
  for (double d : {0.5, 7.0, 30.0, 90.0}) CHECK(c.eval(-d) == doctest::Approx(-c.eval(d)));
  CHECK(c.initial_slope() == doctest::Approx(140.0 / 8.0));
}

TEST_CASE("file curves are 4 SI points starting at the origin") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "jacketopt_soil_fmt";
  fs::create_directories(dir);
  auto write = [&](const std::string& body) {
    const fs::path p = dir / "soil.json";
    std::ofstream(p) << body;
    return p.string();
  };
  const std::string head =
      "{\"layers\":[{\"name\":\"clay\",\"depth_top_m\":0,\"depth_bottom_m\":40,";
  // Linear-interpolation oracle: {(0,0),(0.01,1e5),(0.05,2e5),plateau}, 0.03 m
  // -> 1.5e5 N/m, i.e. 30 mm -> 150 N/mm internally.
  const std::string good =
      head +
      "\"py\":[[0,0],[0.01,1e5],[0.05,2e5],[0.08,2e5]],"
      "\"tz\":[[0,0],[0.002,5e5],[0.01,1.5e6],[0.02,2e6]]}]}";
  SoilProfile p = parse_soil(write(good));
  CHECK(p.layers[0].py.eval(30.0) == doctest::Approx(150.0).epsilon(1e-12));
  CHECK(p.layers[0].py.eval(80.0) == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(p.layers[0].py.eval(200.0) == doctest::Approx(200.0).epsilon(1e-12));  // flat tail
  CHECK(p.layers[0].py.slope(100.0) == 0.0);
  CHECK(p.layers[0].tz.eval(2.0) == doctest::Approx(500.0).epsilon(1e-12));

  const std::string no_origin =
      head +
      "\"py\":[[0.005,5e4],[0.01,1e5],[0.05,2e5],[0.08,2e5]],"
      "\"tz\":[[0,0],[0.002,5e5],[0.01,1.5e6],[0.02,2e6]]}]}";
  CHECK_THROWS_AS(parse_soil(write(no_origin)), ConfigError);

  const std::string three_pts =
      head +
      "\"py\":[[0,0],[0.01,1e5],[0.05,2e5]],"
      "\"tz\":[[0,0],[0.002,5e5],[0.01,1.5e6],[0.02,2e6]]}]}";
  CHECK_THROWS_AS(parse_soil(write(three_pts)), ConfigError);

  const std::string decreasing =
      head +
      "\"py\":[[0,0],[0.01,1e5],[0.05,9e4],[0.08,2e5]],"
      "\"tz\":[[0,0],[0.002,5e5],[0.01,1.5e6],[0.02,2e6]]}]}";
  CHECK_THROWS_AS(parse_soil(write(decreasing)), ConfigError);
}

TEST_CASE("generated curves follow the API closed forms") {
  // Soft clay: deep element caps at 9*s_u*D; y_c = 2.5*eps50*D scales the
  // displacement axis; beyond 8*y_c the resistance plateaus.
  const double su = 40.0, d = 2.0, eps50 = 0.01;
  SoilCurve deep = make_soft_clay_py(su, 9.0, d, 50.0, eps50);
  const double pu = 9.0 * su * d;  // N/mm
  const double yc = 2.5 * eps50 * d * 1000.0;
  CHECK(deep.eval(yc) == doctest::Approx(0.5 * pu));
  CHECK(deep.eval(8.0 * yc) == doctest::Approx(pu));
  CHECK(deep.eval(20.0 * yc) == doctest::Approx(pu));  // plateau continues
  // Shallow element: wedge term governs and resistance is below the deep cap.
  SoilCurve shallow = make_soft_clay_py(su, 9.0, d, 2.0, eps50);
  CHECK(shallow.eval(8.0 * yc) < pu);
  CHECK(shallow.eval(8.0 * yc) ==
        doctest::Approx((3.0 + 9.0 * 2.0 / su + 0.5 * 2.0 / d) * su * d));

  // Sand: initial tangent tracks the chart modulus k*z within 2%; the curve
  // saturates near A*p_u and never exceeds it.
  const double phi = 35.0, gam = 10.0, ds = 2.0, z = 10.0;
  SoilCurve sand = make_sand_py(phi, gam, ds, z);
  const double k_init = 22000.0 * z * 1e-6;  // N/mm^2
  CHECK(sand.initial_slope() == doctest::Approx(k_init).epsilon(0.03));
  const double plateau = sand.points.back().second;
  CHECK(sand.eval(10.0 * sand.points.back().first) == doctest::Approx(plateau));
  CHECK(sand.slope(5.0 * sand.points.back().first) == 0.0);

  // Axial curves: peak value and mobilization displacement.
  SoilCurve ctz = make_clay_tz(su, 0.8, d);
  CHECK(ctz.eval(0.01 * d * 1000.0) == doctest::Approx(0.8 * su * std::numbers::pi * d));
  CHECK(ctz.slope(0.02 * d * 1000.0) == 0.0);
  SoilCurve stz = make_sand_tz(100.0, 0.4, d);
  CHECK(stz.eval(2.5) == doctest::Approx(0.4 * 100.0 * std::numbers::pi * d));
  CHECK(stz.eval(10.0) == doctest::Approx(0.4 * 100.0 * std::numbers::pi * d));
}

TEST_CASE("profile parses and assigns interface nodes to the deeper layer") {
  SoilProfile p = load_profile();
  REQUIRE(p.layers.size() == 4);
  CHECK(p.layer_at(0.0).name == "soft silt");
  CHECK(p.layer_at(5.999).name == "soft silt");
  CHECK(p.layer_at(6.0).name == "silty sand");     // boundary: deeper wins
  CHECK(p.layer_at(14.0).name == "dense sand");
  CHECK(p.layer_at(59.0).name == "very dense sand");
  CHECK_THROWS_AS(p.layer_at(61.0), ConfigError);
}

TEST_CASE("traction splits along the resultant and is isotropic in the plane") {
  SoilProfile p = load_profile();
  const SoilLayer& layer = p.layers[1];

  // Pure x displacement vs the same magnitude rotated 37 degrees: the force
  // magnitude must match and stay aligned with the displacement.
  const double d = 17.0;
  const Eigen::Vector3d tx = soil_traction(layer, {d, 0.0, 0.0});
  const double ang = 37.0 * std::numbers::pi / 180.0;
  const Eigen::Vector3d dir(std::cos(ang), std::sin(ang), 0.0);
  const Eigen::Vector3d tr = soil_traction(layer, d * dir);
  CHECK(tx.norm() == doctest::Approx(tr.norm()).epsilon(1e-12));
  CHECK(tr.cross(dir).norm() < 1e-12 * tr.norm());
  CHECK(tx.x() == doctest::Approx(layer.py.eval(d)));

  // The resultant magnitude is what enters the curve, not the components.
  const Eigen::Vector3d t45 = soil_traction(layer, {d, d, 0.0});
  CHECK(t45.head<2>().norm() == doctest::Approx(layer.py.eval(d * std::sqrt(2.0))));

  // Near zero the initial tangent applies smoothly.
  const Eigen::Vector3d t0 = soil_traction(layer, {1e-14, 0.0, 0.0});
  CHECK(t0.x() == doctest::Approx(layer.py.initial_slope() * 1e-14));
}

TEST_CASE("element stiffness matches finite differences of the force") {
  SoilProfile p = load_profile();
  const double L = 750.0;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-30.0, 30.0);
  for (const SoilLayer& layer : p.layers) {
    for (int trial = 0; trial < 5; ++trial) {
      Vec6 u;
      for (int i = 0; i < 6; ++i) u[i] = dist(rng);
      const Mat6 k = spring_element_stiffness(layer, L, u);
      // Symmetry and the B-structure: rows for the two nodes mirror.
      CHECK((k - k.transpose()).norm() < 1e-9 * k.norm());
      CHECK((k.topLeftCorner<3, 3>() + k.topRightCorner<3, 3>()).norm() < 1e-12 * k.norm());

      const double h = 1e-6;
      for (int j = 0; j < 6; ++j) {
        Vec6 up = u, um = u;
        up[j] += h;
        um[j] -= h;
        const Vec6 fd =
            (spring_element_force(layer, L, up) - spring_element_force(layer, L, um)) /
            (2.0 * h);
        for (int i = 0; i < 6; ++i) {
          INFO("layer=", layer.name, " i=", i, " j=", j);
          CHECK(k(i, j) == doctest::Approx(fd[i]).epsilon(5e-5).scale(layer.py.initial_slope() * L));
        }
      }
    }
  }
}

TEST_CASE("equal node motion produces no spring force") {
  SoilProfile p = load_profile();
  Vec6 u;
  u << 3.0, -2.0, 1.0, 3.0, -2.0, 1.0;  // rigid translation
  CHECK(spring_element_force(p.layers[0], 500.0, u).norm() == 0.0);
}

TEST_CASE("spring field covers the embedded length with tributary segments") {
  JacketParams params = load_baseline();
  Mesh mesh = generate_mesh(params);
  SoilProfile prof = load_profile();
  auto springs = build_spring_field(mesh, prof);

  double total = 0.0;
  int at_mudline = 0;
  for (const auto& s : springs) {
    CHECK(s.trib_len_mm > 0.0);
    CHECK(s.depth_m >= 0.0);
    CHECK(prof.layers[s.layer].top_depth_m <= s.depth_m + 1e-12);
    total += s.trib_len_mm;
    if (s.depth_m == 0.0) ++at_mudline;
  }
  CHECK(at_mudline == 4);
  CHECK(total == doctest::Approx(4.0 * params.pile_embed_mm).epsilon(1e-9));
}

TEST_CASE("a profile shallower than the pile tip is rejected") {
  JacketParams params = load_baseline();
  Mesh mesh = generate_mesh(params);
  SoilProfile prof = load_profile();
  prof.layers.resize(2);  // ends at 14 m, pile goes deeper
  CHECK_THROWS_AS(build_spring_field(mesh, prof), ConfigError);
}

TEST_SUITE_END();
