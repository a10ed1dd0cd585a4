#pragma once

// Topology and beam mesh generation. Members are the physical tubes (one per
// design component); elements are their subdivisions at the configured mesh
// size. Node and element ordering is fully deterministic for a given input so
// that downstream results are reproducible bit for bit.
//
// Coordinate frame: origin at the footprint center on the mudline, z up.
// The wave/wind attack direction lies in the x-y plane.

#include "jacketopt/model.hpp"

#include <Eigen/Dense>

#include <array>
#include <map>
#include <string>
#include <vector>

namespace jacketopt {

struct Member {
  std::string name;   // unique, e.g. "leg2/CS2" or "bay1/face3/d2/brace_up"
  std::string group;  // section label
  int j1 = -1, j2 = -1;            // end joints (node ids)
  std::vector<int> interior_joints;  // guaranteed mesh nodes (X-joint crossings)
  double length_mm = 0.0;
  bool embedded = false;  // below the mudline; excluded from counts and reporting
  int leg = -1;           // 0..3 for pile/leg-chain members
};

// Gauss station on an element; loads are sampled here and distributed to the
// nodes consistently.
struct ElemIP {
  double s = 0.0;           // position along the element in [0,1]
  Eigen::Vector3d x;        // global position, mm
  TubeGeom geom;            // local tube geometry (resolves tapers)
};

struct MeshElement {
  int n1 = -1, n2 = -1;
  int member = -1;
  double length_mm = 0.0;
  TubeGeom geom;            // at element midpoint
  std::array<ElemIP, 2> ip;
};

struct Mesh {
  std::vector<Eigen::Vector3d> nodes;  // mm
  std::vector<Member> members;
  std::vector<MeshElement> elements;

  std::array<int, 4> leg_top_nodes{{-1, -1, -1, -1}};
  std::array<int, 4> mudline_nodes{{-1, -1, -1, -1}};
  // Pile nodes at or below the mudline, per leg, ordered top-down. Soil
  // springs attach here.
  std::array<std::vector<int>, 4> embedded_nodes;
  int rp_node = -1;        // load reference point atop the structure
  double top_z_mm = 0.0;

  int component_count = 0;  // members above the mudline
  int group_count = 0;      // distinct section groups among those
};

Mesh generate_mesh(const JacketParams& p);

// Reported structural mass in t: all members above the mudline except the
// pile group, plus the lumped top frame mass. Tapered walls are integrated
// exactly (area is linear in the diameter at constant thickness).
double compute_mass_t(const JacketParams& p, const Mesh& m);
std::map<std::string, double> mass_by_group_t(const JacketParams& p, const Mesh& m);

// Applies each override set to a copy of `base` and regenerates. Values must
// sit on the allowed grid when one is supplied (see ga.hpp).
struct GeneratedVariant {
  JacketParams params;
  Mesh mesh;
  double mass_t = 0.0;
};
std::vector<GeneratedVariant> batch_generate(const JacketParams& base,
                                             const std::vector<std::vector<ParamOverride>>& sets);

// Mesh dump for inspection and downstream tooling: counts, mass, node
// coordinates, members and element connectivity with midpoint tube geometry.
// Byte-identical for identical inputs.
std::string serialize_mesh(const JacketParams& p, const Mesh& m);
void write_mesh(const JacketParams& p, const Mesh& m, const std::string& path);

}  // namespace jacketopt
