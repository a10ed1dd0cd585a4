#include "jacketopt/mesh.hpp"

#include "jsonio.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace jacketopt {

namespace {

constexpr double kStationTol = 1e-6;

// Corner sign pattern; leg L sits at (sx*w/2, sy*w/2).
constexpr int kSx[4] = {+1, -1, -1, +1};
constexpr int kSy[4] = {+1, +1, -1, -1};

struct Builder {
  const JacketParams& p;
  Mesh m;
  double inv_sqrt3 = 1.0 / std::sqrt(3.0);

  explicit Builder(const JacketParams& params) : p(params) {}

  int add_joint(const Eigen::Vector3d& x) {
    m.nodes.push_back(x);
    return static_cast<int>(m.nodes.size()) - 1;
  }

  int add_member(std::string name, std::string group, int j1, int j2,
                 std::vector<int> interior, bool embedded, int leg) {
    Member mem;
    mem.name = std::move(name);
    mem.group = std::move(group);
    mem.j1 = j1;
    mem.j2 = j2;
    mem.interior_joints = std::move(interior);
    mem.embedded = embedded;
    mem.leg = leg;
    mem.length_mm = (m.nodes[j2] - m.nodes[j1]).norm();
    m.members.push_back(std::move(mem));
    return static_cast<int>(m.members.size()) - 1;
  }
};

// Intersection of the two face diagonals. The face is a planar trapezoid
// (legs are mirror images through the face midplane), so the closest points
// of the two lines coincide; we still solve the general two-line problem for
// robustness and take the midpoint.
Eigen::Vector3d cross_point(const Eigen::Vector3d& a0, const Eigen::Vector3d& a1,
                            const Eigen::Vector3d& b0, const Eigen::Vector3d& b1) {
  const Eigen::Vector3d u = a1 - a0;
  const Eigen::Vector3d v = b1 - b0;
  const Eigen::Vector3d w = a0 - b0;
  const double uu = u.dot(u), uv = u.dot(v), vv = v.dot(v);
  const double uw = u.dot(w), vw = v.dot(w);
  const double den = uu * vv - uv * uv;
  if (den <= 1e-12 * uu * vv)
    throw ConfigError("degenerate bay: face diagonals are parallel");
  const double s = (uv * vw - vv * uw) / den;
  const double t = (uu * vw - uv * uw) / den;
  const Eigen::Vector3d pa = a0 + s * u;
  const Eigen::Vector3d pb = b0 + t * v;
  if ((pa - pb).norm() > 1.0)  // faces are planar; anything above 1 mm is a bug
    throw ConfigError("bay diagonals failed to intersect");
  if (s <= 0.0 || s >= 1.0 || t <= 0.0 || t >= 1.0)
    throw ConfigError("bay crossing falls outside the braces");
  return 0.5 * (pa + pb);
}

}  // namespace

Mesh generate_mesh(const JacketParams& p) {
  Builder b(p);
  Mesh& m = b.m;

  const double S = p.chain_length_mm();
  const double z_top = p.top_elevation_mm();
  m.top_z_mm = z_top;

  // Chain boundary stations, bottom to top.
  std::vector<double> stations{0.0};
  for (const auto& c : p.leg_chain) stations.push_back(stations.back() + c.length_mm);

  // Per leg: pile joints and chain boundary joints.
  std::array<std::vector<int>, 4> chain_joints;
  for (int L = 0; L < 4; ++L) {
    const Eigen::Vector3d foot(kSx[L] * 0.5 * p.base_width_mm, kSy[L] * 0.5 * p.base_width_mm, 0.0);
    const Eigen::Vector3d base = foot - Eigen::Vector3d(0, 0, p.pile_embed_mm);
    const Eigen::Vector3d head = foot + Eigen::Vector3d(0, 0, p.pile_length_mm);
    const Eigen::Vector3d top(kSx[L] * 0.5 * p.top_width_mm, kSy[L] * 0.5 * p.top_width_mm, z_top);

    const int j_base = b.add_joint(base);
    const int j_foot = b.add_joint(foot);
    const int j_head = b.add_joint(head);
    m.mudline_nodes[L] = j_foot;

    const std::string ln = "leg" + std::to_string(L);
    b.add_member(ln + "/pile_embed", p.pile_group, j_base, j_foot, {}, true, L);
    b.add_member(ln + "/pile_head", p.pile_group, j_foot, j_head, {}, false, L);

    chain_joints[L].push_back(j_head);  // chain station 0 coincides with the pile head
    for (size_t k = 1; k < stations.size(); ++k) {
      const double f = stations[k] / S;
      chain_joints[L].push_back(b.add_joint(head + f * (top - head)));
    }
    for (size_t k = 0; k < p.leg_chain.size(); ++k) {
      b.add_member(ln + "/" + p.leg_chain[k].group, p.leg_chain[k].group, chain_joints[L][k],
                   chain_joints[L][k + 1], {}, false, L);
    }
    m.leg_top_nodes[L] = chain_joints[L].back();
  }

  auto station_index = [&](double s) -> size_t {
    for (size_t k = 0; k < stations.size(); ++k)
      if (std::abs(stations[k] - s) < kStationTol) return k;
    throw ConfigError("bay work point is not on a leg chain boundary");
  };

  // X-braced bays on each of the four faces. Face f joins legs f and f+1.
  for (size_t bi = 0; bi < p.bays.size(); ++bi) {
    const BayDef& bay = p.bays[bi];
    const size_t k_lo = station_index(p.chain_station_top(bay.from_group));
    const size_t k_up = station_index(p.chain_station_bottom(bay.to_group));
    const std::string bn = "bay" + std::to_string(bi + 1);

    for (int f = 0; f < 4; ++f) {
      const int la = f, lb = (f + 1) % 4;
      const int A_lo = chain_joints[la][k_lo];
      const int B_lo = chain_joints[lb][k_lo];
      const int A_up = chain_joints[la][k_up];
      const int B_up = chain_joints[lb][k_up];

      const Eigen::Vector3d X =
          cross_point(m.nodes[A_lo], m.nodes[B_up], m.nodes[B_lo], m.nodes[A_up]);
      const std::string fn = bn + "/face" + std::to_string(f);

      // Through diagonal: stub, brace, X-joint can centered on the crossing,
      // brace, stub. The abutting diagonal lands on the can at the crossing.
      {
        const Eigen::Vector3d u = (m.nodes[B_up] - m.nodes[A_lo]).normalized();
        const double d_lo = (X - m.nodes[A_lo]).norm();
        const double d_up = (m.nodes[B_up] - X).norm();
        const double half_can = 0.5 * bay.joint_can_length_mm;
        if (bay.stub_bottom_length_mm + half_can >= d_lo ||
            bay.stub_top_length_mm + half_can >= d_up)
          throw ConfigError("bay " + bn + ": stubs and joint can overlap the crossing");
        const int jP1 = b.add_joint(m.nodes[A_lo] + bay.stub_bottom_length_mm * u);
        const int jC1 = b.add_joint(X - half_can * u);
        const int jX = b.add_joint(X);
        const int jC2 = b.add_joint(X + half_can * u);
        const int jP2 = b.add_joint(m.nodes[B_up] - bay.stub_top_length_mm * u);
        b.add_member(fn + "/d1/stub_lo", bay.stub_bottom_group, A_lo, jP1, {}, false, -1);
        b.add_member(fn + "/d1/brace_lo", bay.brace_group, jP1, jC1, {}, false, -1);
        b.add_member(fn + "/d1/xjoint", bay.joint_group, jC1, jC2, {jX}, false, -1);
        b.add_member(fn + "/d1/brace_up", bay.brace_group, jC2, jP2, {}, false, -1);
        b.add_member(fn + "/d1/stub_up", bay.stub_top_group, jP2, B_up, {}, false, -1);

        // Abutting diagonal: stub, brace to the crossing, brace, stub.
        const Eigen::Vector3d v = (m.nodes[A_up] - m.nodes[B_lo]).normalized();
        const double e_lo = (X - m.nodes[B_lo]).norm();
        const double e_up = (m.nodes[A_up] - X).norm();
        if (bay.stub_bottom_length_mm >= e_lo || bay.stub_top_length_mm >= e_up)
          throw ConfigError("bay " + bn + ": stubs overlap the crossing");
        const int jQ1 = b.add_joint(m.nodes[B_lo] + bay.stub_bottom_length_mm * v);
        const int jQ2 = b.add_joint(m.nodes[A_up] - bay.stub_top_length_mm * v);
        b.add_member(fn + "/d2/stub_lo", bay.stub_bottom_group, B_lo, jQ1, {}, false, -1);
        b.add_member(fn + "/d2/brace_lo", bay.brace_group, jQ1, jX, {}, false, -1);
        b.add_member(fn + "/d2/brace_up", bay.brace_group, jX, jQ2, {}, false, -1);
        b.add_member(fn + "/d2/stub_up", bay.stub_top_group, jQ2, A_up, {}, false, -1);
      }
    }
  }

  // Load reference point at the centroid of the leg tops; the top frame is
  // idealized as a rigid body coupled to them.
  m.rp_node = b.add_joint(Eigen::Vector3d(0.0, 0.0, z_top));

  // Subdivide members into elements, keeping nodes at interior joints.
  for (size_t mi = 0; mi < m.members.size(); ++mi) {
    Member& mem = m.members[mi];
    const SectionDef& sec = p.sections.require(mem.group);
    std::vector<int> bps{mem.j1};
    for (int j : mem.interior_joints) bps.push_back(j);
    bps.push_back(mem.j2);

    double s_done = 0.0;  // member arc length covered so far
    for (size_t seg = 0; seg + 1 < bps.size(); ++seg) {
      const Eigen::Vector3d a = m.nodes[bps[seg]];
      const Eigen::Vector3d c = m.nodes[bps[seg + 1]];
      const double seg_len = (c - a).norm();
      const int n = std::max(1, static_cast<int>(std::ceil(seg_len / p.mesh_size_mm)));
      int prev = bps[seg];
      for (int e = 0; e < n; ++e) {
        const double f0 = static_cast<double>(e) / n;
        const double f1 = static_cast<double>(e + 1) / n;
        int next;
        if (e + 1 == n) {
          next = bps[seg + 1];
        } else {
          next = b.add_joint(a + f1 * (c - a));
        }
        MeshElement el;
        el.n1 = prev;
        el.n2 = next;
        el.member = static_cast<int>(mi);
        el.length_mm = seg_len / n;
        const double mem_f0 = (s_done + f0 * seg_len) / mem.length_mm;
        const double mem_f1 = (s_done + f1 * seg_len) / mem.length_mm;
        el.geom = sec.at(0.5 * (mem_f0 + mem_f1));
        for (int g = 0; g < 2; ++g) {
          const double xi = 0.5 + (g == 0 ? -0.5 : 0.5) * b.inv_sqrt3;  // 2-pt Gauss
          el.ip[g].s = xi;
          el.ip[g].x = m.nodes[prev] + xi * (m.nodes[next] - m.nodes[prev]);
          el.ip[g].geom = sec.at(mem_f0 + xi * (mem_f1 - mem_f0));
        }
        m.elements.push_back(el);
        prev = next;
      }
      s_done += seg_len;
    }
  }

  // Spring attachment nodes: pile nodes at or below the mudline, top down.
  for (int L = 0; L < 4; ++L) {
    std::vector<std::pair<double, int>> zs;
    for (const auto& el : m.elements) {
      const Member& mem = m.members[el.member];
      if (!mem.embedded || mem.leg != L) continue;
      for (int nid : {el.n1, el.n2}) {
        if (m.nodes[nid].z() <= kStationTol) zs.emplace_back(m.nodes[nid].z(), nid);
      }
    }
    std::sort(zs.begin(), zs.end(),
              [](const auto& a, const auto& b2) { return a.first > b2.first; });
    for (const auto& [z, nid] : zs) {
      (void)z;
      if (m.embedded_nodes[L].empty() || m.embedded_nodes[L].back() != nid)
        m.embedded_nodes[L].push_back(nid);
    }
  }

  std::set<std::string> groups;
  for (const auto& mem : m.members) {
    if (mem.embedded) continue;
    ++m.component_count;
    groups.insert(mem.group);
  }
  m.group_count = static_cast<int>(groups.size());
  return m;
}

double compute_mass_t(const JacketParams& p, const Mesh& m) {
  double mass = p.top_frame_mass_t;
  for (const auto& el : m.elements) {
    const Member& mem = m.members[el.member];
    if (mem.embedded || mem.group == p.pile_group) continue;
    mass += p.material.rho_t_mm3 * tube_props(el.geom).area_mm2 * el.length_mm;
  }
  return mass;
}

std::map<std::string, double> mass_by_group_t(const JacketParams& p, const Mesh& m) {
  std::map<std::string, double> out;
  for (const auto& el : m.elements) {
    const Member& mem = m.members[el.member];
    if (mem.embedded) continue;
    out[mem.group] += p.material.rho_t_mm3 * tube_props(el.geom).area_mm2 * el.length_mm;
  }
  return out;
}

std::vector<GeneratedVariant> batch_generate(
    const JacketParams& base, const std::vector<std::vector<ParamOverride>>& sets) {
  std::vector<GeneratedVariant> out;
  out.reserve(sets.size());
  for (const auto& ovs : sets) {
    GeneratedVariant v;
    v.params = base;
    apply_overrides(v.params, ovs);
    v.mesh = generate_mesh(v.params);
    v.mass_t = compute_mass_t(v.params, v.mesh);
    out.push_back(std::move(v));
  }
  return out;
}

std::string serialize_mesh(const JacketParams& p, const Mesh& m) {
  using jsonio::json;
  json root;
  root["model"] = p.name;
  root["char_size_mm"] = p.mesh_size_mm;
  root["mass_t"] = compute_mass_t(p, m);
  json counts;
  counts["nodes"] = m.nodes.size();
  counts["members"] = m.members.size();
  counts["elements"] = m.elements.size();
  counts["components"] = m.component_count;
  counts["groups"] = m.group_count;
  root["counts"] = counts;
  root["rp_node"] = m.rp_node;
  root["top_z_mm"] = m.top_z_mm;
  root["leg_top_nodes"] = m.leg_top_nodes;
  root["mudline_nodes"] = m.mudline_nodes;

  json nodes = json::array();
  for (const auto& n : m.nodes) nodes.push_back({n.x(), n.y(), n.z()});
  root["nodes_mm"] = std::move(nodes);

  json members = json::array();
  for (const auto& mem : m.members) {
    json e;
    e["name"] = mem.name;
    e["group"] = mem.group;
    e["j1"] = mem.j1;
    e["j2"] = mem.j2;
    e["length_mm"] = mem.length_mm;
    e["embedded"] = mem.embedded;
    if (mem.leg >= 0) e["leg"] = mem.leg;
    members.push_back(std::move(e));
  }
  root["members"] = std::move(members);

  // [n1, n2, member, d_mm, t_mm] per element, at the element midpoint.
  json elements = json::array();
  for (const auto& el : m.elements)
    elements.push_back({el.n1, el.n2, el.member, el.geom.d_mm, el.geom.t_mm});
  root["elements"] = std::move(elements);
  return root.dump(1) + "\n";
}

void write_mesh(const JacketParams& p, const Mesh& m, const std::string& path) {
  jsonio::write_file_atomic(path, serialize_mesh(p, m));
}

}  // namespace jacketopt
