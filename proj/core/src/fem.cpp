#include "jacketopt/fem.hpp"

#include "jacketopt/errors.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace jacketopt {

namespace {

constexpr double kVerticalCos = 0.999;
constexpr double kGauss1 = 0.5 - 0.5 / std::numbers::sqrt3;
constexpr double kGauss2 = 0.5 + 0.5 / std::numbers::sqrt3;

Eigen::Matrix3d member_rotation(const Eigen::Vector3d& x1, const Eigen::Vector3d& x2) {
  const Eigen::Vector3d ex = (x2 - x1).normalized();
  const Eigen::Vector3d ref =
      std::abs(ex.z()) > kVerticalCos ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d ey = ref.cross(ex).normalized();
  const Eigen::Vector3d ez = ex.cross(ey);
  Eigen::Matrix3d r;
  r.row(0) = ex;
  r.row(1) = ey;
  r.row(2) = ez;
  return r;
}

Eigen::Matrix<double, 12, 12> beam_stiffness_local(double e, double g, double a, double iy,
                                                   double iz, double j, double l) {
  Eigen::Matrix<double, 12, 12> k = Eigen::Matrix<double, 12, 12>::Zero();
  const double l2 = l * l, l3 = l2 * l;
  const double ea = e * a / l;
  const double gj = g * j / l;
  k(0, 0) = ea;
  k(0, 6) = -ea;
  k(6, 6) = ea;
  k(3, 3) = gj;
  k(3, 9) = -gj;
  k(9, 9) = gj;
  // Bending in the local x-y plane (deflection y, rotation about z).
  k(1, 1) = 12 * e * iz / l3;
  k(1, 5) = 6 * e * iz / l2;
  k(1, 7) = -12 * e * iz / l3;
  k(1, 11) = 6 * e * iz / l2;
  k(5, 5) = 4 * e * iz / l;
  k(5, 7) = -6 * e * iz / l2;
  k(5, 11) = 2 * e * iz / l;
  k(7, 7) = 12 * e * iz / l3;
  k(7, 11) = -6 * e * iz / l2;
  k(11, 11) = 4 * e * iz / l;
  // Bending in the local x-z plane (deflection z, rotation about y).
  k(2, 2) = 12 * e * iy / l3;
  k(2, 4) = -6 * e * iy / l2;
  k(2, 8) = -12 * e * iy / l3;
  k(2, 10) = -6 * e * iy / l2;
  k(4, 4) = 4 * e * iy / l;
  k(4, 8) = 6 * e * iy / l2;
  k(4, 10) = 2 * e * iy / l;
  k(8, 8) = 12 * e * iy / l3;
  k(8, 10) = 6 * e * iy / l2;
  k(10, 10) = 4 * e * iy / l;
  return k.selfadjointView<Eigen::Upper>();
}

Eigen::Matrix<double, 12, 12> expand_rotation(const Eigen::Matrix3d& r) {
  Eigen::Matrix<double, 12, 12> t = Eigen::Matrix<double, 12, 12>::Zero();
  for (int b = 0; b < 4; ++b) t.block<3, 3>(3 * b, 3 * b) = r;
  return t;
}

}  // namespace

LoadAssembly::LoadAssembly(const FemModel& model)
    : f_full(Eigen::VectorXd::Zero(6 * static_cast<int>(model.mesh().nodes.size()))),
      eq_local(model.active_element_count(), Eigen::Matrix<double, 12, 1>::Zero()) {}

FemModel::FemModel(const Mesh& mesh, const MaterialSpec& mat, Support support,
                   const SoilProfile* soil)
    : mesh_(&mesh), mat_(mat), support_(support), soil_(soil) {
  const int n_nodes = static_cast<int>(mesh.nodes.size());
  n_full_ = 6 * n_nodes;
  node_active_.assign(n_nodes, false);
  active_of_mesh_.assign(mesh.elements.size(), -1);

  const double e = mat_.e_mpa;
  const double g = e / (2.0 * (1.0 + mat_.nu));

  for (size_t i = 0; i < mesh.elements.size(); ++i) {
    const MeshElement& el = mesh.elements[i];
    const Member& mem = mesh.members[el.member];
    if (support_ == Support::fixed && mem.embedded) continue;
    ElemData ed;
    ed.mesh_index = static_cast<int>(i);
    ed.n1 = el.n1;
    ed.n2 = el.n2;
    ed.length_mm = el.length_mm;
    ed.rot = member_rotation(mesh.nodes[el.n1], mesh.nodes[el.n2]);
    const TubeProps tp = tube_props(el.geom);
    ed.area_mm2 = tp.area_mm2;
    ed.inertia_mm4 = tp.inertia_mm4;
    ed.d_mm = el.geom.d_mm;
    ed.weight_per_len_n_mm = mat_.rho_t_mm3 * tp.area_mm2;  // times g gives N/mm
    ed.k_local = beam_stiffness_local(e, g, tp.area_mm2, tp.inertia_mm4, tp.inertia_mm4,
                                      tp.torsion_mm4, el.length_mm);
    active_of_mesh_[i] = static_cast<int>(active_elements_.size());
    node_active_[el.n1] = node_active_[el.n2] = true;
    active_elements_.push_back(std::move(ed));
  }
  if (active_elements_.empty()) throw ConfigError("model has no active elements");
  if (mesh.rp_node >= 0) node_active_[mesh.rp_node] = true;

  // Constraint map: leg-top nodes are rigid slaves of the reference point;
  // with fixed support the mudline nodes are clamped.
  std::vector<int> master_of(n_nodes, -1);
  if (mesh.rp_node >= 0) {
    for (int s : mesh.leg_top_nodes)
      if (s >= 0) master_of[s] = mesh.rp_node;
  }
  std::vector<bool> clamped(n_full_, false);
  if (support_ == Support::fixed) {
    for (int n : mesh.mudline_nodes) {
      if (n < 0) continue;
      for (int c = 0; c < 6; ++c) {
        clamped[full_dof(n, c)] = true;
        clamped_dofs_.push_back(full_dof(n, c));
      }
    }
  } else {
    if (!soil_) throw ConfigError("spring support requires a soil profile");
    springs_ = build_spring_field(mesh, *soil_);
  }

  red_of_full_.assign(n_full_, -1);
  int next = 0;
  for (int n = 0; n < n_nodes; ++n) {
    if (!node_active_[n] || master_of[n] >= 0) continue;
    for (int c = 0; c < 6; ++c) {
      const int fd = full_dof(n, c);
      if (!clamped[fd]) red_of_full_[fd] = next++;
    }
  }
  n_red_ = next;

  std::vector<Eigen::Triplet<double>> t_trip;
  for (int fd = 0; fd < n_full_; ++fd)
    if (red_of_full_[fd] >= 0) t_trip.emplace_back(fd, red_of_full_[fd], 1.0);
  for (int s = 0; s < n_nodes; ++s) {
    const int m = master_of[s];
    if (m < 0) continue;
    const Eigen::Vector3d r = mesh.nodes[s] - mesh.nodes[m];
    auto mcol = [&](int c) {
      const int rc = red_of_full_[full_dof(m, c)];
      if (rc < 0) throw ConfigError("constraint master node is clamped");
      return rc;
    };
    // u_s = u_m + theta_m x r ; theta_s = theta_m.
    t_trip.emplace_back(full_dof(s, 0), mcol(0), 1.0);
    t_trip.emplace_back(full_dof(s, 0), mcol(4), r.z());
    t_trip.emplace_back(full_dof(s, 0), mcol(5), -r.y());
    t_trip.emplace_back(full_dof(s, 1), mcol(1), 1.0);
    t_trip.emplace_back(full_dof(s, 1), mcol(5), r.x());
    t_trip.emplace_back(full_dof(s, 1), mcol(3), -r.z());
    t_trip.emplace_back(full_dof(s, 2), mcol(2), 1.0);
    t_trip.emplace_back(full_dof(s, 2), mcol(3), r.y());
    t_trip.emplace_back(full_dof(s, 2), mcol(4), -r.x());
    for (int c = 3; c < 6; ++c) t_trip.emplace_back(full_dof(s, c), mcol(c), 1.0);
  }
  t_map_.resize(n_full_, n_red_);
  t_map_.setFromTriplets(t_trip.begin(), t_trip.end());

  std::vector<Eigen::Triplet<double>> k_trip;
  k_trip.reserve(active_elements_.size() * 144);
  for (const ElemData& ed : active_elements_) {
    const Eigen::Matrix<double, 12, 12> t12 = expand_rotation(ed.rot);
    const Eigen::Matrix<double, 12, 12> kg = t12.transpose() * ed.k_local * t12;
    const std::array<int, 12> dofs = {
        full_dof(ed.n1, 0), full_dof(ed.n1, 1), full_dof(ed.n1, 2),
        full_dof(ed.n1, 3), full_dof(ed.n1, 4), full_dof(ed.n1, 5),
        full_dof(ed.n2, 0), full_dof(ed.n2, 1), full_dof(ed.n2, 2),
        full_dof(ed.n2, 3), full_dof(ed.n2, 4), full_dof(ed.n2, 5)};
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b)
        if (kg(a, b) != 0.0) k_trip.emplace_back(dofs[a], dofs[b], kg(a, b));
  }
  Eigen::SparseMatrix<double> k_full(n_full_, n_full_);
  k_full.setFromTriplets(k_trip.begin(), k_trip.end());
  k_beam_red_ = t_map_.transpose() * k_full * t_map_;
  k_beam_red_.makeCompressed();
}

Eigen::VectorXd FemModel::reduce(const Eigen::VectorXd& full) const {
  return t_map_.transpose() * full;
}

Eigen::VectorXd FemModel::expand(const Eigen::VectorXd& red) const { return t_map_ * red; }

void FemModel::spring_contrib(const Eigen::VectorXd& u_full, Eigen::VectorXd* f_int_full,
                              std::vector<Eigen::Triplet<double>>* k_trip) const {
  for (const NodeSpring& s : springs_) {
    const SoilLayer& layer = soil_->layers[s.layer];
    const Eigen::Vector3d delta = u_full.segment<3>(full_dof(s.node, 0));
    if (f_int_full) {
      f_int_full->segment<3>(full_dof(s.node, 0)) +=
          s.trib_len_mm * soil_traction(layer, delta);
    }
    if (k_trip) {
      const Eigen::Matrix3d kt = s.trib_len_mm * soil_tangent(layer, delta);
      // Always emit the full 3x3 block (zeros included) so the tangent sparsity
      // pattern stays the same across Newton iterations.
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const int ra = red_of_full_[full_dof(s.node, a)];
          const int rb = red_of_full_[full_dof(s.node, b)];
          if (ra >= 0 && rb >= 0) k_trip->emplace_back(ra, rb, kt(a, b));
        }
    }
  }
}

void FemModel::consistent_element_load(const ElemData& ed,
                                       const std::array<Eigen::Vector3d, 2>& p_global_n_mm,
                                       LoadAssembly& load, size_t active_idx) const {
  const double l = ed.length_mm;
  Eigen::Matrix<double, 12, 1> f_local = Eigen::Matrix<double, 12, 1>::Zero();
  const std::array<double, 2> xis = {kGauss1, kGauss2};
  for (int g = 0; g < 2; ++g) {
    const Eigen::Vector3d p = ed.rot * p_global_n_mm[g];
    const double w = 0.5 * l;  // Gauss weight times the Jacobian
    const double xi = xis[g];
    const double xi2 = xi * xi, xi3 = xi2 * xi;
    const double h1 = 1.0 - 3.0 * xi2 + 2.0 * xi3;
    const double h2 = l * (xi - 2.0 * xi2 + xi3);
    const double h3 = 3.0 * xi2 - 2.0 * xi3;
    const double h4 = l * (xi3 - xi2);
    f_local[0] += w * p.x() * (1.0 - xi);
    f_local[6] += w * p.x() * xi;
    f_local[1] += w * p.y() * h1;
    f_local[5] += w * p.y() * h2;
    f_local[7] += w * p.y() * h3;
    f_local[11] += w * p.y() * h4;
    f_local[2] += w * p.z() * h1;
    f_local[4] -= w * p.z() * h2;
    f_local[8] += w * p.z() * h3;
    f_local[10] -= w * p.z() * h4;
  }
  load.eq_local[active_idx] += f_local;
  const Eigen::Matrix<double, 12, 1> f_global = expand_rotation(ed.rot).transpose() * f_local;
  load.f_full.segment<6>(full_dof(ed.n1, 0)) += f_global.head<6>();
  load.f_full.segment<6>(full_dof(ed.n2, 0)) += f_global.tail<6>();
}

void FemModel::add_rp_load(LoadAssembly& load, const RPLoad& rp, double factor) const {
  if (mesh_->rp_node < 0) throw ConfigError("mesh has no reference point node");
  Eigen::Matrix<double, 6, 1> f;
  f << rp.fx_n, rp.fy_n, rp.fz_n, rp.mx_nmm, rp.my_nmm, rp.mz_nmm;
  load.f_full.segment<6>(full_dof(mesh_->rp_node, 0)) += factor * f;
}

void FemModel::add_gravity(LoadAssembly& load, double g_mm_s2, double factor) const {
  for (size_t i = 0; i < active_elements_.size(); ++i) {
    const ElemData& ed = active_elements_[i];
    const Eigen::Vector3d p(0.0, 0.0, -ed.weight_per_len_n_mm * g_mm_s2 * factor);
    consistent_element_load(ed, {p, p}, load, i);
  }
}

void FemModel::add_wave_load(LoadAssembly& load, const WaveState& wave,
                             const MorisonParams& mp, const CsTable& cs,
                             double swl_above_mudline_m, double direction_deg,
                             double factor) const {
  const double swl_mm = swl_above_mudline_m * 1000.0;
  const double dir = direction_deg * std::numbers::pi / 180.0;
  const Eigen::Vector3d e_prop(std::cos(dir), std::sin(dir), 0.0);
  for (size_t i = 0; i < active_elements_.size(); ++i) {
    const ElemData& ed = active_elements_[i];
    const MeshElement& el = mesh_->elements[ed.mesh_index];
    if (mesh_->members[el.member].embedded) continue;  // sheltered by the soil
    if (std::min(el.ip[0].x.z(), el.ip[1].x.z()) > swl_mm) continue;  // fully dry

    const Eigen::Vector3d t_axis = ed.rot.row(0);
    const double cos_a = std::clamp(std::abs(t_axis.dot(e_prop)), 0.0, 1.0);
    const double sin_a = std::sqrt(1.0 - cos_a * cos_a);
    Eigen::Vector3d e_dir = e_prop - t_axis.dot(e_prop) * t_axis;
    const double nrm = e_dir.norm();
    if (nrm < 1e-9) continue;  // member parallel to the flow: no normal force
    e_dir /= nrm;
    const double alpha_deg = std::acos(cos_a) * 180.0 / std::numbers::pi;

    std::array<Eigen::Vector3d, 2> p{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
    bool any = false;
    for (int g = 0; g < 2; ++g) {
      const double z_rel_m = (el.ip[g].x.z() - swl_mm) / 1000.0;
      if (z_rel_m > 0.0) continue;
      const CsCoeffs cc = cs_lookup(cs, mp, z_rel_m, alpha_deg);
      PointLoadSpec spec;
      spec.x_m = 0.0;  // per-point worst phase; the reference x drops out
      spec.z_rel_m = z_rel_m;
      spec.d_m = el.ip[g].geom.d_mm / 1000.0;
      spec.sin_alpha = sin_a;
      spec.cd = cc.cd;
      spec.cm = cc.cm;
      const double q_n_m = design_point_load_n_m(wave, mp, spec);
      if (q_n_m == 0.0) continue;
      p[g] = factor * (q_n_m / 1000.0) * e_dir;
      any = true;
    }
    if (any) consistent_element_load(ed, p, load, i);
  }
}

SolveResult FemModel::solve(const LoadAssembly& load, const SolveOptions& opts) const {
  const Eigen::VectorXd f_ext_red = reduce(load.f_full);
  const double tol = std::max(opts.rel_tol * f_ext_red.norm(), opts.abs_floor_n);

  Eigen::VectorXd u_red = Eigen::VectorXd::Zero(n_red_);
  SolveResult res;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  Eigen::Index analyzed_nnz = -1;

  auto residual = [&](const Eigen::VectorXd& u) {
    Eigen::VectorXd r = k_beam_red_ * u - f_ext_red;
    if (!springs_.empty()) {
      Eigen::VectorXd f_spring = Eigen::VectorXd::Zero(n_full_);
      spring_contrib(expand(u), &f_spring, nullptr);
      r += reduce(f_spring);
    }
    return r;
  };

  Eigen::VectorXd r = residual(u_red);
  res.residual_history.push_back(r.norm());

  while (r.norm() > tol) {
    if (res.iterations >= opts.max_iterations) {
      std::ostringstream os;
      os << "Newton did not converge in " << opts.max_iterations
         << " iterations; residual history:";
      for (double h : res.residual_history) os << " " << h;
      throw SolveError(os.str());
    }
    Eigen::SparseMatrix<double> k_t = k_beam_red_;
    if (!springs_.empty()) {
      std::vector<Eigen::Triplet<double>> trip;
      spring_contrib(expand(u_red), nullptr, &trip);
      Eigen::SparseMatrix<double> k_s(n_red_, n_red_);
      k_s.setFromTriplets(trip.begin(), trip.end());
      k_t += k_s;
    }
    k_t.makeCompressed();
    if (k_t.nonZeros() != analyzed_nnz) {
      ldlt.analyzePattern(k_t);
      analyzed_nnz = k_t.nonZeros();
    }
    ldlt.factorize(k_t);
    if (ldlt.info() != Eigen::Success)
      throw SolveError("stiffness factorization failed (singular or ill-posed model)");
    const Eigen::VectorXd du = ldlt.solve(-r);
    if (!du.allFinite()) throw SolveError("non-finite Newton update");

    double step = 1.0;
    Eigen::VectorXd u_try, r_try;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h) {
      u_try = u_red + step * du;
      r_try = residual(u_try);
      if (r_try.norm() < r.norm() || r_try.norm() <= tol) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted)
      throw SolveError("Newton step diverged after " + std::to_string(opts.max_halvings) +
                       " halvings (residual " + std::to_string(r.norm()) + ")");
    u_red = u_try;
    r = r_try;
    ++res.iterations;
    res.residual_history.push_back(r.norm());
  }

  const Eigen::VectorXd u_full = expand(u_red);

  // Response scalars over the active node sets.
  const double rad2deg = 180.0 / std::numbers::pi;
  auto consider = [&](int n, double* u_max, double* phi_z, double* phi_tilt) {
    const Eigen::Vector3d d = u_full.segment<3>(full_dof(n, 0));
    const Eigen::Vector3d th = u_full.segment<3>(full_dof(n, 3));
    if (u_max) *u_max = std::max(*u_max, d.norm());
    if (phi_z) *phi_z = std::max(*phi_z, std::abs(th.z()) * rad2deg);
    if (phi_tilt) *phi_tilt = std::max(*phi_tilt, th.head<2>().norm() * rad2deg);
  };
  const int n_nodes = static_cast<int>(mesh_->nodes.size());
  for (int n = 0; n < n_nodes; ++n) {
    if (!node_active_[n]) continue;
    consider(n, &res.u_overall_max_mm, &res.phi_overall_z_deg, &res.phi_overall_tilt_deg);
    if (mesh_->rp_node < 0 && mesh_->nodes[n].z() >= mesh_->top_z_mm - 1e-6)
      consider(n, &res.u_top_max_mm, &res.phi_top_z_deg, &res.phi_top_tilt_deg);
  }
  // With a rigid top frame the jacket-top response is the motion of its
  // reference point; the leg-top corner values only add the rigid-body lever
  // of that same motion.
  if (mesh_->rp_node >= 0)
    consider(mesh_->rp_node, &res.u_top_max_mm, &res.phi_top_z_deg, &res.phi_top_tilt_deg);
  for (int n : mesh_->mudline_nodes)
    if (n >= 0)
      consider(n, &res.u_mudline_max_mm, &res.phi_mudline_z_deg, &res.phi_mudline_tilt_deg);

  // Element end forces and the outer-fiber normal stress.
  Eigen::VectorXd f_int_full = Eigen::VectorXd::Zero(n_full_);
  if (opts.want_fields) {
    res.field_elements.reserve(active_elements_.size());
    res.stress_end1_mpa.reserve(active_elements_.size());
    res.stress_end2_mpa.reserve(active_elements_.size());
  }
  for (size_t i = 0; i < active_elements_.size(); ++i) {
    const ElemData& ed = active_elements_[i];
    Eigen::Matrix<double, 12, 1> u_e;
    u_e.head<6>() = u_full.segment<6>(full_dof(ed.n1, 0));
    u_e.tail<6>() = u_full.segment<6>(full_dof(ed.n2, 0));
    const Eigen::Matrix<double, 12, 12> t12 = expand_rotation(ed.rot);
    const Eigen::Matrix<double, 12, 1> f_elastic = ed.k_local * (t12 * u_e);
    const Eigen::Matrix<double, 12, 1> f_local = f_elastic - load.eq_local[i];
    const double c_over_i = 0.5 * ed.d_mm / ed.inertia_mm4;
    const double s1 = std::abs(f_local[0]) / ed.area_mm2 +
                      std::hypot(f_local[4], f_local[5]) * c_over_i;
    const double s2 = std::abs(f_local[6]) / ed.area_mm2 +
                      std::hypot(f_local[10], f_local[11]) * c_over_i;
    const double s = std::max(s1, s2);
    if (s > res.max_stress_mpa) {
      res.max_stress_mpa = s;
      res.max_stress_element = ed.mesh_index;
    }
    if (opts.want_fields) {
      res.field_elements.push_back(ed.mesh_index);
      res.stress_end1_mpa.push_back(s1);
      res.stress_end2_mpa.push_back(s2);
    }
    // Elastic nodal forces (no equivalent-load correction) feed the clamp
    // reaction balance below.
    const Eigen::Matrix<double, 12, 1> f_global = t12.transpose() * f_elastic;
    f_int_full.segment<6>(full_dof(ed.n1, 0)) += f_global.head<6>();
    f_int_full.segment<6>(full_dof(ed.n2, 0)) += f_global.tail<6>();
  }

  // Force balance: applied loads vs clamp and spring reactions.
  for (int n = 0; n < n_nodes; ++n) {
    const Eigen::Vector3d f = load.f_full.segment<3>(full_dof(n, 0));
    const Eigen::Vector3d m = load.f_full.segment<3>(full_dof(n, 3));
    res.applied_force_n += f;
    res.applied_moment_nmm += m + mesh_->nodes[n].cross(f);
  }
  if (!springs_.empty()) {
    for (const NodeSpring& s : springs_) {
      const SoilLayer& layer = soil_->layers[s.layer];
      const Eigen::Vector3d delta = u_full.segment<3>(full_dof(s.node, 0));
      const Eigen::Vector3d f = -s.trib_len_mm * soil_traction(layer, delta);
      res.reaction_force_n += f;
      res.reaction_moment_nmm += mesh_->nodes[s.node].cross(f);
    }
  }
  for (int n : mesh_->mudline_nodes) {
    if (n < 0 || support_ != Support::fixed) continue;
    // At a clamped node the support supplies the imbalance between internal
    // and applied nodal forces.
    const Eigen::Vector3d f =
        f_int_full.segment<3>(full_dof(n, 0)) - load.f_full.segment<3>(full_dof(n, 0));
    const Eigen::Vector3d m =
        f_int_full.segment<3>(full_dof(n, 3)) - load.f_full.segment<3>(full_dof(n, 3));
    res.reaction_force_n += f;
    res.reaction_moment_nmm += m + mesh_->nodes[n].cross(f);
  }

  if (opts.want_fields) {
    res.disp_mm.resize(n_nodes, Eigen::Vector3d::Zero());
    res.rot_rad.resize(n_nodes, Eigen::Vector3d::Zero());
    for (int n = 0; n < n_nodes; ++n) {
      res.disp_mm[n] = u_full.segment<3>(full_dof(n, 0));
      res.rot_rad[n] = u_full.segment<3>(full_dof(n, 3));
    }
  }
  return res;
}

}  // namespace jacketopt
