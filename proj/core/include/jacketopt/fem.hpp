#pragma once

// Static 3D frame solver: two-node Euler-Bernoulli beam elements with
// torsion, a rigid reference-point coupling at the top, and either clamped
// mudline supports or nonlinear soil springs along the embedded piles.
// Solver units: N, mm, tonnes, seconds, MPa.
//
// External loading is assembled in the full nodal space (6 DOF per node) and
// reduced through the constraint map; per-element equivalent loads are kept
// alongside so element end forces (and stresses) can be recovered after the
// solve.

#include "jacketopt/loads.hpp"
#include "jacketopt/mesh.hpp"
#include "jacketopt/soil.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <string>
#include <vector>

namespace jacketopt {

enum class Support { fixed, spring };

struct SolveOptions {
  int max_iterations = 50;
  double rel_tol = 1e-8;       // on the external load norm
  double abs_floor_n = 1e-6;   // absolute residual floor
  int max_halvings = 10;       // step control on a diverging Newton update
  bool want_fields = false;    // keep full nodal/element fields in the result
};

struct SolveResult {
  double max_stress_mpa = 0.0;
  int max_stress_element = -1;

  double u_top_max_mm = 0.0;      // jacket top: reference-point motion when an
                                  // RP exists, otherwise max over top nodes
  double u_overall_max_mm = 0.0;
  double u_mudline_max_mm = 0.0;

  // Rotations in degrees, both measures: about the vertical axis and the
  // overturning tilt magnitude sqrt(rx^2 + ry^2).
  double phi_top_z_deg = 0.0, phi_top_tilt_deg = 0.0;
  double phi_overall_z_deg = 0.0, phi_overall_tilt_deg = 0.0;
  double phi_mudline_z_deg = 0.0, phi_mudline_tilt_deg = 0.0;

  int iterations = 0;
  std::vector<double> residual_history;

  // Global force balance for equilibrium checks: sum of applied nodal forces
  // and of support reactions (clamped DOFs plus soil springs), with moments
  // taken about the origin.
  Eigen::Vector3d applied_force_n = Eigen::Vector3d::Zero();
  Eigen::Vector3d applied_moment_nmm = Eigen::Vector3d::Zero();
  Eigen::Vector3d reaction_force_n = Eigen::Vector3d::Zero();
  Eigen::Vector3d reaction_moment_nmm = Eigen::Vector3d::Zero();

  // Optional fields (want_fields): per node and per active element.
  std::vector<Eigen::Vector3d> disp_mm;
  std::vector<Eigen::Vector3d> rot_rad;
  std::vector<int> field_elements;          // element ids for stress entries
  std::vector<double> stress_end1_mpa, stress_end2_mpa;
};

// External loading bundle: full-space nodal vector plus the per-element
// work-equivalent load (local frame) needed for end-force recovery.
class FemModel;
struct LoadAssembly {
  Eigen::VectorXd f_full;
  std::vector<Eigen::Matrix<double, 12, 1>> eq_local;  // one per active element

  explicit LoadAssembly(const FemModel& model);
};

class FemModel {
 public:
  // Builds stiffness and the constraint map. `soil` is required for spring
  // support and ignored for fixed; with fixed support the embedded pile is
  // dropped and the four mudline nodes are clamped.
  FemModel(const Mesh& mesh, const MaterialSpec& mat, Support support,
           const SoilProfile* soil);

  const Mesh& mesh() const { return *mesh_; }
  Support support() const { return support_; }
  int active_element_count() const { return static_cast<int>(active_elements_.size()); }

  // Load assembly. Factors multiply the case; gravity acts on all active
  // members, wave loads only on wet above-mudline members.
  void add_rp_load(LoadAssembly& load, const RPLoad& rp, double factor = 1.0) const;
  void add_gravity(LoadAssembly& load, double g_mm_s2, double factor = 1.0) const;
  void add_wave_load(LoadAssembly& load, const WaveState& wave, const MorisonParams& mp,
                     const CsTable& cs, double swl_above_mudline_m, double direction_deg,
                     double factor = 1.0) const;

  SolveResult solve(const LoadAssembly& load, const SolveOptions& opts = {}) const;

 private:
  friend struct LoadAssembly;

  struct ElemData {
    int mesh_index = -1;
    int n1 = -1, n2 = -1;
    double length_mm = 0.0;
    Eigen::Matrix3d rot;  // global -> local
    Eigen::Matrix<double, 12, 12> k_local;
    double area_mm2 = 0.0, inertia_mm4 = 0.0, d_mm = 0.0;
    double weight_per_len_n_mm = 0.0;  // rho * A * 1 (times g at load time)
  };

  int full_dof(int node, int comp) const { return 6 * node + comp; }
  Eigen::VectorXd reduce(const Eigen::VectorXd& full) const;   // T^T * full
  Eigen::VectorXd expand(const Eigen::VectorXd& red) const;    // T * red
  void spring_contrib(const Eigen::VectorXd& u_full, Eigen::VectorXd* f_int_full,
                      std::vector<Eigen::Triplet<double>>* k_trip) const;
  void consistent_element_load(const ElemData& ed,
                               const std::array<Eigen::Vector3d, 2>& p_global_n_mm,
                               LoadAssembly& load, size_t active_idx) const;

  const Mesh* mesh_ = nullptr;
  MaterialSpec mat_;
  Support support_;
  std::vector<ElemData> active_elements_;
  std::vector<int> active_of_mesh_;  // mesh element -> active index or -1

  int n_full_ = 0, n_red_ = 0;
  std::vector<int> red_of_full_;               // -1: slave or clamped or inactive
  Eigen::SparseMatrix<double> t_map_;          // full x reduced
  Eigen::SparseMatrix<double> k_beam_red_;
  std::vector<NodeSpring> springs_;
  const SoilProfile* soil_ = nullptr;
  std::vector<int> clamped_dofs_;
  std::vector<bool> node_active_;
};

}  // namespace jacketopt
