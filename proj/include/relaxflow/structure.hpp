#pragma once

#include <Eigen/Dense>

#include "relaxflow/system.hpp"

namespace relaxflow {

// The hyperbolic part, quasilinearized about a state U = (w, z) with
// w = (rho, m) and z = (tau1 packed, tau2), reads
//
//   d/dt [w]   [ A_j        C_j/eps ] [w]
//        [ ] + [                    ] d_j [ ]  = source,
//   d/dt [z]   [ B_j/eps    0       ] [z]
//
// where A_j is the barotropic Euler flux Jacobian, C_j is the constant
// stress-to-momentum coupling, and B_j is the Jacobian of the tau-block flux
// g_j(w).  The entropy Hessian H = diag(eta_ww, eta_zz) symmetrizes every
// directional combination: H A_j and the cross blocks match through
//
//   eta_ww C_j = B_j^T eta_zz                                    (coupling)
//   eta_ww A_j symmetric                                         (symmetry)
//
// which is what `check_structure` certifies numerically, state by state.

using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Mat46 = Eigen::Matrix<double, 4, 6>;
using Mat64 = Eigen::Matrix<double, 6, 4>;
using Mat10 = Eigen::Matrix<double, 10, 10>;

/// Barotropic Euler flux Jacobian along `axis`, in (rho, m) variables.
Mat4 flux_jacobian(const RelaxState& s, int axis, const PhysParams& p);

/// Jacobian of the tau-block flux g_axis(w) with respect to (rho, m).
Mat64 source_flux_jacobian(const RelaxState& s, int axis);

/// Constant coupling matrix C_axis (no 1/eps scaling).
Mat46 coupling_matrix(int axis);

/// Hessian of the entropy in the (rho, m) block:
/// (4/rho) [[p' + |v|^2, -v^T], [-v, I]].  Positive definite on rho > 0.
Mat4 entropy_hessian_w(const RelaxState& s, const PhysParams& p);

/// Hessian of the entropy in the packed stress block.  Constant and positive
/// definite.  Not diagonal: the packed tau1 coordinates drop the zz entry, so
/// reproducing the full-tensor Frobenius norm |tau1|^2 exactly forces the
/// off-diagonal 2s between the xx and yy slots.
Mat6 entropy_hessian_z();

/// Full ten-by-ten entropy Hessian, block diagonal in (w, z).
Mat10 entropy_hessian(const RelaxState& s, const PhysParams& p);

/// Directional quasilinear matrix sum_a dir_a J_a with the 1/eps scalings in
/// place; wraps the flat Jacobian shared with the solver.
Mat10 assemble(const RelaxState& s, const Vec3& dir, const PhysParams& p,
               bool with_coupling = true);

struct StructureSample {
  RelaxState state;
  double hessian_min_eig = 0.0;   // smallest eigenvalue of the entropy Hessian
  double symmetry_residual = 0.0; // max_j ||eta_ww A_j - (eta_ww A_j)^T||_F
  double coupling_residual = 0.0; // max_j ||eta_ww C_j - B_j^T eta_zz||_F
};

struct StructureReport {
  std::vector<StructureSample> samples;
  double worst_min_eig = 0.0;
  double worst_symmetry = 0.0;
  double worst_coupling = 0.0;
  double tol = 0.0;
  bool pass = false;
};

struct StructureCheckOptions {
  double tol = 1e-9;
  // Test hook: additive perturbation of the coupling blocks used on the
  // momentum side only, so the certified identity must break.
  double coupling_perturbation = 0.0;
};

StructureReport check_structure(const std::vector<RelaxState>& states,
                                const PhysParams& p,
                                const StructureCheckOptions& opt = {});

/// Deterministic sample states for the structure check: rho in [1/2, 2],
/// |v| <= 1, stress components in [-1, 1].
std::vector<RelaxState> sample_states(int count, unsigned long long seed);

}  // namespace relaxflow
