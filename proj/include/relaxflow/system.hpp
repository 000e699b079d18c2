#pragma once

#include "relaxflow/core.hpp"
#include "relaxflow/eos.hpp"

namespace relaxflow {

// First-order system, written per coordinate axis in divergence form
//
//   d/dt rho  + d_j m_j                                         = 0
//   d/dt m_i  + d_j (m_i v_j + p d_ij)
//             + (1/eps1) d_j tau1_ij + (1/eps2) d_i tau2         = 0
//   d/dt tau1 + (1/eps1) (grad v + grad v^T - (2/3) div v I)     = -tau1/(nu eps1^2)
//   d/dt tau2 + (1/eps2) div v                                   = -tau2/(kappa eps2^2)
//
// The stress equations are not conservation laws, but with v = m/rho their
// spatial parts are still exact j-derivatives of pointwise functions of the
// state, so every equation gets a flux and the scheme telescopes.

/// Coefficients of the tau-block flux along `axis`: row r of the flux is
/// sum_a coeff[r][a] * v_a, rows ordered (xx, yy, xy, xz, yz, tau2).
/// These are the entries of grad v + grad v^T - (2/3) div v I (and div v for
/// the last row) that involve d/dx_axis, expressed in the packed components.
using GCoeff = std::array<std::array<double, 3>, 6>;
const GCoeff& tau_flux_coeff(int axis);

/// Constant coupling block along `axis`: the contribution of the stresses to
/// the (rho, m) flux.  Rows (rho, mx, my, mz), columns (xx, yy, xy, xz, yz,
/// tau2), without the 1/eps scalings.  Row i, tau1 columns hold d tau1_ij /
/// d(packed) for j = axis; the tau2 column is d_i,axis.
using CouplingBlock = std::array<std::array<double, 6>, 4>;
const CouplingBlock& coupling_block(int axis);

/// Flux of the full ten-component state along `axis`.  `with_coupling` off is
/// a test hook: it drops every stress term, leaving the bare barotropic Euler
/// flux (stress components then do not move).
StateVec flux(const RelaxState& s, int axis, const PhysParams& p,
              bool with_coupling = true);

/// Exact solution of the stiff relaxation source over a step dt: both
/// stresses decay exponentially, tau1 by exp(-dt/(nu eps1^2)) and tau2 by
/// exp(-dt/(kappa eps2^2)).  Density and momentum are untouched.
void relax_source_exact(SymTraceless3& tau1, double& tau2, double dt,
                        const PhysParams& p);

/// Directional quasilinear matrix M(s, dir) = sum_a dir_a dF_a/dU of the flux
/// above, flattened row-major into 100 doubles.  This is the single source of
/// truth for the Jacobian; the structure checks wrap it and verify it against
/// finite differences of `flux`.
using Mat10Flat = std::array<double, 100>;
Mat10Flat quasi_jacobian(const RelaxState& s, const Vec3& dir,
                         const PhysParams& p, bool with_coupling = true);

/// Outer bound on the largest characteristic speed at state `s`, over all
/// propagation directions.  Computed by power iteration on the squared
/// directional Jacobian along each coordinate axis and along the flow
/// direction, then widened by a fixed safety factor.  Deterministic: fixed
/// start vector, fixed iteration budget.
double max_wavespeed(const RelaxState& s, const PhysParams& p,
                     bool with_coupling = true);

/// Same bound restricted to one coordinate axis; this is what the CFL
/// condition and the interface dissipation of a dimension-split scheme need.
double max_wavespeed_axis(const RelaxState& s, int axis, const PhysParams& p,
                          bool with_coupling = true);

}  // namespace relaxflow
