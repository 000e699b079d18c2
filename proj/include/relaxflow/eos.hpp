#pragma once

#include "relaxflow/core.hpp"

namespace relaxflow {

/// p(rho) = A rho^gamma.
double pressure(double rho, const PhysParams& p);

/// p'(rho) = A gamma rho^(gamma-1); the squared sound speed.
double pressure_deriv(double rho, const PhysParams& p);

/// Pressure potential Phi(rho) = rho * integral_1^rho p(z)/z^2 dz.
/// For the power law this is A (rho^gamma - rho) / (gamma - 1).  It satisfies
/// rho Phi' - Phi = p and Phi'' = p'/rho, which is what the entropy identities
/// below rely on.
double phi(double rho, const PhysParams& p);

/// Entropy density 4 Phi + 2 rho |v|^2 + 2 tau2^2 + |tau1|^2, split by term.
struct EntropyBreakdown {
  double pressure_part = 0.0;  // 4 Phi(rho)
  double kinetic_part = 0.0;   // 2 rho |v|^2
  double tau2_part = 0.0;      // 2 tau2^2
  double tau1_part = 0.0;      // |tau1|^2 (Frobenius)
  double total = 0.0;
};

EntropyBreakdown entropy(const RelaxState& s, const PhysParams& p);

/// Entropy flux (4 Phi + 2 rho |v|^2 + 4 p) v + (4 tau2 / eps2) v
/// + (4 / eps1) tau1 v.  Together with `entropy` and `dissipation_rate` this
/// closes the pointwise entropy balance of the smooth system.
Vec3 entropy_flux(const RelaxState& s, const PhysParams& p);

/// Pointwise entropy production; never positive:
/// -4 tau2^2 / (kappa eps2^2) - 2 |tau1|^2 / (nu eps1^2).
double dissipation_rate(const RelaxState& s, const PhysParams& p);

}  // namespace relaxflow
