#include "relaxflow/eos.hpp"

namespace relaxflow {

double pressure(double rho, const PhysParams& p) {
  return p.eos_A * std::pow(rho, p.eos_gamma);
}

double pressure_deriv(double rho, const PhysParams& p) {
  return p.eos_A * p.eos_gamma * std::pow(rho, p.eos_gamma - 1.0);
}

double phi(double rho, const PhysParams& p) {
  return p.eos_A * (std::pow(rho, p.eos_gamma) - rho) / (p.eos_gamma - 1.0);
}

EntropyBreakdown entropy(const RelaxState& s, const PhysParams& p) {
  EntropyBreakdown e;
  e.pressure_part = 4.0 * phi(s.rho, p);
  e.kinetic_part = 2.0 * norm_sq(s.mom) / s.rho;  // 2 rho |v|^2
  e.tau2_part = 2.0 * s.tau2 * s.tau2;
  e.tau1_part = s.tau1.frobenius_sq();
  e.total = e.pressure_part + e.kinetic_part + e.tau2_part + e.tau1_part;
  return e;
}

Vec3 entropy_flux(const RelaxState& s, const PhysParams& p) {
  const Vec3 v = s.velocity();
  const double scalar = 4.0 * phi(s.rho, p) + 2.0 * s.rho * norm_sq(v) +
                        4.0 * pressure(s.rho, p) + 4.0 * s.tau2 / p.eps2;
  const Vec3 tv = s.tau1.apply(v);
  return {scalar * v[0] + 4.0 * tv[0] / p.eps1,
          scalar * v[1] + 4.0 * tv[1] / p.eps1,
          scalar * v[2] + 4.0 * tv[2] / p.eps1};
}

double dissipation_rate(const RelaxState& s, const PhysParams& p) {
  return -4.0 * s.tau2 * s.tau2 / (p.kappa * p.eps2 * p.eps2) -
         2.0 * s.tau1.frobenius_sq() / (p.nu * p.eps1 * p.eps1);
}

}  // namespace relaxflow
