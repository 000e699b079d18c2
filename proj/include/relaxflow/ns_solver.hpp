#pragma once

#include <optional>

#include "relaxflow/relax_solver.hpp"

namespace relaxflow {

/// First-order stress closures evaluated from a velocity field by centered
/// differences: tau1 = -nu eps1 (grad v + grad v^T - (2/3) div v I) and
/// tau2 = -kappa eps2 div v.  These are the equilibrium stresses the
/// relaxation system settles onto; attaching them to a reference flow makes
/// the two solvers directly comparable, and evaluating them on an initial
/// velocity field prepares relaxation data without an initial layer.
void ce_closure(const std::vector<Vec3>& velocity, const Grid& grid,
                const PhysParams& p, std::vector<SymTraceless3>& tau1,
                std::vector<double>& tau2);

/// Attach closure stresses to a flow field (velocity taken from m / rho).
void attach_ce(NSField& f, const PhysParams& p);

struct NSConfig {
  double cfl = 0.45;          // advective CFL number
  double visc_safety = 0.8;   // fraction of the explicit diffusion limit
  Reconstruction reconstruction = Reconstruction::MusclCentral;
  double t_end = 0.2;
  std::vector<double> snapshot_times = {0.0, 0.2};
  double density_floor = 1e-8;
  int threads = 1;
};

struct NSTrajectory {
  std::vector<double> snapshot_times;
  std::vector<NSField> snapshots;  // closure stresses attached
  std::vector<double> step_times;
  std::vector<double> dt_history;
  std::optional<Violation> violation;
  double violation_time = 0.0;

  bool ok() const { return !violation.has_value(); }
};

/// Reference solver for the isentropic viscous fluid: the same convective
/// reconstruction and interface flux as the relaxation scheme, plus an
/// explicit compact-stencil viscous term in divergence form.  Its
/// trajectories do not depend on eps1/eps2, so one reference run serves a
/// whole relaxation sweep.
class NSSolver {
 public:
  NSSolver(Grid grid, PhysParams phys, NSConfig cfg);

  std::optional<Violation> rhs(const NSField& f,
                               std::vector<std::array<double, 4>>& out) const;

  /// min(advective CFL step, explicit diffusion limit).
  double stable_dt(const NSField& f) const;

  std::optional<Violation> step(NSField& f, double dt) const;

  NSTrajectory run(const NSField& init) const;

  const Grid& grid() const { return grid_; }
  const PhysParams& phys() const { return phys_; }
  const NSConfig& config() const { return cfg_; }

 private:
  using Vec4 = std::array<double, 4>;
  using SpeedTable = std::array<std::vector<double>, 3>;

  void speeds_pass(const NSField& f, SpeedTable& speeds) const;
  double dt_from_speeds(const NSField& f, const SpeedTable& speeds) const;
  void rhs_with_speeds(const NSField& f, const SpeedTable& speeds,
                       std::vector<Vec4>& out) const;
  std::optional<Violation> rk2_step(NSField& f, double dt,
                                    const SpeedTable& speeds) const;

  Grid grid_;
  PhysParams phys_;
  NSConfig cfg_;
};

}  // namespace relaxflow
