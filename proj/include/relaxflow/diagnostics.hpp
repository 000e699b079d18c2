#pragma once

#include "relaxflow/ns_solver.hpp"
#include "relaxflow/relax_solver.hpp"

namespace relaxflow {

/// Discrete Sobolev-type norm of a scalar cell field on a periodic grid.
/// Order 0 is the plain L2 norm (cell sum weighted by volume); orders 1 and 2
/// add centered difference quotients for first (and second) derivatives along
/// every active axis.  The difference stencils are fourth-order accurate so
/// the norm of a resolved mode matches its continuum value tightly.
double discrete_norm(const std::vector<double>& u, const Grid& g, int order);

struct ErrorRow {
  double epsilon = 0.0;
  double time = 0.0;
  double err_rho = 0.0;
  double err_mom = 0.0;
  double err_tau1 = 0.0;
  double err_tau2 = 0.0;
  double err_total = 0.0;  // root sum of squares of the four parts
};

struct ErrorSeries {
  std::vector<ErrorRow> rows;   // one per shared snapshot time
  double sup_total = 0.0;       // max err_total over the schedule
};

/// Snapshot-by-snapshot distance between a relaxation run and the reference
/// run, comparing density, momentum, and the stresses against the closure
/// stresses of the reference velocity field.  The closures are evaluated at
/// the relaxation scales in `phys` (the reference flow itself does not depend
/// on them), so one reference trajectory serves runs at any eps1/eps2.  Grids
/// and snapshot schedules must match exactly; mismatches throw
/// std::invalid_argument.
ErrorSeries error_vs_reference(const RelaxTrajectory& relax,
                               const NSTrajectory& reference, int order,
                               const PhysParams& phys);

struct RatePoint {
  double epsilon = 0.0;
  double sup_error = 0.0;
};

struct RateFit {
  std::vector<RatePoint> points;
  double slope = 0.0;      // d log(err) / d log(eps)
  double intercept = 0.0;  // log(err) at log(eps) = 0
  double fit_residual = 0.0;  // rms residual of the fit in log space
};

/// Least-squares power-law fit err ~ C eps^slope in log-log space.
/// Needs at least three points with distinct positive epsilons and positive
/// errors; anything else throws std::invalid_argument.
RateFit fit_rate(const std::vector<RatePoint>& points);

struct EntropyBudget {
  std::vector<double> residuals;  // per step: dH/dt minus integrated dissipation
  double max_abs_residual = 0.0;
  double max_increase = 0.0;  // largest per-step entropy gain (<= 0 when monotone)
  bool monotone = false;      // entropy non-increasing across every step
};

/// Discrete entropy balance of a completed run: for each step, the rate of
/// change of total entropy minus the trapezoidal average of the recorded
/// dissipation.  The residual collects splitting and scheme dissipation and
/// must shrink under grid refinement.
EntropyBudget entropy_budget(const RelaxTrajectory& traj);

/// Average fields down one refinement level (factor two per active axis).
/// Cell counts along active axes must be even.
RelaxField restrict_half(const RelaxField& fine);
NSField restrict_half(const NSField& fine);

/// Norm of the componentwise difference of two fields on the same grid,
/// using the same component weighting as `error_vs_reference`.
double field_distance(const RelaxField& a, const RelaxField& b, int order);
double field_distance(const NSField& a, const NSField& b, int order);

}  // namespace relaxflow
