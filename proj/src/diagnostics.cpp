#include "relaxflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaxflow/parallel.hpp"

namespace relaxflow {

namespace {

// Squared L2 content of one scalar field (no volume weight yet).
double sum_sq(const std::vector<double>& u) {
  std::vector<double> sq(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) sq[i] = u[i] * u[i];
  return pairwise_sum(sq);
}

// Fourth-order centered difference quotients on the periodic grid.
void first_diff(const std::vector<double>& u, const Grid& g, int axis,
                std::vector<double>& out) {
  const double w = 1.0 / (12.0 * g.dx[axis]);
  out.resize(u.size());
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double um2 = u[g.neighbor(c, axis, -2)];
    const double um1 = u[g.neighbor(c, axis, -1)];
    const double up1 = u[g.neighbor(c, axis, +1)];
    const double up2 = u[g.neighbor(c, axis, +2)];
    out[c] = (-up2 + 8.0 * up1 - 8.0 * um1 + um2) * w;
  }
}

void second_diff(const std::vector<double>& u, const Grid& g, int axis,
                 std::vector<double>& out) {
  const double w = 1.0 / (12.0 * g.dx[axis] * g.dx[axis]);
  out.resize(u.size());
  for (std::size_t c = 0; c < u.size(); ++c) {
    const double um2 = u[g.neighbor(c, axis, -2)];
    const double um1 = u[g.neighbor(c, axis, -1)];
    const double u0 = u[c];
    const double up1 = u[g.neighbor(c, axis, +1)];
    const double up2 = u[g.neighbor(c, axis, +2)];
    out[c] = (-up2 + 16.0 * up1 - 30.0 * u0 + 16.0 * um1 - um2) * w;
  }
}

double norm_sq_scalar(const std::vector<double>& u, const Grid& g, int order) {
  double acc = sum_sq(u);
  std::vector<double> d;
  if (order >= 1) {
    for (int a = 0; a < g.dim; ++a) {
      first_diff(u, g, a, d);
      acc += sum_sq(d);
    }
  }
  if (order >= 2) {
    for (int a = 0; a < g.dim; ++a) {
      second_diff(u, g, a, d);
      acc += sum_sq(d);
    }
  }
  return acc * g.cell_volume();
}

// The six scalar channels of a packed traceless tensor, weighted so the sum
// of squared channel norms reproduces the full-tensor Frobenius norm:
// xx, yy, zz once, off-diagonals twice (weight sqrt(2) on the channel).
void tau1_channels(const std::vector<SymTraceless3>& t, int channel,
                   std::vector<double>& out) {
  const double r2 = std::sqrt(2.0);
  out.resize(t.size());
  for (std::size_t c = 0; c < t.size(); ++c) {
    switch (channel) {
      case 0: out[c] = t[c].xx; break;
      case 1: out[c] = t[c].yy; break;
      case 2: out[c] = t[c].zz(); break;
      case 3: out[c] = r2 * t[c].xy; break;
      case 4: out[c] = r2 * t[c].xz; break;
      default: out[c] = r2 * t[c].yz; break;
    }
  }
}

struct ComponentErrors {
  double rho = 0.0, mom = 0.0, tau1 = 0.0, tau2 = 0.0;
  double total() const {
    return std::sqrt(rho * rho + mom * mom + tau1 * tau1 + tau2 * tau2);
  }
};

ComponentErrors component_errors(const RelaxField& a,
                                 const std::vector<NSState>& ref,
                                 const std::vector<SymTraceless3>& ref_tau1,
                                 const std::vector<double>& ref_tau2,
                                 int order) {
  const Grid& g = a.grid;
  const std::size_t n = a.cells.size();
  std::vector<double> diff(n);
  ComponentErrors e;

  for (std::size_t c = 0; c < n; ++c) diff[c] = a.cells[c].rho - ref[c].rho;
  e.rho = std::sqrt(norm_sq_scalar(diff, g, order));

  double mom_sq = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < n; ++c)
      diff[c] = a.cells[c].mom[i] - ref[c].mom[i];
    mom_sq += norm_sq_scalar(diff, g, order);
  }
  e.mom = std::sqrt(mom_sq);

  std::vector<SymTraceless3> dt1(n);
  for (std::size_t c = 0; c < n; ++c) dt1[c] = a.cells[c].tau1 - ref_tau1[c];
  double t1_sq = 0.0;
  std::vector<double> chan;
  for (int ch = 0; ch < 6; ++ch) {
    tau1_channels(dt1, ch, chan);
    t1_sq += norm_sq_scalar(chan, g, order);
  }
  e.tau1 = std::sqrt(t1_sq);

  for (std::size_t c = 0; c < n; ++c) diff[c] = a.cells[c].tau2 - ref_tau2[c];
  e.tau2 = std::sqrt(norm_sq_scalar(diff, g, order));
  return e;
}

}  // namespace

double discrete_norm(const std::vector<double>& u, const Grid& g, int order) {
  if (u.size() != g.size())
    throw std::invalid_argument("field size does not match grid");
  if (order < 0 || order > 2)
    throw std::invalid_argument("norm order must be 0, 1, or 2");
  return std::sqrt(norm_sq_scalar(u, g, order));
}

ErrorSeries error_vs_reference(const RelaxTrajectory& relax,
                               const NSTrajectory& reference, int order,
                               const PhysParams& phys) {
  if (relax.snapshots.empty() || reference.snapshots.empty())
    throw std::invalid_argument("error series needs at least one snapshot");
  if (relax.snapshots.size() != reference.snapshots.size())
    throw std::invalid_argument("snapshot schedules have different lengths");
  if (!(relax.snapshots.front().grid == reference.snapshots.front().grid))
    throw std::invalid_argument("snapshot grids differ");

  ErrorSeries series;
  std::vector<Vec3> velocity;
  std::vector<SymTraceless3> ref_tau1;
  std::vector<double> ref_tau2;
  for (std::size_t k = 0; k < relax.snapshots.size(); ++k) {
    if (std::abs(relax.snapshot_times[k] - reference.snapshot_times[k]) > 1e-12)
      throw std::invalid_argument("snapshot schedules disagree at entry " +
                                  std::to_string(k));
    const NSField& ref = reference.snapshots[k];

    // The reference flow is eps-independent; the stress closures it induces
    // are not, so they are evaluated here at the scales under comparison.
    velocity.resize(ref.cells.size());
    for (std::size_t c = 0; c < ref.cells.size(); ++c)
      velocity[c] = ref.cells[c].velocity();
    ce_closure(velocity, ref.grid, phys, ref_tau1, ref_tau2);

    const ComponentErrors e = component_errors(relax.snapshots[k], ref.cells,
                                               ref_tau1, ref_tau2, order);
    ErrorRow row;
    row.epsilon = std::max(phys.eps1, phys.eps2);
    row.time = relax.snapshot_times[k];
    row.err_rho = e.rho;
    row.err_mom = e.mom;
    row.err_tau1 = e.tau1;
    row.err_tau2 = e.tau2;
    row.err_total = e.total();
    series.sup_total = std::max(series.sup_total, row.err_total);
    series.rows.push_back(row);
  }
  return series;
}

RateFit fit_rate(const std::vector<RatePoint>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("rate fit needs at least three points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(points[i].epsilon > 0.0) || !(points[i].sup_error > 0.0))
      throw std::invalid_argument("rate fit needs positive epsilons and errors");
    for (std::size_t j = 0; j < i; ++j)
      if (points[i].epsilon == points[j].epsilon)
        throw std::invalid_argument("rate fit needs distinct epsilons");
  }

  const double n = double(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const RatePoint& p : points) {
    const double x = std::log(p.epsilon);
    const double y = std::log(p.sup_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateFit fit;
  fit.points = points;
  const double denom = n * sxx - sx * sx;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;

  double rss = 0.0;
  for (const RatePoint& p : points) {
    const double r =
        std::log(p.sup_error) - (fit.intercept + fit.slope * std::log(p.epsilon));
    rss += r * r;
  }
  fit.fit_residual = std::sqrt(rss / n);
  return fit;
}

EntropyBudget entropy_budget(const RelaxTrajectory& traj) {
  const std::size_t steps =
      traj.step_times.empty() ? 0 : traj.step_times.size() - 1;
  if (traj.entropy_history.size() != steps + 1 ||
      traj.dissipation_history.size() != steps + 1)
    throw std::invalid_argument("trajectory histories are inconsistent");

  EntropyBudget b;
  b.residuals.reserve(steps);
  b.monotone = true;
  b.max_increase = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < steps; ++n) {
    const double dt = traj.step_times[n + 1] - traj.step_times[n];
    const double dH = traj.entropy_history[n + 1] - traj.entropy_history[n];
    const double diss =
        0.5 * (traj.dissipation_history[n] + traj.dissipation_history[n + 1]);
    b.residuals.push_back(dH / dt - diss);
    b.max_abs_residual = std::max(b.max_abs_residual, std::abs(b.residuals.back()));
    b.max_increase = std::max(b.max_increase, dH);
    if (dH > 0.0) b.monotone = false;
  }
  if (steps == 0) b.max_increase = 0.0;
  return b;
}

namespace {

Grid coarse_grid(const Grid& fine) {
  std::array<int, 3> cells = fine.cells;
  for (int a = 0; a < fine.dim; ++a) {
    if (cells[a] % 2 != 0)
      throw std::invalid_argument("restriction needs even cell counts");
    cells[a] /= 2;
  }
  return Grid(fine.dim, cells);
}

template <class Field, class Average>
Field restrict_impl(const Field& fine, Average avg) {
  Field coarse;
  coarse.grid = coarse_grid(fine.grid);
  coarse.cells.resize(coarse.grid.size());
  const Grid& cg = coarse.grid;
  const Grid& fg = fine.grid;
  for (int k = 0; k < cg.cells[2]; ++k)
    for (int j = 0; j < cg.cells[1]; ++j)
      for (int i = 0; i < cg.cells[0]; ++i) {
        std::vector<std::size_t> kids;
        const int di_max = fg.dim >= 1 ? 2 : 1;
        const int dj_max = fg.dim >= 2 ? 2 : 1;
        const int dk_max = fg.dim >= 3 ? 2 : 1;
        for (int dk = 0; dk < dk_max; ++dk)
          for (int dj = 0; dj < dj_max; ++dj)
            for (int di = 0; di < di_max; ++di)
              kids.push_back(fg.index(2 * i + di, dj_max == 2 ? 2 * j + dj : j,
                                      dk_max == 2 ? 2 * k + dk : k));
        coarse.cells[cg.index(i, j, k)] = avg(fine.cells, kids);
      }
  return coarse;
}

}  // namespace

RelaxField restrict_half(const RelaxField& fine) {
  return restrict_impl<RelaxField>(
      fine, [](const std::vector<RelaxState>& cells,
               const std::vector<std::size_t>& kids) {
        StateVec acc{};
        for (std::size_t k : kids) {
          const StateVec u = to_array(cells[k]);
          for (int i = 0; i < kNVar; ++i) acc[i] += u[i];
        }
        for (int i = 0; i < kNVar; ++i) acc[i] /= double(kids.size());
        return from_array(acc);
      });
}

NSField restrict_half(const NSField& fine) {
  return restrict_impl<NSField>(
      fine, [](const std::vector<NSState>& cells,
               const std::vector<std::size_t>& kids) {
        NSState s;
        s.rho = 0.0;
        s.mom = {0.0, 0.0, 0.0};
        for (std::size_t k : kids) {
          s.rho += cells[k].rho;
          for (int i = 0; i < 3; ++i) s.mom[i] += cells[k].mom[i];
        }
        s.rho /= double(kids.size());
        for (int i = 0; i < 3; ++i) s.mom[i] /= double(kids.size());
        return s;
      });
}

double field_distance(const RelaxField& a, const RelaxField& b, int order) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grids differ");
  std::vector<SymTraceless3> bt(b.cells.size());
  std::vector<double> b2(b.cells.size());
  std::vector<NSState> bw(b.cells.size());
  for (std::size_t c = 0; c < b.cells.size(); ++c) {
    bw[c] = {b.cells[c].rho, b.cells[c].mom};
    bt[c] = b.cells[c].tau1;
    b2[c] = b.cells[c].tau2;
  }
  return component_errors(a, bw, bt, b2, order).total();
}

double field_distance(const NSField& a, const NSField& b, int order) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grids differ");
  const Grid& g = a.grid;
  std::vector<double> diff(a.cells.size());
  double acc = 0.0;
  for (std::size_t c = 0; c < a.cells.size(); ++c)
    diff[c] = a.cells[c].rho - b.cells[c].rho;
  acc += norm_sq_scalar(diff, g, order);
  for (int i = 0; i < 3; ++i) {
    for (std::size_t c = 0; c < a.cells.size(); ++c)
      diff[c] = a.cells[c].mom[i] - b.cells[c].mom[i];
    acc += norm_sq_scalar(diff, g, order);
  }
  return std::sqrt(acc);
}

}  // namespace relaxflow
