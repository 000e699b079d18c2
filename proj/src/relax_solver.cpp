#include "relaxflow/relax_solver.hpp"

#include <algorithm>
#include <cmath>

#include "relaxflow/eos.hpp"
#include "relaxflow/parallel.hpp"

namespace relaxflow {

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

void validate_config(const Grid& grid, const PhysParams& phys,
                     const SolverConfig& cfg) {
  if (!phys.valid()) throw std::invalid_argument("invalid physical parameters");
  if (!(cfg.cfl > 0.0 && cfg.cfl < 1.0))
    throw std::invalid_argument("cfl must lie in (0, 1)");
  if (!(cfg.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  if (!(cfg.density_floor > 0.0))
    throw std::invalid_argument("density floor must be positive");
  const auto& ts = cfg.snapshot_times;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 0.0 || ts[i] > cfg.t_end)
      throw std::invalid_argument("snapshot time outside [0, t_end]");
    if (i > 0 && ts[i] <= ts[i - 1])
      throw std::invalid_argument("snapshot times must be strictly increasing");
  }
  (void)grid;
}

}  // namespace

RelaxSolver::RelaxSolver(Grid grid, PhysParams phys, SolverConfig cfg)
    : grid_(grid), phys_(phys), cfg_(std::move(cfg)) {
  validate_config(grid_, phys_, cfg_);
}

void RelaxSolver::wavespeed_pass(const RelaxField& f, SpeedTable& speeds) const {
  const std::size_t n = grid_.size();
  for (int a = 0; a < grid_.dim; ++a) speeds[a].resize(n);
  parallel_for(n, cfg_.threads, 32, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c)
      for (int a = 0; a < grid_.dim; ++a)
        speeds[a][c] =
            max_wavespeed_axis(f.cells[c], a, phys_, !cfg_.disable_coupling);
  });
}

double RelaxSolver::dt_from_speeds(const SpeedTable& speeds) const {
  const std::size_t n = grid_.size();
  double worst = 0.0;  // max over cells of sum_axes speed/dx
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (int a = 0; a < grid_.dim; ++a) s += speeds[a][c] / grid_.dx[a];
    worst = std::max(worst, s);
  }
  if (worst <= 0.0) return cfg_.t_end > 0.0 ? cfg_.t_end : 1.0;
  return cfg_.cfl / worst;
}

double RelaxSolver::stable_dt(const RelaxField& f) const {
  SpeedTable speeds;
  wavespeed_pass(f, speeds);
  return dt_from_speeds(speeds);
}

void RelaxSolver::rhs_with_speeds(const RelaxField& f, const SpeedTable& speeds,
                                  std::vector<StateVec>& out) const {
  const std::size_t n = grid_.size();
  out.assign(n, StateVec{});
  const bool coupled = !cfg_.disable_coupling;

  std::vector<StateVec> slope(n);
  std::vector<StateVec> fhat(n);  // flux through the interface right of each cell

  const Reconstruction recon = cfg_.reconstruction;
  for (int axis = 0; axis < grid_.dim; ++axis) {
    parallel_for(n, cfg_.threads, 512, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        if (recon == Reconstruction::FirstOrder) {
          slope[c] = StateVec{};
          continue;
        }
        const StateVec uc = to_array(f.cells[c]);
        const StateVec ul = to_array(f.cells[grid_.neighbor(c, axis, -1)]);
        const StateVec ur = to_array(f.cells[grid_.neighbor(c, axis, +1)]);
        for (int k = 0; k < kNVar; ++k)
          slope[c][k] = recon == Reconstruction::MusclCentral
                            ? 0.5 * (ur[k] - ul[k])
                            : minmod(uc[k] - ul[k], ur[k] - uc[k]);
      }
    });

    parallel_for(n, cfg_.threads, 256, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        const std::size_t r = grid_.neighbor(c, axis, +1);
        StateVec uL = to_array(f.cells[c]);
        StateVec uR = to_array(f.cells[r]);
        for (int k = 0; k < kNVar; ++k) {
          uL[k] += 0.5 * slope[c][k];
          uR[k] -= 0.5 * slope[r][k];
        }
        // Central slopes can overshoot.  Clamping the face density keeps the
        // flux finite; admissibility proper is enforced on the cell averages
        // after every stage.
        uL[kIR] = std::max(uL[kIR], cfg_.density_floor);
        uR[kIR] = std::max(uR[kIR], cfg_.density_floor);
        const StateVec fL = flux(from_array(uL), axis, phys_, coupled);
        const StateVec fR = flux(from_array(uR), axis, phys_, coupled);
        const double lam = std::max(speeds[axis][c], speeds[axis][r]);
        for (int k = 0; k < kNVar; ++k)
          fhat[c][k] = 0.5 * (fL[k] + fR[k]) - 0.5 * lam * (uR[k] - uL[k]);
      }
    });

    const double inv_dx = 1.0 / grid_.dx[axis];
    parallel_for(n, cfg_.threads, 512, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        const std::size_t l = grid_.neighbor(c, axis, -1);
        for (int k = 0; k < kNVar; ++k)
          out[c][k] -= (fhat[c][k] - fhat[l][k]) * inv_dx;
      }
    });
  }
}

std::optional<Violation> RelaxSolver::hyperbolic_rhs(
    const RelaxField& f, std::vector<StateVec>& out) const {
  if (auto v = validate_field(f, cfg_.density_floor)) return v;
  SpeedTable speeds;
  wavespeed_pass(f, speeds);
  rhs_with_speeds(f, speeds, out);
  return std::nullopt;
}

std::optional<Violation> RelaxSolver::hyperbolic_step(
    RelaxField& f, double dt, const SpeedTable& speeds) const {
  const std::size_t n = grid_.size();
  std::vector<StateVec> k1, k2;
  rhs_with_speeds(f, speeds, k1);

  RelaxField stage = f;
  parallel_for(n, cfg_.threads, 2048, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      StateVec u = to_array(f.cells[c]);
      for (int k = 0; k < kNVar; ++k) u[k] += dt * k1[c][k];
      stage.cells[c] = from_array(u);
    }
  });
  if (auto v = validate_field(stage, cfg_.density_floor)) return v;

  // Wavespeed bounds are frozen over the step; the safety factor in the
  // bound covers the stage-to-stage drift.
  rhs_with_speeds(stage, speeds, k2);
  parallel_for(n, cfg_.threads, 2048, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const StateVec u0 = to_array(f.cells[c]);
      const StateVec u1 = to_array(stage.cells[c]);
      StateVec u;
      for (int k = 0; k < kNVar; ++k)
        u[k] = 0.5 * (u0[k] + u1[k] + dt * k2[c][k]);
      f.cells[c] = from_array(u);
    }
  });
  return validate_field(f, cfg_.density_floor);
}

void RelaxSolver::source_step(RelaxField& f, double dt) const {
  if (cfg_.disable_source || dt == 0.0) return;
  parallel_for(f.cells.size(), cfg_.threads, 2048, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c)
      relax_source_exact(f.cells[c].tau1, f.cells[c].tau2, dt, phys_);
  });
}

std::optional<Violation> RelaxSolver::step(RelaxField& f, double dt) const {
  SpeedTable speeds;
  wavespeed_pass(f, speeds);
  source_step(f, 0.5 * dt);
  if (auto v = hyperbolic_step(f, dt, speeds)) return v;
  source_step(f, 0.5 * dt);
  return std::nullopt;
}

double RelaxSolver::total_entropy(const RelaxField& f) const {
  std::vector<double> cell(f.cells.size());
  parallel_for(f.cells.size(), cfg_.threads, 1024, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c)
      cell[c] = entropy(f.cells[c], phys_).total;
  });
  return pairwise_sum(cell) * grid_.cell_volume();
}

double RelaxSolver::total_dissipation(const RelaxField& f) const {
  std::vector<double> cell(f.cells.size());
  parallel_for(f.cells.size(), cfg_.threads, 1024, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c)
      cell[c] = dissipation_rate(f.cells[c], phys_);
  });
  return pairwise_sum(cell) * grid_.cell_volume();
}

RelaxTrajectory RelaxSolver::run(const RelaxField& init) const {
  RelaxTrajectory traj;
  if (!(init.grid == grid_) || init.cells.size() != grid_.size())
    throw std::invalid_argument("field does not match solver grid");

  RelaxField f = init;
  double t = 0.0;
  std::size_t next_snap = 0;

  auto record = [&]() {
    traj.step_times.push_back(t);
    traj.entropy_history.push_back(total_entropy(f));
    traj.dissipation_history.push_back(total_dissipation(f));
  };
  auto emit_due_snapshots = [&]() {
    while (next_snap < cfg_.snapshot_times.size() &&
           cfg_.snapshot_times[next_snap] <= t + 1e-13) {
      traj.snapshot_times.push_back(cfg_.snapshot_times[next_snap]);
      traj.snapshots.push_back(f);
      ++next_snap;
    }
  };

  if (auto v = validate_field(f, cfg_.density_floor)) {
    traj.violation = v;
    traj.violation_time = t;
    return traj;
  }
  record();
  emit_due_snapshots();

  const double t_eps = 1e-13 * std::max(1.0, cfg_.t_end);
  while (t < cfg_.t_end - t_eps) {
    SpeedTable speeds;
    wavespeed_pass(f, speeds);
    const double dt_cfl = dt_from_speeds(speeds);

    // Land exactly on the next snapshot time (or the final time).
    const double event = (next_snap < cfg_.snapshot_times.size())
                             ? std::min(cfg_.snapshot_times[next_snap], cfg_.t_end)
                             : cfg_.t_end;
    double dt = dt_cfl;
    bool land = false;
    if (event - t <= dt_cfl * (1.0 + 1e-9)) {
      dt = event - t;
      land = true;
    }

    source_step(f, 0.5 * dt);
    if (auto v = hyperbolic_step(f, dt, speeds)) {
      traj.violation = v;
      traj.violation_time = t;
      return traj;
    }
    source_step(f, 0.5 * dt);

    t = land ? event : t + dt;
    traj.dt_history.push_back(dt);
    record();
    emit_due_snapshots();
  }
  return traj;
}

}  // namespace relaxflow
