#include "relaxflow/ns_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "relaxflow/eos.hpp"
#include "relaxflow/parallel.hpp"

namespace relaxflow {

namespace {

double minmod(double a, double b) {
  if (a * b <= 0.0) return 0.0;
  return std::abs(a) < std::abs(b) ? a : b;
}

std::array<double, 4> euler_flux(const NSState& s, int axis,
                                 const PhysParams& p) {
  const Vec3 v = s.velocity();
  const double pr = pressure(s.rho, p);
  std::array<double, 4> f;
  f[0] = s.mom[axis];
  for (int i = 0; i < 3; ++i)
    f[1 + i] = s.mom[i] * v[axis] + (i == axis ? pr : 0.0);
  return f;
}

}  // namespace

void ce_closure(const std::vector<Vec3>& velocity, const Grid& grid,
                const PhysParams& p, std::vector<SymTraceless3>& tau1,
                std::vector<double>& tau2) {
  const std::size_t n = grid.size();
  if (velocity.size() != n)
    throw std::invalid_argument("velocity field does not match grid");
  tau1.assign(n, SymTraceless3{});
  tau2.assign(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    Mat3 g{};  // g[a][b] = dv_a/dx_b, centered
    for (int b = 0; b < grid.dim; ++b) {
      const std::size_t cp = grid.neighbor(c, b, +1);
      const std::size_t cm = grid.neighbor(c, b, -1);
      const double inv2dx = 0.5 / grid.dx[b];
      for (int a = 0; a < 3; ++a)
        g[a][b] = (velocity[cp][a] - velocity[cm][a]) * inv2dx;
    }
    SymTraceless3 d = dev_sym(g);
    d *= -p.nu * p.eps1;
    tau1[c] = d;
    tau2[c] = -p.kappa * p.eps2 * (g[0][0] + g[1][1] + g[2][2]);
  }
}

void attach_ce(NSField& f, const PhysParams& p) {
  std::vector<Vec3> v(f.cells.size());
  for (std::size_t c = 0; c < v.size(); ++c) v[c] = f.cells[c].velocity();
  ce_closure(v, f.grid, p, f.tau1_ce, f.tau2_ce);
}

NSSolver::NSSolver(Grid grid, PhysParams phys, NSConfig cfg)
    : grid_(grid), phys_(phys), cfg_(std::move(cfg)) {
  if (!phys_.valid()) throw std::invalid_argument("invalid physical parameters");
  if (!(cfg_.cfl > 0.0 && cfg_.cfl < 1.0))
    throw std::invalid_argument("cfl must lie in (0, 1)");
  if (!(cfg_.visc_safety > 0.0 && cfg_.visc_safety <= 1.0))
    throw std::invalid_argument("visc_safety must lie in (0, 1]");
  if (!(cfg_.t_end >= 0.0)) throw std::invalid_argument("t_end must be >= 0");
  if (!(cfg_.density_floor > 0.0))
    throw std::invalid_argument("density floor must be positive");
  const auto& ts = cfg_.snapshot_times;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 0.0 || ts[i] > cfg_.t_end)
      throw std::invalid_argument("snapshot time outside [0, t_end]");
    if (i > 0 && ts[i] <= ts[i - 1])
      throw std::invalid_argument("snapshot times must be strictly increasing");
  }
}

void NSSolver::speeds_pass(const NSField& f, SpeedTable& speeds) const {
  const std::size_t n = grid_.size();
  for (int a = 0; a < grid_.dim; ++a) speeds[a].resize(n);
  parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      const NSState& s = f.cells[c];
      const double snd = std::sqrt(pressure_deriv(s.rho, phys_));
      const Vec3 v = s.velocity();
      for (int a = 0; a < grid_.dim; ++a)
        speeds[a][c] = std::abs(v[a]) + snd;
    }
  });
}

void NSSolver::rhs_with_speeds(const NSField& f, const SpeedTable& speeds,
                               std::vector<Vec4>& out) const {
  const std::size_t n = grid_.size();
  out.assign(n, Vec4{});

  std::vector<Vec4> slope(n);
  std::vector<Vec4> fhat(n);
  std::vector<Vec3> vel(n);
  parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) vel[c] = f.cells[c].velocity();
  });

  auto pack = [](const NSState& s) {
    return Vec4{s.rho, s.mom[0], s.mom[1], s.mom[2]};
  };

  const Reconstruction recon = cfg_.reconstruction;
  for (int axis = 0; axis < grid_.dim; ++axis) {
    parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        if (recon == Reconstruction::FirstOrder) {
          slope[c] = Vec4{};
          continue;
        }
        const Vec4 uc = pack(f.cells[c]);
        const Vec4 ul = pack(f.cells[grid_.neighbor(c, axis, -1)]);
        const Vec4 ur = pack(f.cells[grid_.neighbor(c, axis, +1)]);
        for (int k = 0; k < 4; ++k)
          slope[c][k] = recon == Reconstruction::MusclCentral
                            ? 0.5 * (ur[k] - ul[k])
                            : minmod(uc[k] - ul[k], ur[k] - uc[k]);
      }
    });

    parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        const std::size_t r = grid_.neighbor(c, axis, +1);
        Vec4 uL = pack(f.cells[c]);
        Vec4 uR = pack(f.cells[r]);
        for (int k = 0; k < 4; ++k) {
          uL[k] += 0.5 * slope[c][k];
          uR[k] -= 0.5 * slope[r][k];
        }
        uL[0] = std::max(uL[0], cfg_.density_floor);
        uR[0] = std::max(uR[0], cfg_.density_floor);
        const NSState sL{uL[0], {uL[1], uL[2], uL[3]}};
        const NSState sR{uR[0], {uR[1], uR[2], uR[3]}};
        const Vec4 fL = euler_flux(sL, axis, phys_);
        const Vec4 fR = euler_flux(sR, axis, phys_);
        const double lam = std::max(speeds[axis][c], speeds[axis][r]);
        Vec4 conv;
        for (int k = 0; k < 4; ++k)
          conv[k] = 0.5 * (fL[k] + fR[k]) - 0.5 * lam * (uR[k] - uL[k]);

        // Viscous flux through the same interface.  The normal derivative is
        // the compact two-point difference; transverse derivatives average
        // the centered differences of the two adjacent cells.
        Mat3 g{};
        const double inv_dx = 1.0 / grid_.dx[axis];
        for (int a = 0; a < 3; ++a)
          g[a][axis] = (vel[r][a] - vel[c][a]) * inv_dx;
        for (int b2 = 0; b2 < grid_.dim; ++b2) {
          if (b2 == axis) continue;
          const double inv2 = 0.25 / grid_.dx[b2];  // mean of two centered diffs
          const std::size_t cp = grid_.neighbor(c, b2, +1);
          const std::size_t cm = grid_.neighbor(c, b2, -1);
          const std::size_t rp = grid_.neighbor(r, b2, +1);
          const std::size_t rm = grid_.neighbor(r, b2, -1);
          for (int a = 0; a < 3; ++a)
            g[a][b2] = (vel[cp][a] - vel[cm][a] + vel[rp][a] - vel[rm][a]) * inv2;
        }
        const double div = g[0][0] + g[1][1] + g[2][2];
        SymTraceless3 d = dev_sym(g);
        for (int i = 0; i < 3; ++i)
          conv[1 + i] -= phys_.nu * d.entry(i, axis) +
                         (i == axis ? phys_.kappa * div : 0.0);
        fhat[c] = conv;
      }
    });

    const double inv_dx = 1.0 / grid_.dx[axis];
    parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
      for (std::size_t c = b; c < e; ++c) {
        const std::size_t l = grid_.neighbor(c, axis, -1);
        for (int k = 0; k < 4; ++k)
          out[c][k] -= (fhat[c][k] - fhat[l][k]) * inv_dx;
      }
    });
  }
}

std::optional<Violation> NSSolver::rhs(const NSField& f,
                                       std::vector<Vec4>& out) const {
  if (auto v = validate_field(f, cfg_.density_floor)) return v;
  SpeedTable speeds;
  speeds_pass(f, speeds);
  rhs_with_speeds(f, speeds, out);
  return std::nullopt;
}

double NSSolver::stable_dt(const NSField& f) const {
  SpeedTable speeds;
  speeds_pass(f, speeds);
  return dt_from_speeds(f, speeds);
}

double NSSolver::dt_from_speeds(const NSField& f, const SpeedTable& speeds) const {
  const std::size_t n = grid_.size();
  double worst_adv = 0.0;
  double rho_min = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (int a = 0; a < grid_.dim; ++a) s += speeds[a][c] / grid_.dx[a];
    worst_adv = std::max(worst_adv, s);
    rho_min = std::min(rho_min, f.cells[c].rho);
  }
  const double dt_adv =
      worst_adv > 0.0 ? cfg_.cfl / worst_adv : std::numeric_limits<double>::infinity();

  // Explicit diffusion limit dt <= 1 / (2 D sum_a dx_a^-2) with the largest
  // momentum diffusivity D = ((4/3) nu + kappa) / rho_min.
  const double diff = ((4.0 / 3.0) * phys_.nu + phys_.kappa) / rho_min;
  double inv_dx2 = 0.0;
  for (int a = 0; a < grid_.dim; ++a) inv_dx2 += 1.0 / (grid_.dx[a] * grid_.dx[a]);
  const double dt_visc = cfg_.visc_safety / (2.0 * diff * inv_dx2);

  const double dt = std::min(dt_adv, dt_visc);
  if (!std::isfinite(dt)) return cfg_.t_end > 0.0 ? cfg_.t_end : 1.0;
  return dt;
}

std::optional<Violation> NSSolver::rk2_step(NSField& f, double dt,
                                            const SpeedTable& speeds) const {
  const std::size_t n = grid_.size();
  std::vector<Vec4> k1, k2;
  rhs_with_speeds(f, speeds, k1);

  NSField stage = f;
  parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      stage.cells[c].rho = f.cells[c].rho + dt * k1[c][0];
      for (int i = 0; i < 3; ++i)
        stage.cells[c].mom[i] = f.cells[c].mom[i] + dt * k1[c][1 + i];
    }
  });
  if (auto v = validate_field(stage, cfg_.density_floor)) return v;

  rhs_with_speeds(stage, speeds, k2);
  parallel_for(n, cfg_.threads, 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t c = b; c < e; ++c) {
      f.cells[c].rho =
          0.5 * (f.cells[c].rho + stage.cells[c].rho + dt * k2[c][0]);
      for (int i = 0; i < 3; ++i)
        f.cells[c].mom[i] = 0.5 * (f.cells[c].mom[i] + stage.cells[c].mom[i] +
                                   dt * k2[c][1 + i]);
    }
  });
  return validate_field(f, cfg_.density_floor);
}

std::optional<Violation> NSSolver::step(NSField& f, double dt) const {
  SpeedTable speeds;
  speeds_pass(f, speeds);
  return rk2_step(f, dt, speeds);
}

NSTrajectory NSSolver::run(const NSField& init) const {
  NSTrajectory traj;
  if (!(init.grid == grid_) || init.cells.size() != grid_.size())
    throw std::invalid_argument("field does not match solver grid");

  NSField f = init;
  double t = 0.0;
  std::size_t next_snap = 0;

  auto emit_due_snapshots = [&]() {
    while (next_snap < cfg_.snapshot_times.size() &&
           cfg_.snapshot_times[next_snap] <= t + 1e-13) {
      traj.snapshot_times.push_back(cfg_.snapshot_times[next_snap]);
      NSField snap = f;
      attach_ce(snap, phys_);
      traj.snapshots.push_back(std::move(snap));
      ++next_snap;
    }
  };

  if (auto v = validate_field(f, cfg_.density_floor)) {
    traj.violation = v;
    traj.violation_time = t;
    return traj;
  }
  traj.step_times.push_back(t);
  emit_due_snapshots();

  const double t_eps = 1e-13 * std::max(1.0, cfg_.t_end);
  while (t < cfg_.t_end - t_eps) {
    SpeedTable speeds;
    speeds_pass(f, speeds);
    const double dt_cfl = dt_from_speeds(f, speeds);

    const double event = (next_snap < cfg_.snapshot_times.size())
                             ? std::min(cfg_.snapshot_times[next_snap], cfg_.t_end)
                             : cfg_.t_end;
    double dt = dt_cfl;
    bool land = false;
    if (event - t <= dt_cfl * (1.0 + 1e-9)) {
      dt = event - t;
      land = true;
    }

    if (auto v = rk2_step(f, dt, speeds)) {
      traj.violation = v;
      traj.violation_time = t;
      return traj;
    }

    t = land ? event : t + dt;
    traj.dt_history.push_back(dt);
    traj.step_times.push_back(t);
    emit_due_snapshots();
  }
  return traj;
}

}  // namespace relaxflow
