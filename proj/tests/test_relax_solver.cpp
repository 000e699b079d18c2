#include "relaxflow/relax_solver.hpp"

#include "doctest.h"

#include <cmath>

#include "relaxflow/diagnostics.hpp"
#include "relaxflow/eos.hpp"
#include "relaxflow/ns_solver.hpp"
#include "relaxflow/parallel.hpp"

using namespace relaxflow;

namespace {

PhysParams wave_params() {
  PhysParams p;
  p.eps1 = 0.1;
  p.eps2 = 0.1;
  return p;
}

// rho = 1 + amp sin(2 pi x), v = 0; the equilibrium stresses of a fluid at
// rest vanish, so this is prepared data with no initial layer.
RelaxField density_wave(const Grid& g, double amp) {
  RelaxField f = RelaxField::uniform(g);
  for (int i = 0; i < g.cells[0]; ++i) {
    const double x = g.center(i, 0, 0)[0];
    f.cells[g.index(i, 0, 0)].rho = 1.0 + amp * std::sin(2.0 * M_PI * x);
  }
  return f;
}

double total_of(const RelaxField& f, double(*pick)(const RelaxState&)) {
  std::vector<double> vals(f.cells.size());
  for (std::size_t c = 0; c < f.cells.size(); ++c) vals[c] = pick(f.cells[c]);
  return pairwise_sum(vals) * f.grid.cell_volume();
}

}  // namespace

TEST_CASE("initial entropy of the standard wave is exact") {
  // 4 Phi integrates to 4 A/(gamma-1) * (amp^2/2) for the sinusoidal wave,
  // and midpoint sums of sin and sin^2 over a uniform period are exact, so
  // the discrete total must be 0.02 to roundoff at any resolution.
  const PhysParams p = wave_params();
  for (int n : {64, 128, 257}) {
    const Grid g(1, {n, 1, 1});
    RelaxSolver solver(g, p, SolverConfig{});
    const double h = solver.total_entropy(density_wave(g, 0.1));
    CHECK(h == doctest::Approx(0.02).epsilon(1e-13));
  }
}

TEST_CASE("hyperbolic tendency vanishes on a uniform state") {
  const PhysParams p = wave_params();
  const Grid g(1, {32, 1, 1});
  RelaxState s;
  s.rho = 1.3;
  s.mom = {0.4, -0.2, 0.1};
  s.tau1 = {0.2, 0.1, -0.3, 0.05, 0.15};
  s.tau2 = -0.6;
  RelaxSolver solver(g, p, SolverConfig{});
  std::vector<StateVec> rhs;
  const auto v = solver.hyperbolic_rhs(RelaxField::uniform(g, s), rhs);
  CHECK(!v.has_value());
  for (const StateVec& r : rhs)
    for (double x : r) CHECK(std::abs(x) <= 1e-12);
}

TEST_CASE("stable step scales with resolution and relaxation stiffness") {
  const PhysParams p = wave_params();
  const Grid g64(1, {64, 1, 1});
  const Grid g128(1, {128, 1, 1});
  RelaxSolver a(g64, p, SolverConfig{});
  RelaxSolver b(g128, p, SolverConfig{});
  const RelaxField f64 = density_wave(g64, 0.1);
  const RelaxField f128 = density_wave(g128, 0.1);
  const double dt64 = a.stable_dt(f64);
  const double dt128 = b.stable_dt(f128);
  CHECK(dt64 > 0.0);
  CHECK(dt128 == doctest::Approx(0.5 * dt64).epsilon(0.05));

  PhysParams stiff = p;
  stiff.eps1 = 0.05;
  stiff.eps2 = 0.05;
  RelaxSolver c(g64, stiff, SolverConfig{});
  // Wavespeeds scale like 1/eps, so halving eps roughly halves the step.
  CHECK(c.stable_dt(f64) == doctest::Approx(0.5 * dt64).epsilon(0.1));
}

TEST_CASE("short run conserves mass and momentum to roundoff") {
  const PhysParams p = wave_params();
  const Grid g(1, {64, 1, 1});
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.snapshot_times = {0.0, 0.05};
  RelaxSolver solver(g, p, cfg);
  const RelaxTrajectory traj = solver.run(density_wave(g, 0.1));
  REQUIRE(traj.ok());
  REQUIRE(traj.snapshots.size() == 2);

  const auto mass = [](const RelaxState& s) { return s.rho; };
  const auto momx = [](const RelaxState& s) { return s.mom[0]; };
  const double m0 = total_of(traj.snapshots.front(), mass);
  const double m1 = total_of(traj.snapshots.back(), mass);
  CHECK(std::abs(m1 - m0) <= 1e-12 * std::abs(m0));
  const double px0 = total_of(traj.snapshots.front(), momx);
  const double px1 = total_of(traj.snapshots.back(), momx);
  CHECK(std::abs(px1 - px0) <= 1e-12);  // starts at zero and stays there
}

TEST_CASE("entropy decreases step by step and dissipation is nonpositive") {
  const PhysParams p = wave_params();
  const Grid g(1, {64, 1, 1});
  SolverConfig cfg;
  cfg.t_end = 0.05;
  cfg.snapshot_times = {0.0, 0.05};
  RelaxSolver solver(g, p, cfg);
  const RelaxTrajectory traj = solver.run(density_wave(g, 0.1));
  REQUIRE(traj.ok());
  REQUIRE(traj.entropy_history.size() == traj.dt_history.size() + 1);
  for (std::size_t k = 0; k + 1 < traj.entropy_history.size(); ++k)
    CHECK(traj.entropy_history[k + 1] <= traj.entropy_history[k] + 1e-15);
  for (double d : traj.dissipation_history) CHECK(d <= 0.0);
  // The wave starts at rest: no stress yet, so no dissipation either.
  CHECK(traj.dissipation_history.front() == 0.0);
}

TEST_CASE("stepper lands snapshots exactly on the requested times") {
  const PhysParams p = wave_params();
  const Grid g(1, {32, 1, 1});
  SolverConfig cfg;
  cfg.t_end = 0.03;
  cfg.snapshot_times = {0.0, 0.007, 0.0131, 0.03};
  RelaxSolver solver(g, p, cfg);
  const RelaxTrajectory traj = solver.run(density_wave(g, 0.05));
  REQUIRE(traj.ok());
  REQUIRE(traj.snapshot_times.size() == 4);
  for (std::size_t k = 0; k < 4; ++k)
    CHECK(traj.snapshot_times[k] == doctest::Approx(cfg.snapshot_times[k]).epsilon(1e-14));
  CHECK(traj.step_times.back() == doctest::Approx(0.03).epsilon(1e-14));
}

TEST_CASE("snapshot schedule validation rejects junk") {
  const PhysParams p = wave_params();
  const Grid g(1, {32, 1, 1});
  SolverConfig cfg;
  cfg.t_end = 0.1;
  cfg.snapshot_times = {0.0, 0.2};  // beyond t_end
  CHECK_THROWS_AS(RelaxSolver(g, p, cfg), std::invalid_argument);
  cfg.snapshot_times = {0.05, 0.05};
  CHECK_THROWS_AS(RelaxSolver(g, p, cfg), std::invalid_argument);
  cfg.snapshot_times = {0.05, 0.01};
  CHECK_THROWS_AS(RelaxSolver(g, p, cfg), std::invalid_argument);
}

TEST_CASE("run aborts with a located violation on inadmissible data") {
  const PhysParams p = wave_params();
  const Grid g(1, {32, 1, 1});
  SolverConfig cfg;
  cfg.t_end = 0.01;
  cfg.snapshot_times = {0.0, 0.01};
  RelaxField f = density_wave(g, 0.05);
  f.cells[7].rho = -0.3;
  RelaxSolver solver(g, p, cfg);
  const RelaxTrajectory traj = solver.run(f);
  CHECK(!traj.ok());
  CHECK(traj.violation->cell == 7);
}

TEST_CASE("source hook freezes the stresses of a fluid at rest") {
  const PhysParams p = wave_params();
  const Grid g(1, {32, 1, 1});
  RelaxState s;  // uniform, at rest, stressed
  s.tau1 = {0.3, -0.1, 0.2, 0.0, 0.1};
  s.tau2 = 0.5;

  SolverConfig cfg;
  RelaxSolver solver(g, p, cfg);
  RelaxField f = RelaxField::uniform(g, s);
  REQUIRE(!solver.step(f, 1e-3).has_value());
  // Uniform at rest: the flux part is inert, so only the source acts.
  const double decay = std::exp(-1e-3 / (p.kappa * p.eps2 * p.eps2));
  CHECK(f.cells[3].tau2 == doctest::Approx(0.5 * decay).epsilon(1e-12));

  cfg.disable_source = true;
  RelaxSolver frozen(g, p, cfg);
  RelaxField f2 = RelaxField::uniform(g, s);
  REQUIRE(!frozen.step(f2, 1e-3).has_value());
  CHECK(f2.cells[3].tau2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f2.cells[3].tau1.xx == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("trajectories are identical across thread counts") {
  const PhysParams p = wave_params();
  const Grid g(1, {64, 1, 1});
  SolverConfig cfg;
  cfg.t_end = 0.02;
  cfg.snapshot_times = {0.0, 0.02};

  cfg.threads = 1;
  const RelaxTrajectory one = RelaxSolver(g, p, cfg).run(density_wave(g, 0.1));
  cfg.threads = 3;
  const RelaxTrajectory three =
      RelaxSolver(g, p, cfg).run(density_wave(g, 0.1));
  REQUIRE(one.ok());
  REQUIRE(three.ok());
  REQUIRE(one.dt_history.size() == three.dt_history.size());
  CHECK(field_distance(one.snapshots.back(), three.snapshots.back(), 0) == 0.0);
  CHECK(one.entropy_history.back() == three.entropy_history.back());
}

TEST_CASE("two dimensional wave runs and dissipates entropy") {
  const PhysParams p = wave_params();
  const Grid g(2, {24, 24, 1});
  RelaxField f = RelaxField::uniform(g);
  for (int j = 0; j < 24; ++j)
    for (int i = 0; i < 24; ++i) {
      const Vec3 x = g.center(i, j, 0);
      f.cells[g.index(i, j, 0)].rho =
          1.0 + 0.05 * std::sin(2.0 * M_PI * x[0]) *
                    std::cos(2.0 * M_PI * x[1]);
    }
  SolverConfig cfg;
  cfg.t_end = 0.01;
  cfg.snapshot_times = {0.0, 0.01};
  RelaxSolver solver(g, p, cfg);
  const RelaxTrajectory traj = solver.run(f);
  REQUIRE(traj.ok());
  CHECK(traj.entropy_history.back() < traj.entropy_history.front());

  const auto mass = [](const RelaxState& s) { return s.rho; };
  CHECK(total_of(traj.snapshots.back(), mass) ==
        doctest::Approx(total_of(traj.snapshots.front(), mass)).epsilon(1e-13));
}
