#include "relaxflow/cli.hpp"

#include "doctest.h"

#include <cmath>

using namespace relaxflow;

namespace {

ExperimentConfig must_parse(const std::string& text) {
  const ParseResult res = parse_config(text);
  REQUIRE_MESSAGE(res.config.has_value(), res.error);
  return *res.config;
}

std::string must_fail(const std::string& text) {
  const ParseResult res = parse_config(text);
  REQUIRE_FALSE(res.config.has_value());
  return res.error;
}

}  // namespace

TEST_CASE("empty config yields the defaults") {
  const ParseResult res = parse_config("");
  REQUIRE(res.config.has_value());
  CHECK(res.warnings.empty());
  const ExperimentConfig& c = *res.config;
  CHECK(c.dim == 1);
  CHECK(c.cells == std::array<int, 3>{512, 1, 1});
  CHECK(c.eps_list == std::vector<double>{0.1, 0.05, 0.025, 0.0125});
  CHECK(c.reconstruction == "muscl-central");
  CHECK(c.t_end == 0.2);
  CHECK(c.cfl == 0.45);
  CHECK(c.threads == 1);
  CHECK_FALSE(c.hook_disable_source);
}

TEST_CASE("keys round trip into config fields") {
  const ExperimentConfig c = must_parse(
      "dim = 2\n"
      "cells = 16, 8\n"
      "nu = 0.7\n"
      "kappa = 1.3\n"
      "eos_A = 1.5\n"
      "eos_gamma = 1.4\n"
      "eps_list = 0.2 0.1 0.05\n"
      "eps1 = 0.03\n"
      "eps2 = 0.04\n"
      "rho0 = 1.2\n"
      "rho_amp = 0.2\n"
      "v_amp = 0.05\n"
      "wave = 1 1\n"
      "phase = 0 1.5707963\n"
      "t_end = 0.1\n"
      "snapshots = 5\n"
      "cfl = 0.3\n"
      "visc_safety = 0.5\n"
      "reconstruction = muscl-minmod\n"
      "density_floor = 1e-6\n"
      "norm_order = 2\n"
      "rate_band = 1.5 2.5\n"
      "check_samples = 10\n"
      "check_tol = 1e-8\n"
      "seed = 99\n"
      "threads = 3\n"
      "hook_disable_source = true\n");
  CHECK(c.dim == 2);
  CHECK(c.cells == std::array<int, 3>{16, 8, 1});
  CHECK(c.nu == 0.7);
  CHECK(c.kappa == 1.3);
  CHECK(c.eos_A == 1.5);
  CHECK(c.eos_gamma == 1.4);
  CHECK(c.eps_list == std::vector<double>{0.2, 0.1, 0.05});
  CHECK(c.eps1 == 0.03);
  CHECK(c.eps2 == 0.04);
  CHECK(c.rho0 == 1.2);
  CHECK(c.rho_amp == 0.2);
  CHECK(c.v_amp == 0.05);
  CHECK(c.wave == std::array<int, 3>{1, 1, 0});
  CHECK(c.phase[1] == 1.5707963);
  CHECK(c.t_end == 0.1);
  CHECK(c.snapshots == 5);
  CHECK(c.cfl == 0.3);
  CHECK(c.visc_safety == 0.5);
  CHECK(c.reconstruction == "muscl-minmod");
  CHECK(c.density_floor == 1e-6);
  CHECK(c.norm_order == 2);
  CHECK(c.rate_band_lo == 1.5);
  CHECK(c.rate_band_hi == 2.5);
  CHECK(c.check_samples == 10);
  CHECK(c.check_tol == 1e-8);
  CHECK(c.seed == 99);
  CHECK(c.threads == 3);
  CHECK(c.hook_disable_source);
}

TEST_CASE("comments and blank lines are skipped") {
  const ExperimentConfig c = must_parse(
      "# leading comment\n"
      "\n"
      "   \t\n"
      "dim = 3   # trailing comment\n"
      "cells = 8 8 8\n");
  CHECK(c.dim == 3);
  CHECK(c.cells == std::array<int, 3>{8, 8, 8});
}

TEST_CASE("parse errors carry the offending line") {
  const std::string e1 = must_fail("dim = 1\nkappa = 2\nfrobble = 1\n");
  CHECK(e1.find("line 3") != std::string::npos);
  CHECK(e1.find("unknown key 'frobble'") != std::string::npos);

  const std::string e2 = must_fail("cfl = fast\n");
  CHECK(e2.find("line 1") != std::string::npos);
  CHECK(e2.find("invalid value for 'cfl'") != std::string::npos);

  const std::string e3 = must_fail("just some words\n");
  CHECK(e3.find("expected 'key = value'") != std::string::npos);
}

TEST_CASE("validation rejects inconsistent settings") {
  CHECK(must_fail("eps_list = 0.05 0.1\n").find("strictly decreasing") !=
        std::string::npos);
  CHECK(must_fail("eps_list = 0.1 0.1\n").find("strictly decreasing") !=
        std::string::npos);
  CHECK(must_fail("cfl = 1.0\n").find("cfl") != std::string::npos);
  CHECK(must_fail("cfl = 0\n").find("cfl") != std::string::npos);
  CHECK(must_fail("reconstruction = parabolic\n").find("reconstruction") !=
        std::string::npos);
  CHECK(must_fail("rate_band = 2.3 1.7\n").find("rate_band") !=
        std::string::npos);
  CHECK(must_fail("dim = 2\ncells = 16 2\n").find("at least 4") !=
        std::string::npos);
  CHECK(must_fail("eos_gamma = 1.0\n").find("eos_gamma") != std::string::npos);
  CHECK(must_fail("snapshots = 0\n").find("snapshots") != std::string::npos);
}

TEST_CASE("deep density dips warn but still parse") {
  const ParseResult res = parse_config("rho0 = 1.0\nrho_amp = 0.6\n");
  REQUIRE(res.config.has_value());
  REQUIRE(res.warnings.size() == 1);
  CHECK(res.warnings[0].find("admissible") != std::string::npos);
}

TEST_CASE("relaxation scales default to the sweep head") {
  ExperimentConfig c = must_parse("eps_list = 0.2 0.1\n");
  PhysParams p = make_phys(c);
  CHECK(p.eps1 == 0.2);
  CHECK(p.eps2 == 0.2);

  c = must_parse("eps_list = 0.2 0.1\neps1 = 0.07\neps2 = 0.03\n");
  p = make_phys(c);
  CHECK(p.eps1 == 0.07);
  CHECK(p.eps2 == 0.03);
}

TEST_CASE("snapshot schedule hits the endpoints exactly") {
  ExperimentConfig c;
  c.t_end = 0.2;
  c.snapshots = 5;
  const std::vector<double> ts = snapshot_schedule(c);
  REQUIRE(ts.size() == 5);
  CHECK(ts.front() == 0.0);
  CHECK(ts.back() == 0.2);
  CHECK(ts[2] == doctest::Approx(0.1).epsilon(1e-15));

  c.snapshots = 1;
  CHECK(snapshot_schedule(c) == std::vector<double>{0.2});

  c.t_end = 0.0;
  c.snapshots = 7;
  CHECK(snapshot_schedule(c) == std::vector<double>{0.0});
}

TEST_CASE("reconstruction names map onto scheme tags") {
  ExperimentConfig c;
  CHECK(reconstruction_of(c) == Reconstruction::MusclCentral);
  c.reconstruction = "muscl-minmod";
  CHECK(reconstruction_of(c) == Reconstruction::MusclMinmod);
  c.reconstruction = "first-order";
  CHECK(reconstruction_of(c) == Reconstruction::FirstOrder);
}

TEST_CASE("initial data follows the configured wave") {
  ExperimentConfig c;
  c.cells = {64, 1, 1};
  c.rho0 = 1.5;
  c.rho_amp = 0.25;
  c.v_amp = 0.0;

  const RelaxField f = make_relax_ic(c);
  const Grid g = make_grid(c);
  const double two_pi = 2.0 * std::acos(-1.0);
  for (int i : {0, 7, 33}) {
    const double x = g.center(i, 0, 0)[0];
    CHECK(f.cells[i].rho ==
          doctest::Approx(1.5 + 0.25 * std::sin(two_pi * x)).epsilon(1e-14));
    // At rest the closure stresses vanish identically.
    CHECK(f.cells[i].mom == Vec3{0.0, 0.0, 0.0});
    CHECK(f.cells[i].tau1.frobenius_sq() == 0.0);
    CHECK(f.cells[i].tau2 == 0.0);
  }

  // Momentum is rho v, not v.
  c.v_amp = 0.1;
  c.phase = {1.0, 0.0, 0.0};
  const NSField nf = make_ns_ic(c);
  const double x5 = g.center(5, 0, 0)[0];
  const double rho5 = 1.5 + 0.25 * std::sin(two_pi * x5);
  CHECK(nf.cells[5].mom[0] ==
        doctest::Approx(rho5 * 0.1 * std::sin(two_pi * x5 + 1.0))
            .epsilon(1e-14));
}
