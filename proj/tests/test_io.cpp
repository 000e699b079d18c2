#include "relaxflow/io.hpp"

#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "relaxflow/ns_solver.hpp"

using namespace relaxflow;

namespace {

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "relaxflow_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

RelaxField busy_field(const Grid& g) {
  RelaxField f = RelaxField::uniform(g);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double x = double(c) / double(g.size());
    f.cells[c].rho = 1.0 + 0.3 * std::sin(2.0 * M_PI * x);
    f.cells[c].mom = {x, -x, 0.25 * x};
    f.cells[c].tau1 = {x / 3.0, -x / 7.0, x / 11.0, x / 13.0, -x / 17.0};
    f.cells[c].tau2 = std::cos(2.0 * M_PI * x);
  }
  return f;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s)
    if (c == '\n') ++n;
  return n;
}

}  // namespace

TEST_CASE("g17 formatting round trips doubles exactly") {
  for (double x : {1.0 / 3.0, 0.1, -2.5e-17, 3.141592653589793, 1e300}) {
    const std::string s = format_g17(x);
    CHECK(std::stod(s) == x);
  }
  CHECK(format_g17(0.0) == "0");
}

TEST_CASE("snapshot files round trip bit for bit") {
  const Grid g(1, {32, 1, 1});
  const RelaxField f = busy_field(g);
  PhysParams p;
  p.nu = 0.7;
  p.kappa = 1.3;
  p.eps1 = 0.05;
  p.eps2 = 0.02;
  p.eos_A = 1.1;
  p.eos_gamma = 1.4;

  const auto path = scratch_dir() / "snap.bin";
  write_relax_snapshot(path.string(), f, 0.125, p);
  const RelaxSnapshot back = read_relax_snapshot(path.string());

  CHECK(back.time == 0.125);
  CHECK(back.params.nu == p.nu);
  CHECK(back.params.eos_gamma == p.eos_gamma);
  CHECK(back.field.grid == g);
  REQUIRE(back.field.cells.size() == f.cells.size());
  for (std::size_t c = 0; c < f.cells.size(); ++c) {
    CHECK(back.field.cells[c].rho == f.cells[c].rho);
    CHECK(back.field.cells[c].mom == f.cells[c].mom);
    CHECK(back.field.cells[c].tau1.yz == f.cells[c].tau1.yz);
    CHECK(back.field.cells[c].tau2 == f.cells[c].tau2);
  }
}

TEST_CASE("reference snapshot keeps the attached closures") {
  const Grid g(1, {16, 1, 1});
  NSField f = NSField::uniform(g);
  for (std::size_t c = 0; c < g.size(); ++c)
    f.cells[c].mom[0] = std::sin(2.0 * M_PI * double(c) / 16.0);
  PhysParams p;
  attach_ce(f, p);

  const auto path = scratch_dir() / "ns_snap.bin";
  write_ns_snapshot(path.string(), f, 0.5, p);
  const NSSnapshot back = read_ns_snapshot(path.string());
  REQUIRE(back.field.tau1_ce.size() == g.size());
  for (std::size_t c = 0; c < g.size(); ++c) {
    CHECK(back.field.cells[c].mom[0] == f.cells[c].mom[0]);
    CHECK(back.field.tau1_ce[c].xx == f.tau1_ce[c].xx);
    CHECK(back.field.tau2_ce[c] == f.tau2_ce[c]);
  }
}

TEST_CASE("snapshot reader rejects corrupted files") {
  const auto dir = scratch_dir();
  const Grid g(1, {8, 1, 1});
  const RelaxField f = busy_field(g);
  const PhysParams p;
  const auto path = dir / "good.bin";
  write_relax_snapshot(path.string(), f, 0.0, p);

  // Wrong magic line.
  {
    std::string bytes = slurp(path);
    bytes[0] = 'X';
    std::ofstream out(dir / "bad_magic.bin", std::ios::binary);
    out << bytes;
  }
  CHECK_THROWS_AS(read_relax_snapshot((dir / "bad_magic.bin").string()),
                  std::runtime_error);

  // Truncated payload.
  {
    std::string bytes = slurp(path);
    bytes.resize(bytes.size() - 16);
    std::ofstream out(dir / "short.bin", std::ios::binary);
    out << bytes;
  }
  CHECK_THROWS_AS(read_relax_snapshot((dir / "short.bin").string()),
                  std::runtime_error);

  CHECK_THROWS_AS(read_relax_snapshot((dir / "missing.bin").string()),
                  std::runtime_error);
}

TEST_CASE("snapshot writes are deterministic") {
  const Grid g(1, {16, 1, 1});
  const RelaxField f = busy_field(g);
  const PhysParams p;
  const auto dir = scratch_dir();
  write_relax_snapshot((dir / "a.bin").string(), f, 0.75, p);
  write_relax_snapshot((dir / "b.bin").string(), f, 0.75, p);
  CHECK(slurp(dir / "a.bin") == slurp(dir / "b.bin"));
}

TEST_CASE("cell csv lists one row per cell with centers first") {
  const Grid g(1, {8, 1, 1});
  const RelaxField f = busy_field(g);
  const auto path = scratch_dir() / "field.csv";
  write_relax_csv(path.string(), f);
  const std::string text = slurp(path);
  CHECK(count_lines(text) == 9);  // header + 8 cells
  CHECK(text.rfind("x,rho,", 0) == 0);
  // First center of an 8-cell grid.
  CHECK(text.find("\n0.0625,") != std::string::npos);
}

TEST_CASE("series writers emit aligned csv") {
  const auto dir = scratch_dir();

  ErrorSeries series;
  series.rows.push_back({0.1, 0.0, 0, 0, 0, 0, 0.0});
  series.rows.push_back({0.1, 0.5, 1e-3, 2e-3, 3e-3, 4e-3, 5e-3});
  series.sup_total = 5e-3;
  write_error_csv((dir / "errors.csv").string(), series);
  const std::string err = slurp(dir / "errors.csv");
  CHECK(count_lines(err) == 3);
  CHECK(err.rfind("epsilon,time,", 0) == 0);

  RateFit fit;
  fit.points = {{0.1, 1e-2}, {0.05, 2.5e-3}, {0.025, 6.25e-4}};
  fit.slope = 2.0;
  fit.intercept = 0.0;
  write_rate_csv((dir / "rate.csv").string(), fit);
  const std::string rate = slurp(dir / "rate.csv");
  CHECK(count_lines(rate) == 4);

  StructureReport rep;
  rep.samples.resize(2);
  rep.tol = 1e-9;
  rep.pass = true;
  write_structure_csv((dir / "structure.csv").string(), rep);
  CHECK(count_lines(slurp(dir / "structure.csv")) == 3);
}

TEST_CASE("entropy csv tracks the trajectory history") {
  RelaxTrajectory traj;
  traj.step_times = {0.0, 0.01, 0.02};
  traj.entropy_history = {1.0, 0.9, 0.85};
  traj.dissipation_history = {0.0, -0.5, -0.25};
  const auto path = scratch_dir() / "entropy.csv";
  write_entropy_csv(path.string(), traj);
  const std::string text = slurp(path);
  CHECK(count_lines(text) == 4);
  CHECK(text.rfind("time,entropy,dissipation", 0) == 0);
  CHECK(text.find("0.01,") != std::string::npos);
}
