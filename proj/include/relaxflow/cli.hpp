#pragma once

#include <optional>
#include <string>
#include <vector>

#include "relaxflow/ns_solver.hpp"
#include "relaxflow/relax_solver.hpp"

namespace relaxflow {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;      // bad flags, config, or input files
inline constexpr int kExitViolation = 2;  // solver left the admissible set
inline constexpr int kExitRate = 3;       // convergence slope outside the band
inline constexpr int kExitStructure = 4;  // algebraic structure check failed

/// One experiment, as described by a config file.  Initial data is the
/// periodic wave family rho = rho0 + rho_amp sin(2 pi k.x),
/// v_i = v_amp sin(2 pi k.x + phase_i), with stresses prepared from the
/// closure of the initial velocity field.
struct ExperimentConfig {
  int dim = 1;
  std::array<int, 3> cells = {512, 1, 1};

  double nu = 1.0;
  double kappa = 1.0;
  double eos_A = 1.0;
  double eos_gamma = 2.0;

  // Relaxation scales swept by `sweep`; `simulate` and `compare` use the
  // first entry unless eps1/eps2 are set explicitly.
  std::vector<double> eps_list = {0.1, 0.05, 0.025, 0.0125};
  double eps1 = 0.0;  // 0 means: take eps_list.front()
  double eps2 = 0.0;

  double rho0 = 1.0;
  double rho_amp = 0.1;
  double v_amp = 0.0;
  std::array<int, 3> wave = {1, 0, 0};
  std::array<double, 3> phase = {0.0, 0.0, 0.0};

  double t_end = 0.2;
  int snapshots = 20;
  double cfl = 0.45;
  double visc_safety = 0.8;
  std::string reconstruction = "muscl-central";
  double density_floor = 1e-8;

  int norm_order = 0;
  double rate_band_lo = 1.7;
  double rate_band_hi = 2.3;

  int check_samples = 100;
  double check_tol = 1e-9;
  unsigned long long seed = 12345;

  int threads = 1;

  // Negative-control hooks; each one must defeat the matching certificate.
  bool hook_self_compare = false;      // compare a run against itself
  bool hook_disable_source = false;    // drop the relaxation source
  bool hook_corrupt_coupling = false;  // perturb a coupling matrix entry
  bool hook_mismatch_schedule = false; // desynchronize snapshot schedules
};

struct ParseResult {
  std::optional<ExperimentConfig> config;
  std::string error;                  // set when config is empty
  std::vector<std::string> warnings;  // non-fatal, printed to stderr
};

/// Parse `key = value` lines; '#' starts a comment, blank lines are skipped.
/// Unknown keys, malformed values, and inconsistent settings are errors and
/// carry a line number where one applies.
ParseResult parse_config(const std::string& text);

PhysParams make_phys(const ExperimentConfig& cfg);
Grid make_grid(const ExperimentConfig& cfg);
std::vector<double> snapshot_schedule(const ExperimentConfig& cfg);
Reconstruction reconstruction_of(const ExperimentConfig& cfg);
RelaxField make_relax_ic(const ExperimentConfig& cfg);
NSField make_ns_ic(const ExperimentConfig& cfg);

/// Subcommand drivers; each returns a process exit code and writes its
/// artifacts under `out_dir` (created if missing).
int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir);
int cmd_check(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace relaxflow
