#include "relaxflow/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "relaxflow/diagnostics.hpp"
#include "relaxflow/io.hpp"
#include "relaxflow/structure.hpp"

namespace relaxflow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_items(const std::string& s) {
  std::vector<std::string> items;
  std::string cur;
  for (char ch : s) {
    if (ch == ',' || ch == ' ' || ch == '\t') {
      if (!cur.empty()) items.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) items.push_back(cur);
  return items;
}

bool parse_double(const std::string& s, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_int(const std::string& s, long long& out) {
  try {
    std::size_t pos = 0;
    out = std::stoll(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "1" || s == "true" || s == "on" || s == "yes") {
    out = true;
    return true;
  }
  if (s == "0" || s == "false" || s == "off" || s == "no") {
    out = false;
    return true;
  }
  return false;
}

bool parse_double_list(const std::string& s, std::vector<double>& out) {
  out.clear();
  for (const std::string& item : split_items(s)) {
    double v;
    if (!parse_double(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

bool parse_int_list(const std::string& s, std::vector<long long>& out) {
  out.clear();
  for (const std::string& item : split_items(s)) {
    long long v;
    if (!parse_int(item, v)) return false;
    out.push_back(v);
  }
  return !out.empty();
}

std::string validate(const ExperimentConfig& c) {
  if (c.dim < 1 || c.dim > 3) return "dim must be 1, 2, or 3";
  for (int a = 0; a < c.dim; ++a)
    if (c.cells[a] < 4) return "cells must be at least 4 along active axes";
  if (!(c.nu > 0.0)) return "nu must be positive";
  if (!(c.kappa > 0.0)) return "kappa must be positive";
  if (!(c.eos_A > 0.0)) return "eos_A must be positive";
  if (!(c.eos_gamma > 1.0)) return "eos_gamma must exceed 1";
  if (c.eps_list.empty()) return "eps_list must not be empty";
  for (std::size_t i = 0; i < c.eps_list.size(); ++i) {
    if (!(c.eps_list[i] > 0.0)) return "eps_list entries must be positive";
    if (i > 0 && !(c.eps_list[i] < c.eps_list[i - 1]))
      return "eps_list must be strictly decreasing";
  }
  if (c.eps1 < 0.0 || c.eps2 < 0.0) return "eps1/eps2 must be positive";
  if (!(c.rho0 > 0.0)) return "rho0 must be positive";
  if (!(c.t_end >= 0.0)) return "t_end must be nonnegative";
  if (c.snapshots < 1) return "snapshots must be at least 1";
  if (!(c.cfl > 0.0 && c.cfl < 1.0)) return "cfl must lie in (0, 1)";
  if (!(c.visc_safety > 0.0 && c.visc_safety <= 1.0))
    return "visc_safety must lie in (0, 1]";
  if (c.reconstruction != "muscl-central" && c.reconstruction != "muscl-minmod" &&
      c.reconstruction != "first-order")
    return "reconstruction must be muscl-central, muscl-minmod, or first-order";
  if (!(c.density_floor > 0.0)) return "density_floor must be positive";
  if (c.norm_order < 0 || c.norm_order > 2) return "norm_order must be 0, 1, or 2";
  if (!(c.rate_band_lo > 0.0 && c.rate_band_lo < c.rate_band_hi))
    return "rate_band must satisfy 0 < lo < hi";
  if (c.check_samples < 1) return "check_samples must be at least 1";
  if (!(c.check_tol > 0.0)) return "check_tol must be positive";
  if (c.threads < 1) return "threads must be at least 1";
  return "";
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int report_violation(const char* cmd, const Violation& v, double t) {
  std::fprintf(stderr, "%s: state violation: %s at t = %s\n", cmd,
               v.message().c_str(), format_g17(t).c_str());
  return kExitViolation;
}

SolverConfig relax_config(const ExperimentConfig& cfg,
                          std::vector<double> schedule) {
  SolverConfig s;
  s.cfl = cfg.cfl;
  s.reconstruction = reconstruction_of(cfg);
  s.t_end = cfg.t_end;
  s.snapshot_times = std::move(schedule);
  s.density_floor = cfg.density_floor;
  s.threads = cfg.threads;
  s.disable_source = cfg.hook_disable_source;
  return s;
}

NSConfig ns_config(const ExperimentConfig& cfg, std::vector<double> schedule) {
  NSConfig s;
  s.cfl = cfg.cfl;
  s.visc_safety = cfg.visc_safety;
  s.reconstruction = reconstruction_of(cfg);
  s.t_end = cfg.t_end;
  s.snapshot_times = std::move(schedule);
  s.density_floor = cfg.density_floor;
  s.threads = cfg.threads;
  return s;
}

std::string snap_name(const char* prefix, std::size_t k, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s_%04zu.%s", prefix, k, ext);
  return buf;
}

}  // namespace

Reconstruction reconstruction_of(const ExperimentConfig& c) {
  if (c.reconstruction == "first-order") return Reconstruction::FirstOrder;
  if (c.reconstruction == "muscl-minmod") return Reconstruction::MusclMinmod;
  return Reconstruction::MusclCentral;
}

ParseResult parse_config(const std::string& text) {
  ExperimentConfig cfg;
  ParseResult res;

  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&res](int line, const std::string& msg) {
    res.error = "line " + std::to_string(line) + ": " + msg;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(line_no, "expected 'key = value'");
      return res;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      fail(line_no, "expected 'key = value'");
      return res;
    }

    bool ok = true;
    long long i = 0;
    std::vector<long long> ints;
    std::vector<double> doubles;

    if (key == "dim") {
      ok = parse_int(value, i);
      if (ok) cfg.dim = int(i);
    } else if (key == "cells") {
      ok = parse_int_list(value, ints) && ints.size() <= 3;
      if (ok) {
        cfg.cells = {1, 1, 1};
        for (std::size_t a = 0; a < ints.size(); ++a) cfg.cells[a] = int(ints[a]);
      }
    } else if (key == "nu") {
      ok = parse_double(value, cfg.nu);
    } else if (key == "kappa") {
      ok = parse_double(value, cfg.kappa);
    } else if (key == "eos_A") {
      ok = parse_double(value, cfg.eos_A);
    } else if (key == "eos_gamma") {
      ok = parse_double(value, cfg.eos_gamma);
    } else if (key == "eps_list") {
      ok = parse_double_list(value, cfg.eps_list);
    } else if (key == "eps1") {
      ok = parse_double(value, cfg.eps1);
    } else if (key == "eps2") {
      ok = parse_double(value, cfg.eps2);
    } else if (key == "rho0") {
      ok = parse_double(value, cfg.rho0);
    } else if (key == "rho_amp") {
      ok = parse_double(value, cfg.rho_amp);
    } else if (key == "v_amp") {
      ok = parse_double(value, cfg.v_amp);
    } else if (key == "wave") {
      ok = parse_int_list(value, ints) && ints.size() <= 3;
      if (ok) {
        cfg.wave = {0, 0, 0};
        for (std::size_t a = 0; a < ints.size(); ++a) cfg.wave[a] = int(ints[a]);
      }
    } else if (key == "phase") {
      ok = parse_double_list(value, doubles) && doubles.size() <= 3;
      if (ok) {
        cfg.phase = {0.0, 0.0, 0.0};
        for (std::size_t a = 0; a < doubles.size(); ++a) cfg.phase[a] = doubles[a];
      }
    } else if (key == "t_end") {
      ok = parse_double(value, cfg.t_end);
    } else if (key == "snapshots") {
      ok = parse_int(value, i);
      if (ok) cfg.snapshots = int(i);
    } else if (key == "cfl") {
      ok = parse_double(value, cfg.cfl);
    } else if (key == "visc_safety") {
      ok = parse_double(value, cfg.visc_safety);
    } else if (key == "reconstruction") {
      cfg.reconstruction = value;
    } else if (key == "density_floor") {
      ok = parse_double(value, cfg.density_floor);
    } else if (key == "norm_order") {
      ok = parse_int(value, i);
      if (ok) cfg.norm_order = int(i);
    } else if (key == "rate_band") {
      ok = parse_double_list(value, doubles) && doubles.size() == 2;
      if (ok) {
        cfg.rate_band_lo = doubles[0];
        cfg.rate_band_hi = doubles[1];
      }
    } else if (key == "check_samples") {
      ok = parse_int(value, i);
      if (ok) cfg.check_samples = int(i);
    } else if (key == "check_tol") {
      ok = parse_double(value, cfg.check_tol);
    } else if (key == "seed") {
      ok = parse_int(value, i) && i >= 0;
      if (ok) cfg.seed = (unsigned long long)(i);
    } else if (key == "threads") {
      ok = parse_int(value, i);
      if (ok) cfg.threads = int(i);
    } else if (key == "hook_self_compare") {
      ok = parse_bool(value, cfg.hook_self_compare);
    } else if (key == "hook_disable_source") {
      ok = parse_bool(value, cfg.hook_disable_source);
    } else if (key == "hook_corrupt_coupling") {
      ok = parse_bool(value, cfg.hook_corrupt_coupling);
    } else if (key == "hook_mismatch_schedule") {
      ok = parse_bool(value, cfg.hook_mismatch_schedule);
    } else {
      fail(line_no, "unknown key '" + key + "'");
      return res;
    }

    if (!ok) {
      fail(line_no, "invalid value for '" + key + "'");
      return res;
    }
  }

  const std::string problem = validate(cfg);
  if (!problem.empty()) {
    res.error = problem;
    return res;
  }

  // Not an error: the run proceeds and the solver rejects the state at t = 0
  // if the density actually leaves the admissible set.
  if (cfg.rho0 - std::abs(cfg.rho_amp) < 0.5)
    res.warnings.push_back(
        "initial density dips below 1/2; the run may leave the admissible set");

  res.config = cfg;
  return res;
}

PhysParams make_phys(const ExperimentConfig& cfg) {
  PhysParams p;
  p.nu = cfg.nu;
  p.kappa = cfg.kappa;
  p.eps1 = cfg.eps1 > 0.0 ? cfg.eps1 : cfg.eps_list.front();
  p.eps2 = cfg.eps2 > 0.0 ? cfg.eps2 : cfg.eps_list.front();
  p.eos_A = cfg.eos_A;
  p.eos_gamma = cfg.eos_gamma;
  return p;
}

Grid make_grid(const ExperimentConfig& cfg) { return Grid(cfg.dim, cfg.cells); }

std::vector<double> snapshot_schedule(const ExperimentConfig& cfg) {
  if (cfg.t_end == 0.0) return {0.0};
  if (cfg.snapshots == 1) return {cfg.t_end};
  std::vector<double> ts(cfg.snapshots);
  for (int k = 0; k < cfg.snapshots; ++k)
    ts[k] = (k == cfg.snapshots - 1) ? cfg.t_end
                                     : cfg.t_end * double(k) / (cfg.snapshots - 1);
  return ts;
}

namespace {

void wave_ic(const ExperimentConfig& cfg, const Grid& g,
             std::vector<double>& rho, std::vector<Vec3>& vel) {
  const double two_pi = 2.0 * std::acos(-1.0);
  rho.resize(g.size());
  vel.resize(g.size());
  for (int k = 0; k < g.cells[2]; ++k)
    for (int j = 0; j < g.cells[1]; ++j)
      for (int i = 0; i < g.cells[0]; ++i) {
        const Vec3 x = g.center(i, j, k);
        const double kx =
            cfg.wave[0] * x[0] + cfg.wave[1] * x[1] + cfg.wave[2] * x[2];
        const std::size_t c = g.index(i, j, k);
        rho[c] = cfg.rho0 + cfg.rho_amp * std::sin(two_pi * kx);
        for (int a = 0; a < 3; ++a)
          vel[c][a] = cfg.v_amp * std::sin(two_pi * kx + cfg.phase[a]);
      }
}

}  // namespace

RelaxField make_relax_ic(const ExperimentConfig& cfg) {
  const Grid g = make_grid(cfg);
  const PhysParams p = make_phys(cfg);
  std::vector<double> rho;
  std::vector<Vec3> vel;
  wave_ic(cfg, g, rho, vel);

  // Stresses start on the closure of the initial velocity field, so the
  // relaxation run begins in local equilibrium (no initial layer).
  std::vector<SymTraceless3> tau1;
  std::vector<double> tau2;
  ce_closure(vel, g, p, tau1, tau2);

  RelaxField f = RelaxField::uniform(g);
  for (std::size_t c = 0; c < g.size(); ++c) {
    f.cells[c].rho = rho[c];
    for (int a = 0; a < 3; ++a) f.cells[c].mom[a] = rho[c] * vel[c][a];
    f.cells[c].tau1 = tau1[c];
    f.cells[c].tau2 = tau2[c];
  }
  return f;
}

NSField make_ns_ic(const ExperimentConfig& cfg) {
  const Grid g = make_grid(cfg);
  std::vector<double> rho;
  std::vector<Vec3> vel;
  wave_ic(cfg, g, rho, vel);
  NSField f = NSField::uniform(g);
  for (std::size_t c = 0; c < g.size(); ++c) {
    f.cells[c].rho = rho[c];
    for (int a = 0; a < 3; ++a) f.cells[c].mom[a] = rho[c] * vel[c][a];
  }
  return f;
}

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Grid g = make_grid(cfg);
  const PhysParams p = make_phys(cfg);
  RelaxSolver solver(g, p, relax_config(cfg, snapshot_schedule(cfg)));

  const RelaxTrajectory traj = solver.run(make_relax_ic(cfg));
  if (!traj.ok())
    return report_violation("simulate", *traj.violation, traj.violation_time);

  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    write_relax_snapshot(join(out_dir, snap_name("relax", k, "bin")),
                         traj.snapshots[k], traj.snapshot_times[k], p);
    if (g.dim == 1)
      write_relax_csv(join(out_dir, snap_name("relax", k, "csv")),
                      traj.snapshots[k]);
  }
  write_entropy_csv(join(out_dir, "entropy.csv"), traj);

  std::printf("simulate: %zu cells, %zu steps, entropy %s -> %s\n",
              g.size(), traj.dt_history.size(),
              format_g17(traj.entropy_history.front()).c_str(),
              format_g17(traj.entropy_history.back()).c_str());
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const Grid g = make_grid(cfg);
  const PhysParams p = make_phys(cfg);
  const std::vector<double> schedule = snapshot_schedule(cfg);

  RelaxSolver solver(g, p, relax_config(cfg, schedule));
  const RelaxTrajectory traj = solver.run(make_relax_ic(cfg));
  if (!traj.ok())
    return report_violation("compare", *traj.violation, traj.violation_time);

  if (cfg.hook_self_compare) {
    // Control: the run against itself.  Every distance must come out exactly
    // zero; anything else means the comparison machinery injects error.
    ErrorSeries series;
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
      ErrorRow row;
      row.epsilon = p.eps1;
      row.time = traj.snapshot_times[k];
      row.err_total = field_distance(traj.snapshots[k], traj.snapshots[k],
                                     cfg.norm_order);
      series.sup_total = std::max(series.sup_total, row.err_total);
      series.rows.push_back(row);
    }
    write_error_csv(join(out_dir, "errors.csv"), series);
    std::printf("compare(self): sup_total = %s\n",
                format_g17(series.sup_total).c_str());
    return kExitOk;
  }

  std::vector<double> ns_schedule = schedule;
  if (cfg.hook_mismatch_schedule) ns_schedule.pop_back();

  NSSolver ref(g, p, ns_config(cfg, ns_schedule));
  const NSTrajectory ref_traj = ref.run(make_ns_ic(cfg));
  if (!ref_traj.ok())
    return report_violation("compare", *ref_traj.violation,
                            ref_traj.violation_time);

  try {
    const ErrorSeries series =
        error_vs_reference(traj, ref_traj, cfg.norm_order, p);
    write_error_csv(join(out_dir, "errors.csv"), series);
    std::printf("compare: sup_total = %s\n", format_g17(series.sup_total).c_str());
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "compare: %s\n", e.what());
    return kExitUsage;
  }
  return kExitOk;
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  if (cfg.eps_list.size() < 3) {
    std::fprintf(stderr, "sweep: need at least three eps_list entries\n");
    return kExitUsage;
  }

  const Grid g = make_grid(cfg);
  const std::vector<double> schedule = snapshot_schedule(cfg);

  // One reference trajectory serves the whole sweep; it does not depend on
  // the relaxation scales.
  const PhysParams p0 = make_phys(cfg);
  NSSolver ref(g, p0, ns_config(cfg, schedule));
  const NSTrajectory ref_traj = ref.run(make_ns_ic(cfg));
  if (!ref_traj.ok())
    return report_violation("sweep", *ref_traj.violation, ref_traj.violation_time);

  std::vector<RatePoint> points;
  for (std::size_t idx = 0; idx < cfg.eps_list.size(); ++idx) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.eps1 = cfg.eps_list[idx];
    run_cfg.eps2 = cfg.eps_list[idx];
    const PhysParams p = make_phys(run_cfg);

    RelaxSolver solver(g, p, relax_config(run_cfg, schedule));
    const RelaxTrajectory traj = solver.run(make_relax_ic(run_cfg));
    if (!traj.ok())
      return report_violation("sweep", *traj.violation, traj.violation_time);

    try {
      const ErrorSeries series =
          error_vs_reference(traj, ref_traj, cfg.norm_order, p);
      char name[64];
      std::snprintf(name, sizeof(name), "errors_%zu.csv", idx);
      write_error_csv(join(out_dir, name), series);
      points.push_back({p.eps1, series.sup_total});
      std::printf("sweep: eps = %s sup_error = %s\n", format_g17(p.eps1).c_str(),
                  format_g17(series.sup_total).c_str());
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "sweep: %s\n", e.what());
      return kExitUsage;
    }
  }

  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double ratio = points[i].sup_error / points[i + 1].sup_error;
    std::printf("sweep: ratio %s -> %s: %s\n",
                format_g17(points[i].epsilon).c_str(),
                format_g17(points[i + 1].epsilon).c_str(),
                format_g17(ratio).c_str());
  }

  RateFit fit;
  try {
    fit = fit_rate(points);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "sweep: %s\n", e.what());
    return kExitUsage;
  }
  write_rate_csv(join(out_dir, "rate.csv"), fit);

  const bool pass = fit.slope >= cfg.rate_band_lo && fit.slope <= cfg.rate_band_hi;
  std::printf("sweep: slope = %s intercept = %s residual = %s band = [%s, %s] => %s\n",
              format_g17(fit.slope).c_str(), format_g17(fit.intercept).c_str(),
              format_g17(fit.fit_residual).c_str(),
              format_g17(cfg.rate_band_lo).c_str(),
              format_g17(cfg.rate_band_hi).c_str(), pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitRate;
}

int cmd_check(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  const PhysParams p = make_phys(cfg);

  StructureCheckOptions opt;
  opt.tol = cfg.check_tol;
  if (cfg.hook_corrupt_coupling) opt.coupling_perturbation = 1.0;

  const std::vector<RelaxState> states =
      sample_states(cfg.check_samples, cfg.seed);
  const StructureReport rep = check_structure(states, p, opt);
  write_structure_csv(join(out_dir, "structure.csv"), rep);

  std::printf(
      "check: %zu samples, min eig = %s, symmetry = %s, coupling = %s, tol = %s "
      "=> %s\n",
      rep.samples.size(), format_g17(rep.worst_min_eig).c_str(),
      format_g17(rep.worst_symmetry).c_str(),
      format_g17(rep.worst_coupling).c_str(), format_g17(rep.tol).c_str(),
      rep.pass ? "PASS" : "FAIL");
  return rep.pass ? kExitOk : kExitStructure;
}

}  // namespace relaxflow
