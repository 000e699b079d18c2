#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaxflow/cli.hpp"
#include "relaxflow/diagnostics.hpp"
#include "relaxflow/io.hpp"
#include "relaxflow/structure.hpp"

namespace py = pybind11;
using namespace relaxflow;

namespace {

std::vector<double> field_component(const RelaxField& f, const std::string& name) {
  static const std::array<const char*, kNVar> names = {
      "rho", "mx", "my", "mz", "tau1_xx", "tau1_yy",
      "tau1_xy", "tau1_xz", "tau1_yz", "tau2"};
  int comp = -1;
  for (int i = 0; i < kNVar; ++i)
    if (name == names[i]) comp = i;
  if (comp < 0) throw std::invalid_argument("unknown component: " + name);
  std::vector<double> out(f.cells.size());
  for (std::size_t c = 0; c < f.cells.size(); ++c)
    out[c] = to_array(f.cells[c])[comp];
  return out;
}

ExperimentConfig parse_or_throw(const std::string& text) {
  const ParseResult res = parse_config(text);
  if (!res.config) throw std::invalid_argument(res.error);
  return *res.config;
}

RelaxTrajectory run_simulate(const ExperimentConfig& cfg) {
  RelaxSolver solver(make_grid(cfg), make_phys(cfg),
                     SolverConfig{cfg.cfl, reconstruction_of(cfg), cfg.t_end,
                                  snapshot_schedule(cfg), cfg.density_floor,
                                  cfg.threads, cfg.hook_disable_source, false});
  return solver.run(make_relax_ic(cfg));
}

NSTrajectory run_reference(const ExperimentConfig& cfg) {
  NSConfig ns;
  ns.cfl = cfg.cfl;
  ns.visc_safety = cfg.visc_safety;
  ns.reconstruction = reconstruction_of(cfg);
  ns.t_end = cfg.t_end;
  ns.snapshot_times = snapshot_schedule(cfg);
  ns.density_floor = cfg.density_floor;
  ns.threads = cfg.threads;
  NSSolver solver(make_grid(cfg), make_phys(cfg), ns);
  return solver.run(make_ns_ic(cfg));
}

ErrorSeries run_compare(const ExperimentConfig& cfg) {
  const RelaxTrajectory traj = run_simulate(cfg);
  if (!traj.ok()) throw std::runtime_error(traj.violation->message());
  const NSTrajectory ref = run_reference(cfg);
  if (!ref.ok()) throw std::runtime_error(ref.violation->message());
  return error_vs_reference(traj, ref, cfg.norm_order, make_phys(cfg));
}

RateFit run_sweep(const ExperimentConfig& cfg) {
  const NSTrajectory ref = run_reference(cfg);
  if (!ref.ok()) throw std::runtime_error(ref.violation->message());
  std::vector<RatePoint> points;
  for (double eps : cfg.eps_list) {
    ExperimentConfig rc = cfg;
    rc.eps1 = eps;
    rc.eps2 = eps;
    const RelaxTrajectory traj = run_simulate(rc);
    if (!traj.ok()) throw std::runtime_error(traj.violation->message());
    points.push_back(
        {eps,
         error_vs_reference(traj, ref, cfg.norm_order, make_phys(rc)).sup_total});
  }
  return fit_rate(points);
}

StructureReport run_check(int samples, unsigned long long seed,
                          const PhysParams& p, double tol, double corrupt) {
  StructureCheckOptions opt;
  opt.tol = tol;
  opt.coupling_perturbation = corrupt;
  return check_structure(sample_states(samples, seed), p, opt);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "stress-relaxation flow laboratory (native core)";

  py::class_<PhysParams>(m, "PhysParams")
      .def(py::init<>())
      .def_readwrite("nu", &PhysParams::nu)
      .def_readwrite("kappa", &PhysParams::kappa)
      .def_readwrite("eps1", &PhysParams::eps1)
      .def_readwrite("eps2", &PhysParams::eps2)
      .def_readwrite("eos_A", &PhysParams::eos_A)
      .def_readwrite("eos_gamma", &PhysParams::eos_gamma)
      .def("valid", &PhysParams::valid);

  py::class_<SymTraceless3>(m, "SymTraceless3")
      .def(py::init<>())
      .def(py::init([](double xx, double yy, double xy, double xz, double yz) {
             return SymTraceless3{xx, yy, xy, xz, yz};
           }),
           py::arg("xx"), py::arg("yy"), py::arg("xy"), py::arg("xz"),
           py::arg("yz"))
      .def_readwrite("xx", &SymTraceless3::xx)
      .def_readwrite("yy", &SymTraceless3::yy)
      .def_readwrite("xy", &SymTraceless3::xy)
      .def_readwrite("xz", &SymTraceless3::xz)
      .def_readwrite("yz", &SymTraceless3::yz)
      .def("zz", &SymTraceless3::zz)
      .def("frobenius_sq", &SymTraceless3::frobenius_sq)
      .def("to_matrix", &SymTraceless3::to_matrix);

  py::class_<RelaxState>(m, "RelaxState")
      .def(py::init<>())
      .def_readwrite("rho", &RelaxState::rho)
      .def_readwrite("mom", &RelaxState::mom)
      .def_readwrite("tau1", &RelaxState::tau1)
      .def_readwrite("tau2", &RelaxState::tau2)
      .def("velocity", &RelaxState::velocity);

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, std::array<int, 3>>(), py::arg("dim"), py::arg("cells"))
      .def_readonly("dim", &Grid::dim)
      .def_readonly("cells", &Grid::cells)
      .def_readonly("dx", &Grid::dx)
      .def("size", &Grid::size);

  py::class_<RelaxField>(m, "RelaxField")
      .def_readonly("grid", &RelaxField::grid)
      .def("component", &field_component, py::arg("name"),
           "per-cell values of one state component");

  py::class_<Violation>(m, "Violation")
      .def_readonly("cell", &Violation::cell)
      .def_readonly("what", &Violation::what)
      .def_readonly("value", &Violation::value)
      .def("message", &Violation::message);

  py::class_<RelaxTrajectory>(m, "RelaxTrajectory")
      .def_readonly("snapshot_times", &RelaxTrajectory::snapshot_times)
      .def_readonly("snapshots", &RelaxTrajectory::snapshots)
      .def_readonly("step_times", &RelaxTrajectory::step_times)
      .def_readonly("entropy_history", &RelaxTrajectory::entropy_history)
      .def_readonly("dissipation_history", &RelaxTrajectory::dissipation_history)
      .def_readonly("violation", &RelaxTrajectory::violation)
      .def("ok", &RelaxTrajectory::ok);

  py::class_<EntropyBreakdown>(m, "EntropyBreakdown")
      .def_readonly("pressure_part", &EntropyBreakdown::pressure_part)
      .def_readonly("kinetic_part", &EntropyBreakdown::kinetic_part)
      .def_readonly("tau2_part", &EntropyBreakdown::tau2_part)
      .def_readonly("tau1_part", &EntropyBreakdown::tau1_part)
      .def_readonly("total", &EntropyBreakdown::total);

  py::class_<ErrorRow>(m, "ErrorRow")
      .def_readonly("epsilon", &ErrorRow::epsilon)
      .def_readonly("time", &ErrorRow::time)
      .def_readonly("err_rho", &ErrorRow::err_rho)
      .def_readonly("err_mom", &ErrorRow::err_mom)
      .def_readonly("err_tau1", &ErrorRow::err_tau1)
      .def_readonly("err_tau2", &ErrorRow::err_tau2)
      .def_readonly("err_total", &ErrorRow::err_total);

  py::class_<ErrorSeries>(m, "ErrorSeries")
      .def_readonly("rows", &ErrorSeries::rows)
      .def_readonly("sup_total", &ErrorSeries::sup_total);

  py::class_<RatePoint>(m, "RatePoint")
      .def(py::init([](double eps, double err) {
             return RatePoint{eps, err};
           }),
           py::arg("epsilon"), py::arg("sup_error"))
      .def_readwrite("epsilon", &RatePoint::epsilon)
      .def_readwrite("sup_error", &RatePoint::sup_error);

  py::class_<RateFit>(m, "RateFit")
      .def_readonly("points", &RateFit::points)
      .def_readonly("slope", &RateFit::slope)
      .def_readonly("intercept", &RateFit::intercept)
      .def_readonly("fit_residual", &RateFit::fit_residual);

  py::class_<StructureSample>(m, "StructureSample")
      .def_readonly("hessian_min_eig", &StructureSample::hessian_min_eig)
      .def_readonly("symmetry_residual", &StructureSample::symmetry_residual)
      .def_readonly("coupling_residual", &StructureSample::coupling_residual);

  py::class_<StructureReport>(m, "StructureReport")
      .def_readonly("samples", &StructureReport::samples)
      .def_readonly("worst_min_eig", &StructureReport::worst_min_eig)
      .def_readonly("worst_symmetry", &StructureReport::worst_symmetry)
      .def_readonly("worst_coupling", &StructureReport::worst_coupling)
      .def_readonly("tol", &StructureReport::tol)
      .def_readonly("passed", &StructureReport::pass);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("dim", &ExperimentConfig::dim)
      .def_readwrite("cells", &ExperimentConfig::cells)
      .def_readwrite("nu", &ExperimentConfig::nu)
      .def_readwrite("kappa", &ExperimentConfig::kappa)
      .def_readwrite("eos_A", &ExperimentConfig::eos_A)
      .def_readwrite("eos_gamma", &ExperimentConfig::eos_gamma)
      .def_readwrite("eps_list", &ExperimentConfig::eps_list)
      .def_readwrite("eps1", &ExperimentConfig::eps1)
      .def_readwrite("eps2", &ExperimentConfig::eps2)
      .def_readwrite("rho0", &ExperimentConfig::rho0)
      .def_readwrite("rho_amp", &ExperimentConfig::rho_amp)
      .def_readwrite("v_amp", &ExperimentConfig::v_amp)
      .def_readwrite("wave", &ExperimentConfig::wave)
      .def_readwrite("phase", &ExperimentConfig::phase)
      .def_readwrite("t_end", &ExperimentConfig::t_end)
      .def_readwrite("snapshots", &ExperimentConfig::snapshots)
      .def_readwrite("cfl", &ExperimentConfig::cfl)
      .def_readwrite("norm_order", &ExperimentConfig::norm_order)
      .def_readwrite("threads", &ExperimentConfig::threads);

  m.def("pressure", &pressure, py::arg("rho"), py::arg("params"));
  m.def("pressure_deriv", &pressure_deriv, py::arg("rho"), py::arg("params"));
  m.def("phi", &phi, py::arg("rho"), py::arg("params"),
        "pressure potential rho * int_1^rho p(z)/z^2 dz");
  m.def("entropy", &entropy, py::arg("state"), py::arg("params"));
  m.def("entropy_flux", &entropy_flux, py::arg("state"), py::arg("params"));
  m.def("dissipation_rate", &dissipation_rate, py::arg("state"), py::arg("params"));
  m.def("dev_sym", &dev_sym, py::arg("grad"),
        "traceless symmetric part of a velocity gradient");
  m.def("flux", &flux, py::arg("state"), py::arg("axis"), py::arg("params"),
        py::arg("with_coupling") = true);
  m.def("max_wavespeed", &max_wavespeed, py::arg("state"), py::arg("params"),
        py::arg("with_coupling") = true);
  m.def(
      "relax_source_exact",
      [](const SymTraceless3& tau1, double tau2, double dt, const PhysParams& p) {
        SymTraceless3 t1 = tau1;
        double t2 = tau2;
        relax_source_exact(t1, t2, dt, p);
        return py::make_tuple(t1, t2);
      },
      py::arg("tau1"), py::arg("tau2"), py::arg("dt"), py::arg("params"));
  m.def("discrete_norm", &discrete_norm, py::arg("values"), py::arg("grid"),
        py::arg("order"));
  m.def("fit_rate", &fit_rate, py::arg("points_eps_err"));
  m.def("parse_config", &parse_or_throw, py::arg("text"));
  m.def("simulate", &run_simulate, py::arg("config"),
        "run the relaxation solver on the configured experiment");
  m.def("compare", &run_compare, py::arg("config"),
        "error series of the relaxation run against the reference solver");
  m.def("sweep", &run_sweep, py::arg("config"),
        "sweep the relaxation scales and fit the convergence slope");
  m.def("check_structure", &run_check, py::arg("samples"), py::arg("seed"),
        py::arg("params"), py::arg("tol") = 1e-9, py::arg("corrupt") = 0.0,
        "certify the entropy structure identities on random states");
}
