#include "relaxflow/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace relaxflow {

namespace {

constexpr const char* kRelaxFields =
    "rho mx my mz tau1_xx tau1_yy tau1_xy tau1_xz tau1_yz tau2";
constexpr const char* kNSFields =
    "rho mx my mz tau1_ce_xx tau1_ce_yy tau1_ce_xy tau1_ce_xz tau1_ce_yz tau2_ce";

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

void write_header(std::ofstream& out, const char* kind, const Grid& g,
                  double time, const PhysParams& p, const char* fields) {
  out << "relaxflow-snapshot\n";
  out << "kind = " << kind << "\n";
  out << "dim = " << g.dim << "\n";
  out << "cells = " << g.cells[0] << " " << g.cells[1] << " " << g.cells[2] << "\n";
  out << "dx = " << format_g17(g.dx[0]) << " " << format_g17(g.dx[1]) << " "
      << format_g17(g.dx[2]) << "\n";
  out << "time = " << format_g17(time) << "\n";
  out << "params = " << format_g17(p.nu) << " " << format_g17(p.kappa) << " "
      << format_g17(p.eps1) << " " << format_g17(p.eps2) << " "
      << format_g17(p.eos_A) << " " << format_g17(p.eos_gamma) << "\n";
  out << "fields = " << fields << "\n";
  out << "format = float64-le\n";
  out << "end_header\n";
}

void write_array(std::ofstream& out, const std::vector<double>& a) {
  out.write(reinterpret_cast<const char*>(a.data()),
            std::streamsize(a.size() * sizeof(double)));
}

struct Header {
  std::string kind;
  Grid grid;
  double time = 0.0;
  PhysParams params;
  std::vector<std::string> fields;
};

Header read_header(std::ifstream& in, const std::string& path) {
  auto fail = [&path](const std::string& why) -> Header {
    throw std::runtime_error(path + ": " + why);
  };

  std::string line;
  if (!std::getline(in, line) || line != "relaxflow-snapshot")
    return fail("not a snapshot file");

  Header h;
  int dim = 0;
  std::array<int, 3> cells = {1, 1, 1};
  bool have_format = false;
  while (std::getline(in, line)) {
    if (line == "end_header") {
      if (h.kind.empty() || dim == 0 || h.fields.empty() || !have_format)
        return fail("incomplete snapshot header");
      h.grid = Grid(dim, cells);
      return h;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) return fail("malformed header line: " + line);
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = (b == std::string::npos) ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    std::istringstream vs(value);
    if (key == "kind") {
      h.kind = value;
    } else if (key == "dim") {
      vs >> dim;
    } else if (key == "cells") {
      vs >> cells[0] >> cells[1] >> cells[2];
    } else if (key == "dx") {
      // implied by cells; parsed for the record but not trusted
      double ignore;
      vs >> ignore;
    } else if (key == "time") {
      vs >> h.time;
    } else if (key == "params") {
      vs >> h.params.nu >> h.params.kappa >> h.params.eps1 >> h.params.eps2 >>
          h.params.eos_A >> h.params.eos_gamma;
    } else if (key == "fields") {
      std::string f;
      while (vs >> f) h.fields.push_back(f);
    } else if (key == "format") {
      if (value != "float64-le") return fail("unsupported format: " + value);
      have_format = true;
    } else {
      return fail("unknown header key: " + key);
    }
  }
  return fail("missing end_header");
}

std::vector<double> read_array(std::ifstream& in, std::size_t n,
                               const std::string& path) {
  std::vector<double> a(n);
  in.read(reinterpret_cast<char*>(a.data()), std::streamsize(n * sizeof(double)));
  if (std::size_t(in.gcount()) != n * sizeof(double))
    throw std::runtime_error(path + ": truncated data section");
  return a;
}

}  // namespace

std::string format_g17(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_relax_csv(const std::string& path, const RelaxField& f) {
  if (f.grid.dim != 1)
    throw std::invalid_argument("csv snapshots are one-dimensional");
  std::ofstream out = open_out(path, false);
  out << "x,rho,mx,my,mz,tau1_xx,tau1_yy,tau1_xy,tau1_xz,tau1_yz,tau2\n";
  for (int i = 0; i < f.grid.cells[0]; ++i) {
    const RelaxState& s = f.cells[f.grid.index(i, 0, 0)];
    out << format_g17(f.grid.center(i, 0, 0)[0]) << ',' << format_g17(s.rho)
        << ',' << format_g17(s.mom[0]) << ',' << format_g17(s.mom[1]) << ','
        << format_g17(s.mom[2]) << ',' << format_g17(s.tau1.xx) << ','
        << format_g17(s.tau1.yy) << ',' << format_g17(s.tau1.xy) << ','
        << format_g17(s.tau1.xz) << ',' << format_g17(s.tau1.yz) << ','
        << format_g17(s.tau2) << '\n';
  }
}

void write_ns_csv(const std::string& path, const NSField& f) {
  if (f.grid.dim != 1)
    throw std::invalid_argument("csv snapshots are one-dimensional");
  if (f.tau1_ce.size() != f.cells.size())
    throw std::invalid_argument("field lacks closure stresses");
  std::ofstream out = open_out(path, false);
  out << "x,rho,mx,my,mz,tau1_ce_xx,tau1_ce_yy,tau1_ce_xy,tau1_ce_xz,"
         "tau1_ce_yz,tau2_ce\n";
  for (int i = 0; i < f.grid.cells[0]; ++i) {
    const std::size_t c = f.grid.index(i, 0, 0);
    const NSState& s = f.cells[c];
    const SymTraceless3& t = f.tau1_ce[c];
    out << format_g17(f.grid.center(i, 0, 0)[0]) << ',' << format_g17(s.rho)
        << ',' << format_g17(s.mom[0]) << ',' << format_g17(s.mom[1]) << ','
        << format_g17(s.mom[2]) << ',' << format_g17(t.xx) << ','
        << format_g17(t.yy) << ',' << format_g17(t.xy) << ','
        << format_g17(t.xz) << ',' << format_g17(t.yz) << ','
        << format_g17(f.tau2_ce[c]) << '\n';
  }
}

void write_relax_snapshot(const std::string& path, const RelaxField& f,
                          double time, const PhysParams& p) {
  std::ofstream out = open_out(path, true);
  write_header(out, "relax", f.grid, time, p, kRelaxFields);
  const std::size_t n = f.cells.size();
  std::vector<double> a(n);
  for (int comp = 0; comp < kNVar; ++comp) {
    for (std::size_t c = 0; c < n; ++c) a[c] = to_array(f.cells[c])[comp];
    write_array(out, a);
  }
}

void write_ns_snapshot(const std::string& path, const NSField& f, double time,
                       const PhysParams& p) {
  if (f.tau1_ce.size() != f.cells.size())
    throw std::invalid_argument("field lacks closure stresses");
  std::ofstream out = open_out(path, true);
  write_header(out, "ns", f.grid, time, p, kNSFields);
  const std::size_t n = f.cells.size();
  std::vector<double> a(n);
  auto emit = [&](auto getter) {
    for (std::size_t c = 0; c < n; ++c) a[c] = getter(c);
    write_array(out, a);
  };
  emit([&](std::size_t c) { return f.cells[c].rho; });
  for (int i = 0; i < 3; ++i)
    emit([&, i](std::size_t c) { return f.cells[c].mom[i]; });
  emit([&](std::size_t c) { return f.tau1_ce[c].xx; });
  emit([&](std::size_t c) { return f.tau1_ce[c].yy; });
  emit([&](std::size_t c) { return f.tau1_ce[c].xy; });
  emit([&](std::size_t c) { return f.tau1_ce[c].xz; });
  emit([&](std::size_t c) { return f.tau1_ce[c].yz; });
  emit([&](std::size_t c) { return f.tau2_ce[c]; });
}

RelaxSnapshot read_relax_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const Header h = read_header(in, path);
  if (h.kind != "relax") throw std::runtime_error(path + ": not a relax snapshot");
  if (h.fields.size() != std::size_t(kNVar))
    throw std::runtime_error(path + ": unexpected field list");

  RelaxSnapshot snap;
  snap.time = h.time;
  snap.params = h.params;
  snap.field.grid = h.grid;
  const std::size_t n = h.grid.size();
  snap.field.cells.resize(n);
  std::vector<StateVec> u(n);
  for (int comp = 0; comp < kNVar; ++comp) {
    const std::vector<double> a = read_array(in, n, path);
    for (std::size_t c = 0; c < n; ++c) u[c][comp] = a[c];
  }
  for (std::size_t c = 0; c < n; ++c) snap.field.cells[c] = from_array(u[c]);
  return snap;
}

NSSnapshot read_ns_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  const Header h = read_header(in, path);
  if (h.kind != "ns") throw std::runtime_error(path + ": not an ns snapshot");
  if (h.fields.size() != 10)
    throw std::runtime_error(path + ": unexpected field list");

  NSSnapshot snap;
  snap.time = h.time;
  snap.params = h.params;
  snap.field.grid = h.grid;
  const std::size_t n = h.grid.size();
  snap.field.cells.resize(n);
  snap.field.tau1_ce.resize(n);
  snap.field.tau2_ce.resize(n);
  std::array<std::vector<double>, 10> cols;
  for (auto& col : cols) col = read_array(in, n, path);
  for (std::size_t c = 0; c < n; ++c) {
    snap.field.cells[c].rho = cols[0][c];
    snap.field.cells[c].mom = {cols[1][c], cols[2][c], cols[3][c]};
    snap.field.tau1_ce[c] = {cols[4][c], cols[5][c], cols[6][c], cols[7][c],
                             cols[8][c]};
    snap.field.tau2_ce[c] = cols[9][c];
  }
  return snap;
}

void write_error_csv(const std::string& path, const ErrorSeries& series) {
  std::ofstream out = open_out(path, false);
  out << "epsilon,time,err_rho,err_mom,err_tau1,err_tau2,err_total\n";
  for (const ErrorRow& r : series.rows)
    out << format_g17(r.epsilon) << ',' << format_g17(r.time) << ','
        << format_g17(r.err_rho) << ',' << format_g17(r.err_mom) << ','
        << format_g17(r.err_tau1) << ',' << format_g17(r.err_tau2) << ','
        << format_g17(r.err_total) << '\n';
}

void write_rate_csv(const std::string& path, const RateFit& fit) {
  std::ofstream out = open_out(path, false);
  out << "epsilon,sup_error,slope,intercept,fit_residual\n";
  for (const RatePoint& p : fit.points)
    out << format_g17(p.epsilon) << ',' << format_g17(p.sup_error) << ','
        << format_g17(fit.slope) << ',' << format_g17(fit.intercept) << ','
        << format_g17(fit.fit_residual) << '\n';
}

void write_entropy_csv(const std::string& path, const RelaxTrajectory& traj) {
  std::ofstream out = open_out(path, false);
  out << "time,entropy,dissipation\n";
  for (std::size_t n = 0; n < traj.step_times.size(); ++n)
    out << format_g17(traj.step_times[n]) << ','
        << format_g17(traj.entropy_history[n]) << ','
        << format_g17(traj.dissipation_history[n]) << '\n';
}

void write_structure_csv(const std::string& path, const StructureReport& rep) {
  std::ofstream out = open_out(path, false);
  out << "sample,rho,vx,vy,vz,tau1_xx,tau1_yy,tau1_xy,tau1_xz,tau1_yz,tau2,"
         "hessian_min_eig,symmetry_residual,coupling_residual\n";
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const StructureSample& s = rep.samples[i];
    const Vec3 v = s.state.velocity();
    out << i << ',' << format_g17(s.state.rho) << ',' << format_g17(v[0])
        << ',' << format_g17(v[1]) << ',' << format_g17(v[2]) << ','
        << format_g17(s.state.tau1.xx) << ',' << format_g17(s.state.tau1.yy)
        << ',' << format_g17(s.state.tau1.xy) << ','
        << format_g17(s.state.tau1.xz) << ',' << format_g17(s.state.tau1.yz)
        << ',' << format_g17(s.state.tau2) << ','
        << format_g17(s.hessian_min_eig) << ','
        << format_g17(s.symmetry_residual) << ','
        << format_g17(s.coupling_residual) << '\n';
  }
}

}  // namespace relaxflow
