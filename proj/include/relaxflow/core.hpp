#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace relaxflow {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline double norm_sq(const Vec3& a) { return dot(a, a); }

inline double norm(const Vec3& a) { return std::sqrt(norm_sq(a)); }

/// Fluid and relaxation parameters.  The pressure law is p(rho) = A rho^gamma
/// with A > 0 and gamma > 1, so p' > 0 on the admissible set rho > 0.
struct PhysParams {
  double nu = 1.0;         // shear viscosity (shear relaxation damping)
  double kappa = 1.0;      // bulk viscosity (bulk relaxation damping)
  double eps1 = 0.1;       // shear stress relaxation scale
  double eps2 = 0.1;       // bulk stress relaxation scale
  double eos_A = 1.0;      // pressure coefficient
  double eos_gamma = 2.0;  // pressure exponent

  bool valid() const {
    return nu > 0.0 && kappa > 0.0 && eps1 > 0.0 && eps2 > 0.0 &&
           eos_A > 0.0 && eos_gamma > 1.0;
  }
};

/// Symmetric traceless rank-2 tensor in three dimensions, stored as the five
/// independent components (xx, yy, xy, xz, yz).  The zz entry is implied:
/// zz = -xx - yy, so the trace vanishes by representation, not by arithmetic.
struct SymTraceless3 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;
  double xz = 0.0;
  double yz = 0.0;

  double zz() const { return -xx - yy; }

  /// Entry (i, j) of the full tensor, i, j in {0, 1, 2}.
  double entry(int i, int j) const {
    switch (i * 3 + j) {
      case 0: return xx;
      case 4: return yy;
      case 8: return zz();
      case 1: case 3: return xy;
      case 2: case 6: return xz;
      case 5: case 7: return yz;
    }
    throw std::out_of_range("SymTraceless3::entry");
  }

  Mat3 to_matrix() const {
    return {{{xx, xy, xz}, {xy, yy, yz}, {xz, yz, zz()}}};
  }

  /// Squared Frobenius norm of the full 3x3 tensor.
  double frobenius_sq() const {
    const double tzz = zz();
    return xx * xx + yy * yy + tzz * tzz + 2.0 * (xy * xy + xz * xz + yz * yz);
  }

  /// Matrix-vector product tau * v.
  Vec3 apply(const Vec3& v) const {
    return {xx * v[0] + xy * v[1] + xz * v[2],
            xy * v[0] + yy * v[1] + yz * v[2],
            xz * v[0] + yz * v[1] + zz() * v[2]};
  }

  SymTraceless3& operator+=(const SymTraceless3& o) {
    xx += o.xx; yy += o.yy; xy += o.xy; xz += o.xz; yz += o.yz;
    return *this;
  }
  SymTraceless3& operator*=(double s) {
    xx *= s; yy *= s; xy *= s; xz *= s; yz *= s;
    return *this;
  }
  friend SymTraceless3 operator+(SymTraceless3 a, const SymTraceless3& b) { return a += b; }
  friend SymTraceless3 operator*(double s, SymTraceless3 a) { return a *= s; }
  friend SymTraceless3 operator-(SymTraceless3 a, const SymTraceless3& b) {
    a.xx -= b.xx; a.yy -= b.yy; a.xy -= b.xy; a.xz -= b.xz; a.yz -= b.yz;
    return a;
  }
};

/// Traceless symmetric part of a velocity gradient: G + G^T - (2/3) tr(G) I.
inline SymTraceless3 dev_sym(const Mat3& g) {
  const double tr23 = (2.0 / 3.0) * (g[0][0] + g[1][1] + g[2][2]);
  SymTraceless3 t;
  t.xx = 2.0 * g[0][0] - tr23;
  t.yy = 2.0 * g[1][1] - tr23;
  t.xy = g[0][1] + g[1][0];
  t.xz = g[0][2] + g[2][0];
  t.yz = g[1][2] + g[2][1];
  return t;
}

/// Full state of the relaxation system: density, momentum, and the two
/// relaxation stresses.  Ten scalar degrees of freedom per cell.
struct RelaxState {
  double rho = 1.0;
  Vec3 mom = {0.0, 0.0, 0.0};
  SymTraceless3 tau1;
  double tau2 = 0.0;

  Vec3 velocity() const { return {mom[0] / rho, mom[1] / rho, mom[2] / rho}; }
};

/// State of the reference fluid solver: density and momentum only.
struct NSState {
  double rho = 1.0;
  Vec3 mom = {0.0, 0.0, 0.0};

  Vec3 velocity() const { return {mom[0] / rho, mom[1] / rho, mom[2] / rho}; }
};

// Component indices of the flattened relaxation state.  The flattened layout
// is shared by the fluxes, the quasilinear matrices, and the entropy Hessian,
// so it must stay consistent everywhere.
inline constexpr int kIR = 0;     // density
inline constexpr int kIM = 1;     // momentum x, y, z = 1, 2, 3
inline constexpr int kIT = 4;     // tau1 components xx, yy, xy, xz, yz = 4..8
inline constexpr int kITau2 = 9;  // bulk stress
inline constexpr int kNVar = 10;

using StateVec = std::array<double, kNVar>;

inline StateVec to_array(const RelaxState& s) {
  return {s.rho, s.mom[0], s.mom[1], s.mom[2],
          s.tau1.xx, s.tau1.yy, s.tau1.xy, s.tau1.xz, s.tau1.yz, s.tau2};
}

inline RelaxState from_array(const StateVec& a) {
  RelaxState s;
  s.rho = a[kIR];
  s.mom = {a[kIM], a[kIM + 1], a[kIM + 2]};
  s.tau1 = {a[kIT], a[kIT + 1], a[kIT + 2], a[kIT + 3], a[kIT + 4]};
  s.tau2 = a[kITau2];
  return s;
}

/// Uniform periodic grid on the unit box [0,1]^dim.  Inactive axes have one
/// cell, so a single index formula covers one, two, and three dimensions.
struct Grid {
  int dim = 1;
  std::array<int, 3> cells = {1, 1, 1};
  std::array<double, 3> dx = {1.0, 1.0, 1.0};

  Grid() = default;
  Grid(int dim_, std::array<int, 3> cells_) : dim(dim_), cells(cells_) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid dim must be 1, 2, or 3");
    for (int a = 0; a < 3; ++a) {
      if (a < dim) {
        if (cells[a] < 4) throw std::invalid_argument("active axis needs at least 4 cells");
      } else {
        cells[a] = 1;
      }
      dx[a] = 1.0 / cells[a];
    }
  }

  std::size_t size() const {
    return std::size_t(cells[0]) * cells[1] * cells[2];
  }

  // Row-major with x fastest: linear = (k * ny + j) * nx + i.
  std::size_t index(int i, int j, int k) const {
    return (std::size_t(k) * cells[1] + j) * cells[0] + i;
  }

  std::size_t wrap_index(int i, int j, int k) const {
    i = mod(i, cells[0]);
    j = mod(j, cells[1]);
    k = mod(k, cells[2]);
    return index(i, j, k);
  }

  /// Neighbor of linear cell `c` shifted by `shift` cells along `axis`.
  std::size_t neighbor(std::size_t c, int axis, int shift) const {
    const int nx = cells[0], ny = cells[1];
    int i = int(c % nx);
    int j = int((c / nx) % ny);
    int k = int(c / (std::size_t(nx) * ny));
    if (axis == 0) i = mod(i + shift, nx);
    else if (axis == 1) j = mod(j + shift, ny);
    else k = mod(k + shift, cells[2]);
    return index(i, j, k);
  }

  Vec3 center(int i, int j, int k) const {
    return {(i + 0.5) * dx[0], (j + 0.5) * dx[1], (k + 0.5) * dx[2]};
  }

  double cell_volume() const { return dx[0] * dx[1] * dx[2]; }

  bool operator==(const Grid& o) const {
    return dim == o.dim && cells == o.cells;
  }

 private:
  static int mod(int a, int n) {
    const int r = a % n;
    return r < 0 ? r + n : r;
  }
};

struct RelaxField {
  Grid grid;
  std::vector<RelaxState> cells;

  static RelaxField uniform(const Grid& g, const RelaxState& s = RelaxState{}) {
    return {g, std::vector<RelaxState>(g.size(), s)};
  }
};

struct NSField {
  Grid grid;
  std::vector<NSState> cells;
  // Stress closures evaluated from the velocity field; sized like `cells`
  // once attached, empty otherwise.
  std::vector<SymTraceless3> tau1_ce;
  std::vector<double> tau2_ce;

  static NSField uniform(const Grid& g, const NSState& s = NSState{}) {
    return {g, std::vector<NSState>(g.size(), s), {}, {}};
  }
};

/// A single out-of-range field entry, located by cell.
struct Violation {
  std::size_t cell = 0;
  std::string what;   // which quantity failed
  double value = 0.0;

  std::string message() const {
    return what + " = " + std::to_string(value) + " at cell " + std::to_string(cell);
  }
};

/// Admissibility of one state: density must sit strictly above the floor and
/// every component must be finite.
std::optional<Violation> validate_state(const RelaxState& s, double floor);
std::optional<Violation> validate_state(const NSState& s, double floor);

std::optional<Violation> validate_field(const RelaxField& f, double floor);
std::optional<Violation> validate_field(const NSField& f, double floor);

}  // namespace relaxflow
