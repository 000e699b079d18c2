#include "relaxflow/system.hpp"

#include <algorithm>

namespace relaxflow {

namespace {

constexpr double k23 = 2.0 / 3.0;
constexpr double k43 = 4.0 / 3.0;

// tau-block flux coefficients per axis; see tau_flux_coeff.
constexpr GCoeff kGx = {{{k43, 0, 0},   // xx: (4/3) vx
                         {-k23, 0, 0},  // yy: -(2/3) vx
                         {0, 1, 0},     // xy: vy
                         {0, 0, 1},     // xz: vz
                         {0, 0, 0},     // yz: -
                         {1, 0, 0}}};   // tau2: vx

constexpr GCoeff kGy = {{{0, -k23, 0},
                         {0, k43, 0},
                         {1, 0, 0},
                         {0, 0, 0},
                         {0, 0, 1},
                         {0, 1, 0}}};

constexpr GCoeff kGz = {{{0, 0, -k23},
                         {0, 0, -k23},
                         {0, 0, 0},
                         {1, 0, 0},
                         {0, 1, 0},
                         {0, 0, 1}}};

// Momentum rows pick out tau1_{i,axis}; the packed zz entry makes the z-row
// of the z block (-xx - yy).
constexpr CouplingBlock kCx = {{{0, 0, 0, 0, 0, 0},
                                {1, 0, 0, 0, 0, 1},
                                {0, 0, 1, 0, 0, 0},
                                {0, 0, 0, 1, 0, 0}}};

constexpr CouplingBlock kCy = {{{0, 0, 0, 0, 0, 0},
                                {0, 0, 1, 0, 0, 0},
                                {0, 1, 0, 0, 0, 1},
                                {0, 0, 0, 0, 1, 0}}};

constexpr CouplingBlock kCz = {{{0, 0, 0, 0, 0, 0},
                                {0, 0, 0, 1, 0, 0},
                                {0, 0, 0, 0, 1, 0},
                                {-1, -1, 0, 0, 0, 1}}};

void check_axis(int axis) {
  if (axis < 0 || axis > 2) throw std::out_of_range("axis must be 0, 1, or 2");
}

void matvec(const Mat10Flat& m, const StateVec& x, StateVec& y) {
  for (int r = 0; r < kNVar; ++r) {
    double acc = 0.0;
    for (int c = 0; c < kNVar; ++c) acc += m[r * kNVar + c] * x[c];
    y[r] = acc;
  }
}

/// Largest |eigenvalue| bound of M by power iteration on M^2.  M^2 keeps the
/// dominant +/- speed pair from cancelling.  The matrix is similar to a
/// symmetric one, so its spectrum is real and the iteration is well behaved.
double power_bound(const Mat10Flat& m) {
  StateVec x;
  for (int i = 0; i < kNVar; ++i) x[i] = 1.0 - 0.05 * i;  // fixed start
  double nx = 0.0;
  for (double c : x) nx += c * c;
  nx = std::sqrt(nx);
  for (double& c : x) c /= nx;

  double est = 0.0;
  StateVec y, z;
  for (int it = 0; it < 48; ++it) {
    matvec(m, x, y);
    matvec(m, y, z);
    double nz = 0.0;
    for (double c : z) nz += c * c;
    nz = std::sqrt(nz);
    if (nz == 0.0) return 0.0;  // start vector in the kernel of M^2
    const double prev = est;
    est = nz;  // |x| = 1, so |M^2 x| estimates the top eigenvalue of M^2
    for (int i = 0; i < kNVar; ++i) x[i] = z[i] / nz;
    if (it >= 3 && std::abs(est - prev) <= 1e-3 * std::max(est, 1.0)) break;
  }
  return std::sqrt(est);
}

constexpr double kSpeedSafety = 1.2;

}  // namespace

const GCoeff& tau_flux_coeff(int axis) {
  check_axis(axis);
  static const std::array<GCoeff, 3> tables = {kGx, kGy, kGz};
  return tables[axis];
}

const CouplingBlock& coupling_block(int axis) {
  check_axis(axis);
  static const std::array<CouplingBlock, 3> tables = {kCx, kCy, kCz};
  return tables[axis];
}

StateVec flux(const RelaxState& s, int axis, const PhysParams& p,
              bool with_coupling) {
  check_axis(axis);
  const Vec3 v = s.velocity();
  const double pr = pressure(s.rho, p);
  StateVec f{};

  f[kIR] = s.mom[axis];
  for (int i = 0; i < 3; ++i)
    f[kIM + i] = s.mom[i] * v[axis] + (i == axis ? pr : 0.0);

  if (!with_coupling) return f;

  const CouplingBlock& C = coupling_block(axis);
  const StateVec u = to_array(s);
  for (int i = 0; i < 3; ++i) {
    double acc = 0.0;
    for (int c = 0; c < 5; ++c) acc += C[1 + i][c] * u[kIT + c] / p.eps1;
    acc += C[1 + i][5] * s.tau2 / p.eps2;
    f[kIM + i] += acc;
  }

  const GCoeff& G = tau_flux_coeff(axis);
  for (int r = 0; r < 5; ++r)
    f[kIT + r] = (G[r][0] * v[0] + G[r][1] * v[1] + G[r][2] * v[2]) / p.eps1;
  f[kITau2] = (G[5][0] * v[0] + G[5][1] * v[1] + G[5][2] * v[2]) / p.eps2;
  return f;
}

void relax_source_exact(SymTraceless3& tau1, double& tau2, double dt,
                        const PhysParams& p) {
  tau1 *= std::exp(-dt / (p.nu * p.eps1 * p.eps1));
  tau2 *= std::exp(-dt / (p.kappa * p.eps2 * p.eps2));
}

Mat10Flat quasi_jacobian(const RelaxState& s, const Vec3& dir,
                         const PhysParams& p, bool with_coupling) {
  Mat10Flat m{};
  const Vec3 v = s.velocity();
  const double dp = pressure_deriv(s.rho, p);

  auto at = [&m](int r, int c) -> double& { return m[r * kNVar + c]; };

  for (int axis = 0; axis < 3; ++axis) {
    const double w = dir[axis];
    if (w == 0.0) continue;

    // Convective block d(m_i v_axis + p d_i,axis)/d(rho, m).
    at(kIR, kIM + axis) += w;
    for (int i = 0; i < 3; ++i) {
      at(kIM + i, kIR) += w * (-v[i] * v[axis] + (i == axis ? dp : 0.0));
      at(kIM + i, kIM + axis) += w * v[i];
      at(kIM + i, kIM + i) += w * v[axis];
    }

    if (!with_coupling) continue;

    // Stress contribution to the momentum flux: constant in the state.
    const CouplingBlock& C = coupling_block(axis);
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 5; ++c) at(kIM + i, kIT + c) += w * C[1 + i][c] / p.eps1;
      at(kIM + i, kITau2) += w * C[1 + i][5] / p.eps2;
    }

    // tau-block flux depends on the state only through v = m/rho:
    // dv_a/drho = -v_a/rho, dv_a/dm_b = d_ab/rho.
    const GCoeff& G = tau_flux_coeff(axis);
    for (int r = 0; r < 6; ++r) {
      const double eps = (r < 5) ? p.eps1 : p.eps2;
      const int row = (r < 5) ? kIT + r : kITau2;
      double drho = 0.0;
      for (int a = 0; a < 3; ++a) {
        if (G[r][a] == 0.0) continue;
        drho += G[r][a] * (-v[a] / s.rho);
        at(row, kIM + a) += w * G[r][a] / (s.rho * eps);
      }
      at(row, kIR) += w * drho / eps;
    }
  }
  return m;
}

double max_wavespeed_axis(const RelaxState& s, int axis, const PhysParams& p,
                          bool with_coupling) {
  Vec3 dir = {0.0, 0.0, 0.0};
  dir[axis] = 1.0;
  return kSpeedSafety * power_bound(quasi_jacobian(s, dir, p, with_coupling));
}

double max_wavespeed(const RelaxState& s, const PhysParams& p,
                     bool with_coupling) {
  double best = 0.0;
  for (int axis = 0; axis < 3; ++axis) {
    Vec3 dir = {0.0, 0.0, 0.0};
    dir[axis] = 1.0;
    best = std::max(best, power_bound(quasi_jacobian(s, dir, p, with_coupling)));
  }
  // The flow direction can beat every axis (convective speeds add up there),
  // so probe it as well whenever it is meaningful.
  const Vec3 v = s.velocity();
  const double vn = norm(v);
  if (vn > 1e-14) {
    const Vec3 dir = {v[0] / vn, v[1] / vn, v[2] / vn};
    best = std::max(best, power_bound(quasi_jacobian(s, dir, p, with_coupling)));
  }
  return kSpeedSafety * best;
}

}  // namespace relaxflow
