#include "relaxflow/structure.hpp"

#include <limits>
#include <random>

namespace relaxflow {

Mat4 flux_jacobian(const RelaxState& s, int axis, const PhysParams& p) {
  Mat4 a = Mat4::Zero();
  const Vec3 v = s.velocity();
  const double dp = pressure_deriv(s.rho, p);
  a(0, 1 + axis) = 1.0;
  for (int i = 0; i < 3; ++i) {
    a(1 + i, 0) = -v[i] * v[axis] + (i == axis ? dp : 0.0);
    a(1 + i, 1 + axis) += v[i];
    a(1 + i, 1 + i) += v[axis];
  }
  return a;
}

Mat64 source_flux_jacobian(const RelaxState& s, int axis) {
  Mat64 b = Mat64::Zero();
  const Vec3 v = s.velocity();
  const GCoeff& g = tau_flux_coeff(axis);
  for (int r = 0; r < 6; ++r) {
    for (int a = 0; a < 3; ++a) {
      if (g[r][a] == 0.0) continue;
      b(r, 0) += g[r][a] * (-v[a] / s.rho);
      b(r, 1 + a) += g[r][a] / s.rho;
    }
  }
  return b;
}

Mat46 coupling_matrix(int axis) {
  Mat46 c = Mat46::Zero();
  const CouplingBlock& tab = coupling_block(axis);
  for (int r = 0; r < 4; ++r)
    for (int j = 0; j < 6; ++j) c(r, j) = tab[r][j];
  return c;
}

Mat4 entropy_hessian_w(const RelaxState& s, const PhysParams& p) {
  const Vec3 v = s.velocity();
  const double f = 4.0 / s.rho;
  Mat4 h;
  h(0, 0) = f * (pressure_deriv(s.rho, p) + norm_sq(v));
  for (int i = 0; i < 3; ++i) {
    h(0, 1 + i) = -f * v[i];
    h(1 + i, 0) = -f * v[i];
    for (int j = 0; j < 3; ++j) h(1 + i, 1 + j) = (i == j) ? f : 0.0;
  }
  return h;
}

Mat6 entropy_hessian_z() {
  Mat6 h = 4.0 * Mat6::Identity();
  // |tau1|^2 in packed coordinates is 2(xx^2 + yy^2 + xx yy) + 2(xy^2 + ...),
  // so the xx/yy corner carries the cross term.
  h(0, 1) = 2.0;
  h(1, 0) = 2.0;
  return h;
}

Mat10 entropy_hessian(const RelaxState& s, const PhysParams& p) {
  Mat10 h = Mat10::Zero();
  h.topLeftCorner<4, 4>() = entropy_hessian_w(s, p);
  h.bottomRightCorner<6, 6>() = entropy_hessian_z();
  return h;
}

Mat10 assemble(const RelaxState& s, const Vec3& dir, const PhysParams& p,
               bool with_coupling) {
  const Mat10Flat flat = quasi_jacobian(s, dir, p, with_coupling);
  Mat10 m;
  for (int r = 0; r < kNVar; ++r)
    for (int c = 0; c < kNVar; ++c) m(r, c) = flat[r * kNVar + c];
  return m;
}

StructureReport check_structure(const std::vector<RelaxState>& states,
                                const PhysParams& p,
                                const StructureCheckOptions& opt) {
  StructureReport rep;
  rep.tol = opt.tol;
  rep.samples.reserve(states.size());
  rep.worst_min_eig = std::numeric_limits<double>::infinity();

  const Mat6 hz = entropy_hessian_z();
  for (const RelaxState& s : states) {
    StructureSample sample;
    sample.state = s;

    Eigen::SelfAdjointEigenSolver<Mat10> eig(entropy_hessian(s, p));
    sample.hessian_min_eig = eig.eigenvalues().minCoeff();

    const Mat4 hw = entropy_hessian_w(s, p);
    for (int axis = 0; axis < 3; ++axis) {
      const Mat4 ha = hw * flux_jacobian(s, axis, p);
      sample.symmetry_residual =
          std::max(sample.symmetry_residual, (ha - ha.transpose()).norm());

      Mat46 c = coupling_matrix(axis);
      c(1, 0) += opt.coupling_perturbation;
      const Mat64 b = source_flux_jacobian(s, axis);
      sample.coupling_residual =
          std::max(sample.coupling_residual, (hw * c - b.transpose() * hz).norm());
    }

    rep.worst_min_eig = std::min(rep.worst_min_eig, sample.hessian_min_eig);
    rep.worst_symmetry = std::max(rep.worst_symmetry, sample.symmetry_residual);
    rep.worst_coupling = std::max(rep.worst_coupling, sample.coupling_residual);
    rep.samples.push_back(sample);
  }

  rep.pass = !rep.samples.empty() && rep.worst_min_eig > 0.0 &&
             rep.worst_symmetry <= opt.tol && rep.worst_coupling <= opt.tol;
  return rep;
}

std::vector<RelaxState> sample_states(int count, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  // Explicit affine map of the 53-bit mantissa draw; avoids the distribution
  // classes so the sample set is reproducible across standard libraries.
  auto uniform = [&rng](double lo, double hi) {
    const double u = double(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  };

  std::vector<RelaxState> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    RelaxState s;
    s.rho = uniform(0.5, 2.0);
    Vec3 v;
    do {
      v = {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    } while (norm_sq(v) > 1.0);
    s.mom = {s.rho * v[0], s.rho * v[1], s.rho * v[2]};
    s.tau1 = {uniform(-1.0, 1.0), uniform(-1.0, 1.0), uniform(-1.0, 1.0),
              uniform(-1.0, 1.0), uniform(-1.0, 1.0)};
    s.tau2 = uniform(-1.0, 1.0);
    out.push_back(s);
  }
  return out;
}

}  // namespace relaxflow
