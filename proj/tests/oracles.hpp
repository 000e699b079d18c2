#pragma once

// Independent cross-checks used by the tests: plain quadrature, centered
// finite differences, the dense QR eigensolver, and a fixed-step ODE
// integrator.  None of these share code with the library paths they certify.

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace oracles {

using ScalarFn = std::function<double(double)>;

inline double simpson_slice(double a, double b, double fa, double fm,
                            double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(const ScalarFn& f, double a, double b, double fa,
                    double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double flm = f(0.5 * (a + m));
  const double frm = f(0.5 * (m + b));
  const double left = simpson_slice(a, m, fa, flm, fm);
  const double right = simpson_slice(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance `tol`.
inline double integrate(const ScalarFn& f, double a, double b, double tol) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return adapt(f, a, b, fa, fm, fb, simpson_slice(a, b, fa, fm, fb), tol, 48);
}

using VectorFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// Centered-difference Jacobian of a vector map.
inline Eigen::MatrixXd fd_jacobian(const VectorFn& F, const Eigen::VectorXd& x,
                                   double h) {
  const Eigen::VectorXd f0 = F(x);
  Eigen::MatrixXd J(f0.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp[j] += h;
    xm[j] -= h;
    J.col(j) = (F(xp) - F(xm)) / (2.0 * h);
  }
  return J;
}

/// Centered-difference Hessian of a scalar function.
inline Eigen::MatrixXd fd_hessian(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& x, double h) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd H(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      Eigen::VectorXd xpp = x, xpm = x, xmp = x, xmm = x;
      xpp[i] += h; xpp[j] += h;
      xpm[i] += h; xpm[j] -= h;
      xmp[i] -= h; xmp[j] += h;
      xmm[i] -= h; xmm[j] -= h;
      H(i, j) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * h * h);
      H(j, i) = H(i, j);
    }
  }
  return H;
}

/// Largest eigenvalue magnitude straight from the dense eigensolver.
inline double spectral_radius(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// y' = -y / timescale over [0, t], classical RK4 at a fixed fine step.
inline double rk4_decay(double y0, double timescale, double t, int steps) {
  const double dt = t / steps;
  double y = y0;
  for (int k = 0; k < steps; ++k) {
    const double k1 = -y / timescale;
    const double k2 = -(y + 0.5 * dt * k1) / timescale;
    const double k3 = -(y + 0.5 * dt * k2) / timescale;
    const double k4 = -(y + dt * k3) / timescale;
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace oracles
