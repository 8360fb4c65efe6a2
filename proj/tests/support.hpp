#pragma once

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "cpforce/atom.hpp"
#include "cpforce/material.hpp"

namespace testing {

// Parameters of the reference half-space problem.
inline constexpr double kOmegaP = 0.75;
inline constexpr double kGamma = 0.01;
inline constexpr double kG = 1e-7;
inline constexpr double kZ1 = 0.0075;
inline constexpr double kZ2 = 0.009;

inline cpforce::MaterialModel reference_medium() {
  return cpforce::MaterialModel::drude_lorentz_dielectric(kOmegaP, kGamma);
}

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Independent quadrature oracles (Boost.Math), used only in tests.
inline double oracle_integral(const std::function<double(double)>& f, double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 30, 1e-13);
}

inline double oracle_integral_0_inf(const std::function<double(double)>& f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13);
}

// Independent Drude-Lorentz evaluation (no library call).
inline std::complex<double> eps_oracle(std::complex<double> w, double wp = kOmegaP,
                                       double gamma = kGamma) {
  const std::complex<double> I(0.0, 1.0);
  return 1.0 + wp * wp / (1.0 - w * w - I * gamma * w);
}

// Three-level ladder used for off-diagonal and multilevel checks.
inline cpforce::AtomSpec three_level_atom(double g = kG) {
  cpforce::AtomSpec atom({0.0, 1.12, 2.3}, g);
  atom.set_dipole(1, 0, cpforce::Vec3(0.0, 0.0, 1.0));
  atom.set_dipole(2, 0, cpforce::Vec3(0.3, 0.0, 0.5));
  atom.set_dipole(2, 1, cpforce::Vec3(0.4, 0.0, 0.6));
  return atom;
}

// Coefficients (ascending powers of w~) of
//   (w~ - w10) [ (2(1 - w~^2) + P)^2 + 4 gamma^2 w~^2 ] + K P (2(1 - w~^2) + P),
// whose real roots are the self-consistent shifted frequencies.
inline Eigen::VectorXd quintic(double K, double w10, double wp, double gamma) {
  const double P = wp * wp, s0 = 2.0 + P;
  const Eigen::Vector<double, 5> Q{s0 * s0, 0.0, 4.0 * gamma * gamma - 4.0 * s0, 0.0, 4.0};
  Eigen::VectorXd p = Eigen::VectorXd::Zero(6);
  for (int i = 0; i < 5; ++i) {
    p(i + 1) += Q(i);
    p(i) -= w10 * Q(i);
  }
  p(0) += K * P * s0;
  p(2) -= 2.0 * K * P;
  return p;
}

inline double horner(const Eigen::VectorXd& p, double x, double* dp = nullptr) {
  double v = 0.0, d = 0.0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
    d = d * x + v;
    v = v * x + p(i);
  }
  if (dp) *dp = d;
  return v;
}

// Real root of the quintic nearest to `seed`, from the companion matrix and a
// Newton polish.
inline double companion_root(const Eigen::VectorXd& p, double seed) {
  const int n = static_cast<int>(p.size()) - 1;
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -p(i) / p(n);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
  double best = 0.0, dist = 1e300;
  for (int i = 0; i < n; ++i) {
    const std::complex<double> r = es.eigenvalues()(i);
    if (std::abs(r.imag()) > 1e-6 * std::abs(r)) continue;
    if (std::abs(r.real() - seed) < dist) {
      dist = std::abs(r.real() - seed);
      best = r.real();
    }
  }
  for (int it = 0; it < 5; ++it) {
    double d;
    const double v = horner(p, best, &d);
    if (d == 0.0) break;
    best -= v / d;
  }
  return best;
}

// Least-squares slope of log|y| against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, i / double(n - 1)));
  return v;
}

}  // namespace testing
