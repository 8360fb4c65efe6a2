#include "cpforce/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_matrix.h>
#include <gsl/gsl_odeiv2.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "cpforce/error.hpp"

namespace cpforce {

namespace {

struct RateSystem {
  Eigen::MatrixXd R;
};

int rate_rhs(double, const double y[], double dydt[], void* params) {
  const auto& R = static_cast<const RateSystem*>(params)->R;
  const Eigen::Index N = R.rows();
  Eigen::Map<Eigen::VectorXd>(dydt, N) = R * Eigen::Map<const Eigen::VectorXd>(y, N);
  return GSL_SUCCESS;
}

int rate_jacobian(double, const double[], double* dfdy, double dfdt[], void* params) {
  const auto& R = static_cast<const RateSystem*>(params)->R;
  const Eigen::Index N = R.rows();
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(dfdy, N, N) = R;
  std::fill(dfdt, dfdt + N, 0.0);
  return GSL_SUCCESS;
}

}  // namespace

void DensityMatrix::validate(double tol) const {
  const int N = static_cast<int>(sigma.rows());
  if (N == 0 || sigma.cols() != N) throw DomainError("density matrix must be square and non-empty");
  if (!sigma.allFinite()) throw DomainError("density matrix has non-finite entries");
  if (std::abs(sigma.trace() - 1.0) > tol) throw DomainError("density matrix trace differs from 1");
  if ((sigma - sigma.adjoint()).cwiseAbs().maxCoeff() > tol)
    throw DomainError("density matrix is not Hermitian");
  for (int m = 0; m < N; ++m) {
    const double p = sigma(m, m).real();
    if (p < -tol || p > 1.0 + tol) throw DomainError("population outside [0, 1]");
  }
  const MatXc herm = 0.5 * (sigma + sigma.adjoint());
  if (Eigen::SelfAdjointEigenSolver<MatXc>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() < -tol)
    throw DomainError("density matrix is not positive semidefinite");
}

DensityMatrix DensityMatrix::pure_state(int size, int level) {
  if (level < 0 || level >= size) throw DomainError("pure_state: level out of range");
  DensityMatrix d;
  d.sigma = MatXc::Zero(size, size);
  d.sigma(level, level) = 1.0;
  return d;
}

DensityMatrix DensityMatrix::superposition(const Eigen::VectorXcd& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0)) throw DomainError("superposition: zero amplitude vector");
  const Eigen::VectorXcd c = amplitudes / norm;
  DensityMatrix d;
  d.sigma = c * c.adjoint();
  return d;
}

cdouble evolve_offdiagonal(const ShiftedSpectrum& spectrum, const MatXc& sigma0, int m, int n,
                           double t) {
  const int N = spectrum.size();
  if (m < 0 || n < 0 || m >= N || n >= N) throw DomainError("evolve_offdiagonal: index out of range");
  if (m == n) throw DomainError("evolve_offdiagonal: m and n must differ");
  if (sigma0.rows() != N || sigma0.cols() != N)
    throw DomainError("evolve_offdiagonal: density matrix does not match the spectrum");
  const cdouble rate(-0.5 * (spectrum.widths(m) + spectrum.widths(n)), spectrum.omega_tilde(m, n));
  return std::exp(rate * t) * sigma0(n, m);
}

Eigen::MatrixXd evolve_populations(const ShiftedSpectrum& spectrum, const Eigen::VectorXd& p0,
                                   const std::vector<double>& t_grid,
                                   const PopulationOptions& opts) {
  const int N = spectrum.size();
  if (p0.size() != N) throw DomainError("evolve_populations: initial populations do not match");
  if (t_grid.empty()) return Eigen::MatrixXd(0, N);
  if (t_grid.front() != 0.0) throw DomainError("evolve_populations: time grid must start at 0");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw DomainError("evolve_populations: time grid must increase");

  // Rate matrix: R(m,m) = -G_m, R(m,n) = G_n^m (decay of n into m).
  RateSystem rates{Eigen::MatrixXd::Zero(N, N)};
  double max_rate = 0.0;
  for (int m = 0; m < N; ++m) {
    rates.R(m, m) = -spectrum.widths(m);
    max_rate = std::max(max_rate, spectrum.widths(m));
    for (int n = 0; n < N; ++n)
      if (n != m) rates.R(m, n) += spectrum.width_channels(n, m);
  }

  Eigen::MatrixXd out(t_grid.size(), N);
  out.row(0) = p0.transpose();
  if (max_rate == 0.0) {
    for (std::size_t i = 1; i < t_grid.size(); ++i) out.row(i) = p0.transpose();
    return out;
  }

  // Adaptive variable-order BDF (implicit) with the exact Jacobian.
  gsl_odeiv2_system sys{rate_rhs, rate_jacobian, static_cast<std::size_t>(N), &rates};
  const double h0 = std::min(0.01 / max_rate, t_grid.size() > 1 ? t_grid[1] : 1.0);
  std::unique_ptr<gsl_odeiv2_driver, decltype(&gsl_odeiv2_driver_free)> driver(
      gsl_odeiv2_driver_alloc_y_new(&sys, gsl_odeiv2_step_msbdf, h0, opts.abs_tol, opts.rel_tol),
      &gsl_odeiv2_driver_free);
  if (!driver) throw NumericError("evolve_populations: could not allocate the stepper", 0.0, 0.0);

  Eigen::VectorXd y = p0;
  double t = 0.0;
  for (std::size_t i = 1; i < t_grid.size(); ++i) {
    const int status = gsl_odeiv2_driver_apply(driver.get(), &t, t_grid[i], y.data());
    if (status != GSL_SUCCESS)
      throw NumericError("evolve_populations: stepper failed at t = " + std::to_string(t) +
                             " (" + gsl_strerror(status) + ")",
                         t, 0.0);
    out.row(i) = y.transpose();
  }
  return out;
}

ForceTrajectory force_trajectory(const ShiftedSpectrum& spectrum, const ForceTable& table,
                                 const DensityMatrix& sigma0, const std::vector<double>& t_grid,
                                 const PopulationOptions& opts) {
  const int N = spectrum.size();
  if (sigma0.sigma.rows() != N) throw ConfigError("initial density matrix does not match the atom");
  sigma0.validate(1e-10);

  Eigen::VectorXd p0(N);
  for (int m = 0; m < N; ++m) p0(m) = sigma0.sigma(m, m).real();
  const Eigen::MatrixXd pops = evolve_populations(spectrum, p0, t_grid, opts);

  auto lookup = [&](int m, int n) -> const ForceBreakdown& {
    auto it = table.find({m, n});
    if (it == table.end())
      throw ConfigError("force table has no entry for (m,n) = (" + std::to_string(m) + "," +
                        std::to_string(n) + ") although sigma_nm is nonzero");
    return it->second;
  };
  // Every element that can be nonzero must be covered before evolving.
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      const bool needed = (m == n) ? pops.col(m).cwiseAbs().maxCoeff() > 0.0
                                   : sigma0.sigma(n, m) != 0.0;
      if (needed) lookup(m, n);
    }
  }

  ForceTrajectory traj;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    DensityMatrix s;
    s.time = t;
    s.sigma = MatXc::Zero(N, N);
    for (int m = 0; m < N; ++m) s.sigma(m, m) = pops(i, m);
    for (int m = 0; m < N; ++m)
      for (int n = 0; n < N; ++n)
        if (m != n && sigma0.sigma(n, m) != 0.0)
          s.sigma(n, m) = evolve_offdiagonal(spectrum, sigma0.sigma, m, n, t);

    Vec3c total = Vec3c::Zero(), eo = Vec3c::Zero(), er = Vec3c::Zero(), mo = Vec3c::Zero(),
          mr = Vec3c::Zero();
    for (int m = 0; m < N; ++m) {
      for (int n = 0; n < N; ++n) {
        const cdouble w = s.sigma(n, m);
        if (w == 0.0) continue;
        const ForceBreakdown& f = lookup(m, n);
        eo += w * f.el_or;
        er += w * f.el_r;
        mo += w * f.mag_or;
        mr += w * f.mag_r;
      }
    }
    total = eo + er + mo + mr;
    const double mag = total.norm();
    if (mag > 0.0) traj.max_imag_residue = std::max(traj.max_imag_residue, total.imag().norm() / mag);

    traj.times.push_back(t);
    traj.totals.push_back(total.real());
    traj.el_or.push_back(eo.real());
    traj.el_r.push_back(er.real());
    traj.mag_or.push_back(mo.real());
    traj.mag_r.push_back(mr.real());
    traj.states.push_back(std::move(s));
  }
  return traj;
}

}  // namespace cpforce
