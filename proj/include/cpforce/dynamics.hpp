#pragma once

#include <Eigen/Core>
#include <map>
#include <utility>
#include <vector>

#include "cpforce/force.hpp"
#include "cpforce/spectrum_types.hpp"

namespace cpforce {

using MatXc = Eigen::MatrixXcd;

// Internal density matrix, sigma(m, n) = sigma_mn, at time t (units 1/omega_T).
struct DensityMatrix {
  MatXc sigma;
  double time = 0.0;

  // Trace 1, Hermitian, populations in [0, 1]; throws DomainError otherwise.
  void validate(double tol = 1e-12) const;
  static DensityMatrix pure_state(int size, int level);
  // Normalised superposition sum_k c_k |k>.
  static DensityMatrix superposition(const Eigen::VectorXcd& amplitudes);
};

// sigma_nm(t) = exp{[i w~_mn - (G_m + G_n)/2] t} sigma_nm(0), m != n.
cdouble evolve_offdiagonal(const ShiftedSpectrum& spectrum, const MatXc& sigma0, int m, int n,
                           double t);

struct PopulationOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-11;
};

// Balance equations d sigma_mm/dt = -G_m sigma_mm + sum_n G_n^m sigma_nn,
// integrated with an adaptive implicit BDF stepper. Row i of the result holds
// the populations at t_grid[i]. Throws NumericError if the stepper fails.
Eigen::MatrixXd evolve_populations(const ShiftedSpectrum& spectrum, const Eigen::VectorXd& p0,
                                   const std::vector<double>& t_grid,
                                   const PopulationOptions& opts = {});

using ForceTable = std::map<std::pair<int, int>, ForceBreakdown>;

struct ForceTrajectory {
  std::vector<double> times;
  std::vector<Vec3> totals;
  std::vector<Vec3> el_or, el_r, mag_or, mag_r;
  std::vector<DensityMatrix> states;
  double max_imag_residue = 0.0;  // largest |Im F| / |F| met on the grid
};

// <F(t)> = sum_mn sigma_nm(t) F_mn at fixed position. Throws ConfigError when a
// table entry needed for a nonzero density-matrix element is missing.
ForceTrajectory force_trajectory(const ShiftedSpectrum& spectrum, const ForceTable& table,
                                 const DensityMatrix& sigma0, const std::vector<double>& t_grid,
                                 const PopulationOptions& opts = {});

}  // namespace cpforce
