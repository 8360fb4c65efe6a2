#pragma once

#include <Eigen/Core>

namespace cpforce {

// Body-induced, position-dependent spectrum of an atom at height z.
//
//   omega_tilde(m, n) = omega_mn + dw_m - dw_n   (antisymmetric)
//   widths(m)         = sum_k width_channels(m, k)
//   level_shifts(m)   = sum_k shift_channels(m, k)
struct ShiftedSpectrum {
  double z = 0.0;
  Eigen::MatrixXd omega_tilde;
  Eigen::VectorXd widths;
  Eigen::VectorXd level_shifts;
  Eigen::MatrixXd shift_channels;
  Eigen::MatrixXd width_channels;

  int size() const { return static_cast<int>(widths.size()); }
};

}  // namespace cpforce
