#pragma once

#include <Eigen/Core>
#include <complex>
#include <utility>
#include <vector>

#include "cpforce/spectrum_types.hpp"

namespace cpforce {

using cdouble = std::complex<double>;
using Mat3c = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3d;

// Level structure and real electric-dipole matrix elements of an atom.
//
// Energies are in units of hbar*omega_T with level 0 the ground state.
// Dipoles are dimensionless, in units of the reference moment d_A whose size
// is fixed by the coupling g (see units.hpp). d_mn = d_nm and d_nn = 0.
class AtomSpec {
 public:
  AtomSpec(std::vector<double> energies, double coupling_g);

  // Two-level atom with d_10 = (cos phi sin theta, sin phi sin theta, cos theta).
  static AtomSpec two_level(double coupling_g, double omega10, double theta, double phi = 0.0);

  void set_dipole(int m, int n, const Vec3& d);

  int size() const { return static_cast<int>(energies_.size()); }
  bool is_two_level() const { return size() == 2; }
  double energy(int n) const { return energies_.at(n); }
  const std::vector<double>& energies() const { return energies_; }
  double omega(int m, int n) const { return energies_.at(m) - energies_.at(n); }
  const Vec3& dipole(int m, int n) const;
  double coupling() const { return coupling_g_; }

  // mu0 d_A^2 / hbar in internal units.
  double kappa() const;

  // C/hbar built from the 1-0 dipole: 3 g c^3 (|d|^2 + d_z^2) / 32. For the
  // two-level atom this is d_A^2 (1 + cos^2 theta) / (32 pi eps0 hbar).
  double reference_C() const;

  // Returns a copy with the 1-0 transition frequency replaced (two-level use).
  AtomSpec with_omega10(double omega10) const;

 private:
  std::vector<double> energies_;
  double coupling_g_;
  std::vector<Vec3> dipoles_;  // row-major size x size
};

// Polarizability tensor in units of d_A^2 / (hbar omega_T).
struct PolarizabilityEval {
  Mat3c tensor = Mat3c::Zero();
  cdouble omega = 0.0;
  std::pair<int, int> pair{0, 0};
};

// Lowest-order polarizability of state l:
//   (2/hbar) sum_k omega_kl d_lk (x) d_kl / (omega_kl^2 - omega^2).
// Throws PoleError when omega sits on a transition frequency.
PolarizabilityEval alpha0(const AtomSpec& atom, int l, cdouble omega);

// Isotropic reduction (2/3hbar) sum_k omega_kl |d_lk|^2 / (omega_kl^2 - omega^2).
cdouble alpha0_scalar(const AtomSpec& atom, int l, cdouble omega);

// Generalised polarizability with shifted frequencies and level widths:
//   (1/hbar) sum_k [ d_mk (x) d_kn / (w~_kn - omega - i(G_k+G_m)/2)
//                  + d_kn (x) d_mk / (w~_km + omega + i(G_k+G_n)/2) ].
PolarizabilityEval alpha_generalized(const AtomSpec& atom, const ShiftedSpectrum& spectrum,
                                     int m, int n, cdouble omega);

// Spectrum with bare frequencies and zero widths.
ShiftedSpectrum bare_spectrum(const AtomSpec& atom, double z = 0.0);

}  // namespace cpforce
