#pragma once

// Dimensionless unit system.
//
// Every quantity inside the library is reduced by the medium resonance
// frequency omega_T and the length lambda_T = 2*pi*c/omega_T:
//
//   frequency  omega / omega_T
//   length     z / lambda_T
//   time       t * omega_T
//   energy     U / (hbar * omega_T)
//   force      F * lambda_T / (hbar * omega_T)
//
// In these units the speed of light is 1/(2*pi). Dipole matrix elements are
// stored relative to a reference moment d_A, fixed through the coupling
//   g = omega_T^2 d_A^2 / (3*pi*hbar*eps0*c^3),
// so that mu0 * d_A^2 / hbar = 3*pi*g*c = 3g/2.

#include <numbers>

namespace cpforce {

inline constexpr double kPi = std::numbers::pi;

// c in units of lambda_T * omega_T.
inline constexpr double kSpeedOfLight = 1.0 / (2.0 * kPi);

// mu0 * d_A^2 / hbar in internal units for coupling g.
constexpr double dipole_coupling(double g) { return 3.0 * kPi * g * kSpeedOfLight; }

// Scales relating the internal system to SI. Only the front end and the docs
// ever look at the SI side.
class UnitSystem {
 public:
  // omega_T_ref in rad/s, coupling g dimensionless.
  UnitSystem(double omega_T_ref, double coupling_g);

  double omega_T_ref() const { return omega_T_ref_; }
  double lambda_T() const { return lambda_T_; }
  double coupling_g() const { return coupling_g_; }

  double frequency_to_internal(double omega_si) const { return omega_si / omega_T_ref_; }
  double frequency_from_internal(double omega) const { return omega * omega_T_ref_; }
  double length_to_internal(double z_si) const { return z_si / lambda_T_; }
  double length_from_internal(double z) const { return z * lambda_T_; }
  double time_to_internal(double t_si) const { return t_si * omega_T_ref_; }
  double time_from_internal(double t) const { return t / omega_T_ref_; }

  // Reference dipole moment d_A in C*m implied by g.
  double dipole_moment_si() const;

 private:
  double omega_T_ref_;
  double lambda_T_;
  double coupling_g_;
};

// C / (hbar z^3 omega_T) for a two-level atom with dipole polar angle theta,
// where C = d_A^2 (1 + cos^2 theta) / (32 pi eps0). Throws DomainError for
// z <= 0 or g < 0.
double reduced_C_over_hbar_z3(double g, double theta, double z);

// C / hbar in internal units, for a dipole given by its squared norm and
// squared normal component (|d|^2 + d_z^2 = d_A^2 (1 + cos^2 theta)).
double reduced_C_over_hbar(double g, double d_norm2, double d_z2);

}  // namespace cpforce
