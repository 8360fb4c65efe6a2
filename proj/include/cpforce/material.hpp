#pragma once

#include <complex>
#include <optional>

namespace cpforce {

using cdouble = std::complex<double>;

// Single-resonance Drude-Lorentz response
//   1 + omega_P^2 / (omega_T^2 - omega^2 - i gamma omega),
// all frequencies in units of the reference omega_T (so omega_T == 1 unless
// a second resonance scale is being modelled).
struct DrudeLorentzParams {
  double omega_P = 0.0;
  double omega_T = 1.0;
  double gamma = 0.01;

  void validate() const;  // throws DomainError
};

// Half-space response. An empty optional means the constant-unity response.
struct MaterialModel {
  std::optional<DrudeLorentzParams> permittivity;
  std::optional<DrudeLorentzParams> permeability;

  static MaterialModel vacuum() { return {}; }
  static MaterialModel drude_lorentz_dielectric(double omega_P, double gamma,
                                                double omega_T = 1.0);

  bool is_vacuum() const { return !permittivity && !permeability; }
};

// Drude-Lorentz response at complex frequency; requires Im(omega) >= 0.
cdouble eval_drude_lorentz(const DrudeLorentzParams& p, cdouble omega);

// Permittivity at a complex frequency in the closed upper half plane.
// Throws DomainError for Im(omega) < 0.
cdouble eval_eps(const MaterialModel& model, cdouble omega);
cdouble eval_mu(const MaterialModel& model, cdouble omega);

// Values on the imaginary axis omega = i u, u >= 0. Real and >= 1.
double eval_eps_iu(const MaterialModel& model, double u);
double eval_mu_iu(const MaterialModel& model, double u);

// sqrt(omega_T^2 + omega_P^2 / 2); NotApplicableError for unit permittivity.
double surface_resonance(const MaterialModel& model);

}  // namespace cpforce
