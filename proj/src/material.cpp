#include "cpforce/material.hpp"

#include <cmath>
#include <string>

#include "cpforce/error.hpp"

namespace cpforce {

void DrudeLorentzParams::validate() const {
  if (!(omega_P >= 0.0) || !std::isfinite(omega_P))
    throw DomainError("Drude-Lorentz: omega_P must be non-negative");
  if (!(omega_T > 0.0) || !std::isfinite(omega_T))
    throw DomainError("Drude-Lorentz: omega_T must be positive");
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw DomainError("Drude-Lorentz: gamma must be positive (absorbing medium)");
}

MaterialModel MaterialModel::drude_lorentz_dielectric(double omega_P, double gamma,
                                                      double omega_T) {
  DrudeLorentzParams p{omega_P, omega_T, gamma};
  p.validate();
  MaterialModel m;
  m.permittivity = p;
  return m;
}

cdouble eval_drude_lorentz(const DrudeLorentzParams& p, cdouble omega) {
  if (omega.imag() < 0.0)
    throw DomainError("response evaluated below the real axis (Im omega = " +
                      std::to_string(omega.imag()) + ")");
  const cdouble i(0.0, 1.0);
  const cdouble denom = p.omega_T * p.omega_T - omega * omega - i * p.gamma * omega;
  return 1.0 + p.omega_P * p.omega_P / denom;
}

cdouble eval_eps(const MaterialModel& model, cdouble omega) {
  if (omega.imag() < 0.0)
    throw DomainError("eval_eps: Im(omega) < 0 is outside the analyticity domain");
  return model.permittivity ? eval_drude_lorentz(*model.permittivity, omega) : cdouble(1.0);
}

cdouble eval_mu(const MaterialModel& model, cdouble omega) {
  if (omega.imag() < 0.0)
    throw DomainError("eval_mu: Im(omega) < 0 is outside the analyticity domain");
  return model.permeability ? eval_drude_lorentz(*model.permeability, omega) : cdouble(1.0);
}

namespace {
double drude_lorentz_iu(const DrudeLorentzParams& p, double u) {
  return 1.0 + p.omega_P * p.omega_P / (p.omega_T * p.omega_T + u * u + p.gamma * u);
}
}  // namespace

double eval_eps_iu(const MaterialModel& model, double u) {
  if (!(u >= 0.0)) throw DomainError("eval_eps_iu: u must be non-negative");
  return model.permittivity ? drude_lorentz_iu(*model.permittivity, u) : 1.0;
}

double eval_mu_iu(const MaterialModel& model, double u) {
  if (!(u >= 0.0)) throw DomainError("eval_mu_iu: u must be non-negative");
  return model.permeability ? drude_lorentz_iu(*model.permeability, u) : 1.0;
}

double surface_resonance(const MaterialModel& model) {
  if (!model.permittivity)
    throw NotApplicableError("surface_resonance: permittivity is constant unity");
  const auto& p = *model.permittivity;
  return std::sqrt(p.omega_T * p.omega_T + 0.5 * p.omega_P * p.omega_P);
}

}  // namespace cpforce
