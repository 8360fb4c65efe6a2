#include "cpforce/units.hpp"

#include <cmath>
#include <string>

#include "cpforce/error.hpp"

namespace cpforce {

namespace {
// CODATA 2018
constexpr double kSiSpeedOfLight = 299792458.0;
constexpr double kSiHbar = 1.054571817e-34;
constexpr double kSiEps0 = 8.8541878128e-12;
}  // namespace

UnitSystem::UnitSystem(double omega_T_ref, double coupling_g)
    : omega_T_ref_(omega_T_ref),
      lambda_T_(2.0 * kPi * kSiSpeedOfLight / omega_T_ref),
      coupling_g_(coupling_g) {
  if (!(omega_T_ref > 0.0) || !std::isfinite(omega_T_ref))
    throw DomainError("UnitSystem: omega_T_ref must be positive and finite");
  if (!(coupling_g >= 0.0) || !std::isfinite(coupling_g))
    throw DomainError("UnitSystem: coupling g must be non-negative");
}

double UnitSystem::dipole_moment_si() const {
  const double c3 = kSiSpeedOfLight * kSiSpeedOfLight * kSiSpeedOfLight;
  return std::sqrt(3.0 * kPi * kSiHbar * kSiEps0 * c3 * coupling_g_) / omega_T_ref_;
}

double reduced_C_over_hbar(double g, double d_norm2, double d_z2) {
  if (!(g >= 0.0)) throw DomainError("coupling g must be non-negative");
  const double c3 = kSpeedOfLight * kSpeedOfLight * kSpeedOfLight;
  return 3.0 * g * c3 * (d_norm2 + d_z2) / 32.0;
}

double reduced_C_over_hbar_z3(double g, double theta, double z) {
  if (!(z > 0.0))
    throw DomainError("reduced_C_over_hbar_z3: z must be positive, got " + std::to_string(z));
  const double cos_t = std::cos(theta);
  const double C = reduced_C_over_hbar(g, 1.0, cos_t * cos_t);
  return C / (z * z * z);
}

}  // namespace cpforce
