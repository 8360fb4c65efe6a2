#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cpforce/atom.hpp"
#include "cpforce/greens.hpp"
#include "cpforce/material.hpp"
#include "cpforce/spectrum_types.hpp"

namespace cpforce {

// All forces are returned as F/hbar in internal units (omega_T = lambda_T = 1),
// energies as U/hbar.

// Which Green tensor enters the perturbative potential: the full quadrature or
// its short-distance (nonretarded) asymptote.
enum class GreenPath { full, short_distance };

struct PotentialEval {
  int state = 0;
  double z = 0.0;
  double U_or = 0.0;
  double U_r = 0.0;
  double F_or = 0.0;  // -dU_or/dz
  double F_r = 0.0;   // -dU_r/dz
  double U() const { return U_or + U_r; }
  double F() const { return F_or + F_r; }
};

// U_or = (mu0/2pi) int du u^2 Tr[alpha_l(iu) G(iu)]
double vdw_potential_offres(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                            const Tolerances& tol = {}, GreenPath path = GreenPath::full);

// U_r = -mu0 sum_k Theta(w_lk) w_lk^2 d_lk . Re G(w_lk) . d_kl
double vdw_potential_res(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                         const Tolerances& tol = {}, GreenPath path = GreenPath::full);

// Both parts of the potential together with their analytic z-derivatives.
PotentialEval vdw_potential(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                            const Tolerances& tol = {}, GreenPath path = GreenPath::full);

// F = -grad U. Only the z-component is nonzero for the half space.
Vec3 perturbative_force(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                        const Tolerances& tol = {}, GreenPath path = GreenPath::full);

// Matrix element F_mn of the force operator split into its four parts. The
// parts are complex vectors; only combinations sigma_nm F_mn summed over both
// orderings are physical, and diagonal elements are real.
struct ForceBreakdown {
  std::pair<int, int> pair{0, 0};
  double z = 0.0;
  Vec3c el_or = Vec3c::Zero();
  Vec3c el_r = Vec3c::Zero();
  Vec3c mag_or = Vec3c::Zero();
  Vec3c mag_r = Vec3c::Zero();
  double reference_C = 0.0;  // C/hbar of the atom, for normalisation
  std::vector<std::string> notes;

  Vec3c electric() const { return el_or + el_r; }
  Vec3c magnetic() const { return mag_or + mag_r; }
  Vec3c total() const { return el_or + el_r + mag_or + mag_r; }
  // F lambda_T^4 / (3C); zero when C vanishes.
  Vec3c normalized(const Vec3c& f) const;
};

// General nonperturbative matrix element from the imaginary-frequency
// integrals and the resonant pole terms at Omega_mnk = w~_nk + i(G_m + G_k)/2.
ForceBreakdown force_component_general(const AtomSpec& atom, const MaterialModel& model,
                                       const ShiftedSpectrum& spectrum, int m, int n, double z,
                                       const Tolerances& tol = {});

// Closed short-distance forms for a two-level atom.
enum class ResonantVariant {
  nonperturbative,  // shifted frequency, linewidth gamma + Gamma
  perturbative,     // bare frequency, linewidth gamma
  shift_only,       // shifted frequency, linewidth gamma
  broadening_only,  // bare frequency, linewidth gamma + Gamma
};

// F_11^r = -(3C/z^4) (|eps(Omega)|^2 - 1)/|eps(Omega) + 1|^2 with the
// narrow-line permittivity 1 + wP^2/(wT^2 - w^2 - i(gamma + Gamma) w).
// Returns 0 for state 0.
double two_level_resonant_force(const AtomSpec& atom, const MaterialModel& model,
                                const ShiftedSpectrum& spectrum, double z,
                                ResonantVariant variant = ResonantVariant::nonperturbative,
                                int state = 1);

// F_11^or = (3C/pi z^4) int du R(iu) h(u) with the broadened two-level kernel
// h; F_00^or = -F_11^or. With `perturbative` the bare frequency and Gamma = 0
// are used.
double two_level_offresonant_force(const AtomSpec& atom, const MaterialModel& model,
                                   const ShiftedSpectrum& spectrum, double z, int state,
                                   const Tolerances& tol = {}, bool perturbative = false);

// F_11^or(Gamma) - F_11^or(0) at the shifted frequency, evaluated from the
// exact difference of the kernels so that the O(Gamma^2) change survives.
double two_level_offresonant_broadening_delta(const AtomSpec& atom, const MaterialModel& model,
                                              const ShiftedSpectrum& spectrum, double z,
                                              const Tolerances& tol = {});

}  // namespace cpforce
