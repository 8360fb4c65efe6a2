#pragma once

#include <string>
#include <vector>

#include "cpforce/atom.hpp"
#include "cpforce/greens.hpp"
#include "cpforce/material.hpp"
#include "cpforce/spectrum_types.hpp"

namespace cpforce {

// Shift of level m due to the virtual transition to level k,
//   dw_m^k = -(mu0/hbar) Theta(w~_mk) w~_mk^2 d_km . Re G(w~_mk) . d_mk
//            + (mu0/pi hbar) int_0^inf du u^2 w~_km d_km . G(iu) . d_mk / (w~_km^2 + u^2),
// with the transition frequencies taken from `guess`.
double shift_channel_general(const AtomSpec& atom, const MaterialModel& model, double z, int m,
                             int k, const ShiftedSpectrum& guess, const Tolerances& tol = {});

// Resonant part of the shift channel alone (the first term above).
double shift_channel_resonant(const AtomSpec& atom, const MaterialModel& model, double z, int m,
                              int k, const ShiftedSpectrum& guess, const Tolerances& tol = {});

// Decay rate of level m into level k, 2 mu0/hbar Theta(w~_mk) w~_mk^2 d.Im G(w~_mk).d,
// using the scattering part of G only.
double width_channel_general(const AtomSpec& atom, const MaterialModel& model, double z, int m,
                             int k, const ShiftedSpectrum& guess, const Tolerances& tol = {});

// One evaluation of all shift and width channels on top of `guess`.
ShiftedSpectrum evaluate_spectrum(const AtomSpec& atom, const MaterialModel& model, double z,
                                  const ShiftedSpectrum& guess, const Tolerances& tol = {});

struct GeneralSolveOptions {
  double damping = 0.5;
  double step_tolerance = 1e-11;
  int max_iterations = 200;
  double degeneracy_factor = 10.0;
};

// Self-consistent level shifts of a multilevel atom from the full Green
// tensor; rejects quasi-degenerate spectra.
ShiftedSpectrum solve_spectrum_general(const AtomSpec& atom, const MaterialModel& model, double z,
                                       const Tolerances& tol = {},
                                       const GeneralSolveOptions& opts = {});

// Throws DegeneracyError unless, for every off-diagonal transition (m,n) and
// every other pair (m',n') (off-diagonal or diagonal),
//   |w~_mn - w~_m'n'| > factor * |G_m + G_n - G_m' - G_n'| / 2.
void check_nondegenerate(const ShiftedSpectrum& spectrum, double factor = 10.0);

struct TwoLevelSolveOptions {
  double damping = 0.5;
  double step_tolerance = 1e-13;
  int max_iterations = 500;
  double validity_threshold = 0.3;
};

struct TwoLevelShift {
  ShiftedSpectrum spectrum;
  double omega10 = 0.0;
  double omega_tilde = 0.0;
  double delta_omega = 0.0;        // self-consistent resonant shift
  double gamma = 0.0;              // decay rate at omega_tilde
  double delta_omega_bare = 0.0;   // shift with the bare frequency on the right-hand side
  double gamma_bare = 0.0;         // decay rate at the bare frequency
  double delta_omega_offres = 0.0; // off-resonant shift at omega_tilde
  int iterations = 0;
  std::vector<double> residual_history;
  std::vector<std::string> warnings;
};

// Short-distance self-consistent shift of a two-level atom:
//   dw = -(C/hbar z^3) (|eps(w~)|^2 - 1) / |eps(w~) + 1|^2,  w~ = w10 + dw,
// solved by damped fixed-point iteration from the bare-frequency value.
TwoLevelShift solve_two_level_shift(const AtomSpec& atom, const MaterialModel& model, double z,
                                    const TwoLevelSolveOptions& opts = {},
                                    const Tolerances& tol = {});

// Right-hand side of the two-level shift equation at a trial frequency.
double two_level_shift_rhs(const AtomSpec& atom, const MaterialModel& model, double z,
                           double omega_tilde);

// Short-distance decay rate 4 C Im eps(w) / (hbar z^3 |eps(w) + 1|^2).
double two_level_decay_rate(const AtomSpec& atom, const MaterialModel& model, double z,
                            double omega_tilde);

// Short-distance off-resonant shift
//   (2 C w / pi hbar z^3) int_0^inf du (eps(iu)-1)/(eps(iu)+1) / (w^2 + u^2).
double two_level_offresonant_shift(const AtomSpec& atom, const MaterialModel& model, double z,
                                   double omega_tilde, const Tolerances& tol = {});

struct OffResonantBound {
  double ratio = 0.0;  // dw_or / w~
  double bound = 0.0;  // C omega_P^2 / (2 hbar z^3 omega_T^2 w~)
  bool satisfied = true;
};

OffResonantBound check_offresonant_bound(const TwoLevelShift& shift, const AtomSpec& atom,
                                         const MaterialModel& model, double z);

}  // namespace cpforce
