#include "cpforce/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpforce/error.hpp"
#include "cpforce/units.hpp"

namespace cpforce {

namespace {

void check_pair(const AtomSpec& atom, const ShiftedSpectrum& guess, int m, int k) {
  const int N = atom.size();
  if (m < 0 || k < 0 || m >= N || k >= N) throw DomainError("level index out of range");
  if (guess.size() != N) throw DomainError("spectrum guess does not match the atom");
}

double projected(const Vec3& d, const Mat3& g) { return d.dot(g * d); }

}  // namespace

double shift_channel_resonant(const AtomSpec& atom, const MaterialModel& model, double z, int m,
                              int k, const ShiftedSpectrum& guess, const Tolerances& tol) {
  check_pair(atom, guess, m, k);
  const Vec3& d = atom.dipole(k, m);
  const double w_mk = guess.omega_tilde(m, k);
  if (m == k || d.isZero() || !(w_mk > 0.0) || model.is_vacuum()) return 0.0;
  const GreenEval g = green_scatter_real(model, z, w_mk, QuadratureOptions{tol.green_real});
  return -atom.kappa() * w_mk * w_mk * projected(d, g.tensor.real());
}

double shift_channel_general(const AtomSpec& atom, const MaterialModel& model, double z, int m,
                             int k, const ShiftedSpectrum& guess, const Tolerances& tol) {
  check_pair(atom, guess, m, k);
  const Vec3& d = atom.dipole(k, m);
  if (m == k || d.isZero() || model.is_vacuum()) return 0.0;
  const double resonant = shift_channel_resonant(atom, model, z, m, k, guess, tol);

  const double w_km = guess.omega_tilde(k, m);
  if (w_km == 0.0) return resonant;
  const Eigen::VectorXd off = integrate_imaginary_axis(
      model, z, 1, std::abs(w_km),
      [&](double u, const GreenEval& g, Eigen::Ref<Eigen::VectorXd> out) {
        out[0] = u * u * w_km * projected(d, g.tensor.real()) / (w_km * w_km + u * u);
      },
      tol);
  return resonant + atom.kappa() / kPi * off[0];
}

double width_channel_general(const AtomSpec& atom, const MaterialModel& model, double z, int m,
                             int k, const ShiftedSpectrum& guess, const Tolerances& tol) {
  check_pair(atom, guess, m, k);
  const Vec3& d = atom.dipole(k, m);
  const double w_mk = guess.omega_tilde(m, k);
  if (m == k || d.isZero() || !(w_mk > 0.0) || model.is_vacuum()) return 0.0;
  const GreenEval g = green_scatter_real(model, z, w_mk, QuadratureOptions{tol.green_real});
  return 2.0 * atom.kappa() * w_mk * w_mk * projected(d, g.tensor.imag());
}

ShiftedSpectrum evaluate_spectrum(const AtomSpec& atom, const MaterialModel& model, double z,
                                  const ShiftedSpectrum& guess, const Tolerances& tol) {
  const int N = atom.size();
  ShiftedSpectrum out = bare_spectrum(atom, z);
  for (int m = 0; m < N; ++m) {
    for (int k = 0; k < N; ++k) {
      if (m == k) continue;
      out.shift_channels(m, k) = shift_channel_general(atom, model, z, m, k, guess, tol);
      out.width_channels(m, k) = width_channel_general(atom, model, z, m, k, guess, tol);
    }
  }
  out.level_shifts = out.shift_channels.rowwise().sum();
  out.widths = out.width_channels.rowwise().sum();
  for (int m = 0; m < N; ++m)
    for (int n = 0; n < N; ++n)
      out.omega_tilde(m, n) = atom.omega(m, n) + out.level_shifts(m) - out.level_shifts(n);
  return out;
}

ShiftedSpectrum solve_spectrum_general(const AtomSpec& atom, const MaterialModel& model, double z,
                                       const Tolerances& tol, const GeneralSolveOptions& opts) {
  if (!(z > 0.0)) throw DomainError("solve_spectrum_general: z must be positive");
  ShiftedSpectrum current = evaluate_spectrum(atom, model, z, bare_spectrum(atom, z), tol);
  std::vector<double> history;
  bool converged = false;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const ShiftedSpectrum next = evaluate_spectrum(atom, model, z, current, tol);
    const Eigen::VectorXd damped =
        (1.0 - opts.damping) * current.level_shifts + opts.damping * next.level_shifts;
    const double step = (damped - current.level_shifts).cwiseAbs().maxCoeff();
    history.push_back(step);
    current = next;
    current.level_shifts = damped;
    for (int m = 0; m < atom.size(); ++m)
      for (int n = 0; n < atom.size(); ++n)
        current.omega_tilde(m, n) = atom.omega(m, n) + damped(m) - damped(n);
    if (step <= opts.step_tolerance) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("solve_spectrum_general: level shifts did not converge", history);

  // Channel tables at the converged frequencies; the shifts take one last
  // undamped step so that they equal the channel sums exactly. Negative width
  // channels (the scattering part of G can lower the free-space rate) are
  // clamped since the free-space rate itself is not modelled.
  const ShiftedSpectrum final_eval = evaluate_spectrum(atom, model, z, current, tol);
  current.shift_channels = final_eval.shift_channels;
  current.width_channels = final_eval.width_channels.cwiseMax(0.0);
  current.widths = current.width_channels.rowwise().sum();
  current.level_shifts = current.shift_channels.rowwise().sum();
  for (int m = 0; m < atom.size(); ++m)
    for (int n = 0; n < atom.size(); ++n)
      current.omega_tilde(m, n) = atom.omega(m, n) + current.level_shifts(m) - current.level_shifts(n);
  check_nondegenerate(current, opts.degeneracy_factor);
  return current;
}

void check_nondegenerate(const ShiftedSpectrum& s, double factor) {
  const int N = s.size();
  const double scale = std::max(1.0, s.omega_tilde.cwiseAbs().maxCoeff());
  for (int m = 0; m < N; ++m) {
    for (int n = 0; n < N; ++n) {
      if (m == n) continue;
      for (int mp = 0; mp < N; ++mp) {
        for (int np = 0; np < N; ++np) {
          if (mp == m && np == n) continue;
          const double gap = std::abs(s.omega_tilde(m, n) - s.omega_tilde(mp, np));
          const double width = 0.5 * std::abs(s.widths(m) + s.widths(n) - s.widths(mp) - s.widths(np));
          if (gap <= factor * width || gap <= 1e-9 * scale) {
            std::ostringstream msg;
            msg << "quasi-degenerate transitions (" << m << "," << n << ") and (" << mp << ","
                << np << "): |dw| = " << gap << ", width difference = " << width
                << "; coupled degenerate master equations are not supported";
            throw DegeneracyError(msg.str());
          }
        }
      }
    }
  }
}

// --- two-level short-distance forms -----------------------------------------

namespace {

void require_two_level(const AtomSpec& atom, const char* who) {
  if (!atom.is_two_level()) throw NotApplicableError(std::string(who) + ": two-level atoms only");
}

double c_over_z3(const AtomSpec& atom, double z) {
  if (!(z > 0.0)) throw DomainError("z must be positive");
  return atom.reference_C() / (z * z * z);
}

}  // namespace

double two_level_shift_rhs(const AtomSpec& atom, const MaterialModel& model, double z,
                           double omega_tilde) {
  const double K = c_over_z3(atom, z);
  const cdouble eps = eval_eps(model, omega_tilde);
  return -K * (std::norm(eps) - 1.0) / std::norm(eps + 1.0);
}

double two_level_decay_rate(const AtomSpec& atom, const MaterialModel& model, double z,
                            double omega_tilde) {
  const double K = c_over_z3(atom, z);
  const cdouble eps = eval_eps(model, omega_tilde);
  return 4.0 * K * eps.imag() / std::norm(eps + 1.0);
}

double two_level_offresonant_shift(const AtomSpec& atom, const MaterialModel& model, double z,
                                   double omega_tilde, const Tolerances& tol) {
  const double K = c_over_z3(atom, z);
  if (K == 0.0 || model.is_vacuum()) return 0.0;
  const double w = omega_tilde;
  const double integral = integrate_scalar_semi_infinite(
      [&](double u) {
        const double eps = eval_eps_iu(model, u);
        return (eps - 1.0) / (eps + 1.0) / (w * w + u * u);
      },
      0.0, std::abs(w), QuadratureOptions{tol.frequency});
  return 2.0 * K * w / kPi * integral;
}

TwoLevelShift solve_two_level_shift(const AtomSpec& atom, const MaterialModel& model, double z,
                                    const TwoLevelSolveOptions& opts, const Tolerances& tol) {
  require_two_level(atom, "solve_two_level_shift");
  if (!(z > 0.0)) throw DomainError("solve_two_level_shift: z must be positive");
  TwoLevelShift out;
  out.omega10 = atom.omega(1, 0);
  const double w10 = out.omega10;

  out.delta_omega_bare = two_level_shift_rhs(atom, model, z, w10);
  out.gamma_bare = two_level_decay_rate(atom, model, z, w10);

  double delta = out.delta_omega_bare;
  bool converged = (delta == 0.0);
  for (int it = 0; it < opts.max_iterations && !converged; ++it) {
    const double trial = w10 + delta;
    if (!(trial > 0.0))
      throw UnphysicalError("solve_two_level_shift: shifted frequency driven non-positive");
    const double next =
        (1.0 - opts.damping) * delta + opts.damping * two_level_shift_rhs(atom, model, z, trial);
    const double step = std::abs(next - delta);
    out.residual_history.push_back(step);
    delta = next;
    out.iterations = it + 1;
    if (!std::isfinite(delta))
      throw ConvergenceError("solve_two_level_shift: iteration produced a non-finite shift",
                             out.residual_history);
    if (step <= opts.step_tolerance) converged = true;
  }
  if (!converged)
    throw ConvergenceError("solve_two_level_shift: no converged root after " +
                               std::to_string(opts.max_iterations) + " iterations",
                           out.residual_history);

  out.delta_omega = delta;
  out.omega_tilde = w10 + delta;
  if (!(out.omega_tilde > 0.0))
    throw UnphysicalError("solve_two_level_shift: shifted frequency is non-positive");
  out.gamma = two_level_decay_rate(atom, model, z, out.omega_tilde);
  out.delta_omega_offres = two_level_offresonant_shift(atom, model, z, out.omega_tilde, tol);

  const double validity =
      2.0 * kPi * z * out.omega_tilde * std::sqrt(std::abs(eval_eps(model, out.omega_tilde)));
  if (validity > opts.validity_threshold) {
    std::ostringstream msg;
    msg << "short-distance parameter z*w*sqrt|eps|/c = " << validity << " exceeds "
        << opts.validity_threshold;
    out.warnings.push_back(msg.str());
  }

  ShiftedSpectrum s = bare_spectrum(atom, z);
  s.omega_tilde(1, 0) = out.omega_tilde;
  s.omega_tilde(0, 1) = -out.omega_tilde;
  s.level_shifts(1) = delta;
  s.shift_channels(1, 0) = delta;
  s.widths(1) = out.gamma;
  s.width_channels(1, 0) = out.gamma;
  out.spectrum = s;
  return out;
}

OffResonantBound check_offresonant_bound(const TwoLevelShift& shift, const AtomSpec& atom,
                                         const MaterialModel& model, double z) {
  OffResonantBound b;
  if (shift.omega_tilde == 0.0) return b;
  b.ratio = shift.delta_omega_offres / shift.omega_tilde;
  if (model.permittivity) {
    const auto& p = *model.permittivity;
    b.bound = c_over_z3(atom, z) * p.omega_P * p.omega_P /
              (2.0 * p.omega_T * p.omega_T * shift.omega_tilde);
  }
  b.satisfied = b.ratio <= b.bound * (1.0 + 1e-12) + 0.0;
  return b;
}

}  // namespace cpforce
