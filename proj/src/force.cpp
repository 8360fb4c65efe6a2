#include "cpforce/force.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cpforce/error.hpp"
#include "cpforce/units.hpp"

namespace cpforce {

namespace {

const cdouble kI(0.0, 1.0);

void require_state(const AtomSpec& atom, int l, const char* who) {
  if (l < 0 || l >= atom.size())
    throw DomainError(std::string(who) + ": state index out of range");
}

void require_z(double z, const char* who) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError(std::string(who) + ": z must be positive");
}

// Mapping scale for imaginary-frequency integrals of state l.
double transition_scale(const AtomSpec& atom, int l) {
  double scale = 0.0;
  for (int k = 0; k < atom.size(); ++k) {
    if (k == l || atom.dipole(l, k).isZero()) continue;
    const double w = std::abs(atom.omega(k, l));
    if (w > 0.0 && (scale == 0.0 || w < scale)) scale = w;
  }
  return scale > 0.0 ? scale : 1.0;
}

// z-component of grad (a . G(r, r_A) . b) at r = r_A, plus the two lateral
// components, from the equal-position data.
Vec3c bilinear_gradient(const Vec3& a, const Vec3& b, const GreenEval& g) {
  const cdouble L = g.lateral;
  Vec3c out;
  out.x() = L * (a.x() * b.z() - a.z() * b.x());
  out.y() = L * (a.y() * b.z() - a.z() * b.y());
  cdouble zz = 0.0;
  for (int i = 0; i < 3; ++i) zz += a(i) * g.dz_tensor(i, i) * b(i);
  out.z() = 0.5 * zz;
  return out;
}

// A_ij grad G_ij(r, r_A) at r = r_A for a general 3x3 tensor A.
Vec3c tensor_gradient(const Mat3c& A, const GreenEval& g) {
  const cdouble L = g.lateral;
  Vec3c out;
  out.x() = L * (A(0, 2) - A(2, 0));
  out.y() = L * (A(1, 2) - A(2, 1));
  cdouble zz = 0.0;
  for (int i = 0; i < 3; ++i) zz += A(i, i) * g.dz_tensor(i, i);
  out.z() = 0.5 * zz;
  return out;
}

// Contraction of B with the curl of G, sum_k a_k x (curl G . b_k) for
// B = sum_k a_k b_k^T. The curl at coincidence is w [[0,-1,0],[1,0,0],[0,0,0]].
Vec3c curl_contraction(const Mat3c& B, cdouble w) {
  return Vec3c(-w * B(2, 0), -w * B(2, 1), w * (B(0, 0) + B(1, 1)));
}

Mat3c outer(const Vec3& a, const Vec3& b) { return (a * b.transpose()).cast<cdouble>(); }

}  // namespace

// --- perturbative potential -------------------------------------------------

PotentialEval vdw_potential(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                            const Tolerances& tol, GreenPath path) {
  require_state(atom, l, "vdw_potential");
  require_z(z, "vdw_potential");
  PotentialEval out;
  out.state = l;
  out.z = z;
  if (model.is_vacuum()) return out;
  const double kappa = atom.kappa();

  if (path == GreenPath::full) {
    const Eigen::VectorXd v = integrate_imaginary_axis(
        model, z, 2, transition_scale(atom, l),
        [&](double u, const GreenEval& g, Eigen::Ref<Eigen::VectorXd> o) {
          const Mat3c a = alpha0(atom, l, cdouble(0.0, u)).tensor;
          o[0] = u * u * (a * g.tensor).trace().real();
          o[1] = u * u * (a * g.dz_tensor).trace().real();
        },
        tol);
    out.U_or = kappa / (2.0 * kPi) * v[0];
    out.F_or = -kappa / (2.0 * kPi) * v[1];
  } else {
    for (int k = 0; k < atom.size(); ++k) {
      const Vec3& d = atom.dipole(l, k);
      if (k == l || d.isZero()) continue;
      const double w = atom.omega(k, l);
      const Mat3 W = weighted_iu_short_distance(
          [w](double u) { return u * u * 2.0 * w / (w * w + u * u); }, model, z, std::abs(w),
          QuadratureOptions{tol.frequency});
      out.U_or += kappa / (2.0 * kPi) * d.dot(W * d);
    }
    out.F_or = 3.0 * out.U_or / z;
  }

  for (int k = 0; k < atom.size(); ++k) {
    const Vec3& d = atom.dipole(l, k);
    const double w = atom.omega(l, k);
    if (k == l || d.isZero() || !(w > 0.0)) continue;
    const GreenEval g = path == GreenPath::full
                            ? green_scatter_real(model, z, w, QuadratureOptions{tol.green_real})
                            : short_distance_green_real(eval_eps(model, w), z, w);
    const Vec3c dc = d.cast<cdouble>();
    out.U_r += -kappa * w * w * (dc.dot(g.tensor * dc)).real();
    out.F_r += kappa * w * w * (dc.dot(g.dz_tensor * dc)).real();
  }
  return out;
}

double vdw_potential_offres(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                            const Tolerances& tol, GreenPath path) {
  return vdw_potential(atom, model, l, z, tol, path).U_or;
}

double vdw_potential_res(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                         const Tolerances& tol, GreenPath path) {
  return vdw_potential(atom, model, l, z, tol, path).U_r;
}

Vec3 perturbative_force(const AtomSpec& atom, const MaterialModel& model, int l, double z,
                        const Tolerances& tol, GreenPath path) {
  return Vec3(0.0, 0.0, vdw_potential(atom, model, l, z, tol, path).F());
}

// --- nonperturbative matrix elements ----------------------------------------

Vec3c ForceBreakdown::normalized(const Vec3c& f) const {
  if (reference_C == 0.0) return Vec3c::Zero();
  return f / (3.0 * reference_C);
}

ForceBreakdown force_component_general(const AtomSpec& atom, const MaterialModel& model,
                                       const ShiftedSpectrum& spectrum, int m, int n, double z,
                                       const Tolerances& tol) {
  require_state(atom, m, "force_component_general");
  require_state(atom, n, "force_component_general");
  require_z(z, "force_component_general");
  if (spectrum.size() != atom.size())
    throw DomainError("force_component_general: spectrum does not match the atom");

  ForceBreakdown out;
  out.pair = {m, n};
  out.z = z;
  out.reference_C = atom.reference_C();
  if (model.is_vacuum()) return out;

  const int N = atom.size();
  const double kappa = atom.kappa();
  const auto& wt = spectrum.omega_tilde;
  const auto& G = spectrum.widths;
  const double w_mn = wt(m, n);

  double u_scale = 0.0;
  for (int k = 0; k < N; ++k) {
    for (int j : {m, n}) {
      if (k == j || atom.dipole(j, k).isZero()) continue;
      u_scale = std::max(u_scale, std::abs(wt(k, j)));
    }
  }
  if (u_scale == 0.0) return out;  // no dipole couples m or n to anything

  // Imaginary-frequency parts; layout {el_or (3 complex), mag_or (3 complex)}.
  const bool magnetic = (m != n) && w_mn != 0.0;
  const Eigen::VectorXd v = integrate_imaginary_axis(
      model, z, 12, u_scale,
      [&](double u, const GreenEval& g, Eigen::Ref<Eigen::VectorXd> o) {
        const Mat3c ap = alpha_generalized(atom, spectrum, m, n, cdouble(0.0, u)).tensor;
        const Mat3c am = alpha_generalized(atom, spectrum, m, n, cdouble(0.0, -u)).tensor;
        const Vec3c el = -u * u * tensor_gradient(ap + am, g);
        Vec3c mag = Vec3c::Zero();
        if (magnetic) mag = u * u * (w_mn / (kI * u)) * curl_contraction(ap - am, g.curl_coefficient());
        for (int i = 0; i < 3; ++i) {
          o[2 * i] = el(i).real();
          o[2 * i + 1] = el(i).imag();
          o[6 + 2 * i] = mag(i).real();
          o[6 + 2 * i + 1] = mag(i).imag();
        }
      },
      tol);
  for (int i = 0; i < 3; ++i) {
    out.el_or(i) = kappa / (2.0 * kPi) * cdouble(v[2 * i], v[2 * i + 1]);
    out.mag_or(i) = kappa / (2.0 * kPi) * cdouble(v[6 + 2 * i], v[6 + 2 * i + 1]);
  }

  // Pole terms X_ab = sum_k Theta(w~_bk) [...]; the Hermitian conjugate adds
  // conj(X_ba) to the (a,b) element.
  auto pole_terms = [&](int a, int b, Vec3c& el, Vec3c& mag) {
    el.setZero();
    mag.setZero();
    for (int k = 0; k < N; ++k) {
      const Vec3& d_ak = atom.dipole(a, k);
      const Vec3& d_kb = atom.dipole(k, b);
      if (d_ak.isZero() || d_kb.isZero()) continue;
      const double w_bk = wt(b, k);
      if (w_bk == 0.0) {
        out.notes.push_back("transition (" + std::to_string(b) + "," + std::to_string(k) +
                            ") has zero shifted frequency; pole term excluded");
        continue;
      }
      if (w_bk < 0.0) continue;
      const cdouble omega(w_bk, 0.5 * (G(a) + G(k)));
      const GreenEval g = green_scatter_complex(model, z, omega, QuadratureOptions{tol.green_real});
      el += kappa * omega * omega * bilinear_gradient(d_ak, d_kb, g);
      if (a != b && wt(a, b) != 0.0)
        mag += kappa * wt(a, b) * omega * curl_contraction(outer(d_ak, d_kb), g.curl_coefficient());
    }
  };
  Vec3c el_mn, mag_mn, el_nm, mag_nm;
  pole_terms(m, n, el_mn, mag_mn);
  if (m == n) {
    el_nm = el_mn;
    mag_nm = mag_mn;
  } else {
    pole_terms(n, m, el_nm, mag_nm);
  }
  out.el_r = el_mn + el_nm.conjugate();
  out.mag_r = mag_mn + mag_nm.conjugate();
  return out;
}

// --- two-level closed forms -------------------------------------------------

namespace {

void require_two_level(const AtomSpec& atom, const ShiftedSpectrum& s, const char* who) {
  if (!atom.is_two_level()) throw NotApplicableError(std::string(who) + ": two-level atoms only");
  if (s.size() != 2) throw DomainError(std::string(who) + ": spectrum is not two-level");
}

double ratio_iu(const MaterialModel& model, double u) {
  const double eps = eval_eps_iu(model, u);
  return (eps - 1.0) / (eps + 1.0);
}

}  // namespace

double two_level_resonant_force(const AtomSpec& atom, const MaterialModel& model,
                                const ShiftedSpectrum& spectrum, double z,
                                ResonantVariant variant, int state) {
  require_two_level(atom, spectrum, "two_level_resonant_force");
  require_z(z, "two_level_resonant_force");
  if (state != 0 && state != 1) throw DomainError("two_level_resonant_force: state must be 0 or 1");
  if (state == 0 || !model.permittivity) return 0.0;

  const bool shifted =
      variant == ResonantVariant::nonperturbative || variant == ResonantVariant::shift_only;
  const bool broadened =
      variant == ResonantVariant::nonperturbative || variant == ResonantVariant::broadening_only;
  const double w = shifted ? spectrum.omega_tilde(1, 0) : atom.omega(1, 0);
  const double Gamma = spectrum.widths(1);
  const auto& p = *model.permittivity;
  const double linewidth = p.gamma + (broadened ? Gamma : 0.0);

  const cdouble eps =
      1.0 + p.omega_P * p.omega_P / cdouble(p.omega_T * p.omega_T - w * w, -linewidth * w);
  const double C = atom.reference_C();
  return -3.0 * C / std::pow(z, 4) * (std::norm(eps) - 1.0) / std::norm(eps + 1.0);
}

double two_level_offresonant_force(const AtomSpec& atom, const MaterialModel& model,
                                   const ShiftedSpectrum& spectrum, double z, int state,
                                   const Tolerances& tol, bool perturbative) {
  require_two_level(atom, spectrum, "two_level_offresonant_force");
  require_z(z, "two_level_offresonant_force");
  if (state != 0 && state != 1) throw DomainError("two_level_offresonant_force: state must be 0 or 1");
  const double C = atom.reference_C();
  if (C == 0.0 || model.is_vacuum()) return 0.0;

  const double w = perturbative ? atom.omega(1, 0) : spectrum.omega_tilde(1, 0);
  const double hG = perturbative ? 0.0 : 0.5 * spectrum.widths(1);
  const double integral = integrate_scalar_semi_infinite(
      [&](double u) {
        const double h = w * (w * w + u * u + hG * hG) /
                         ((w * w + (u + hG) * (u + hG)) * (w * w + (u - hG) * (u - hG)));
        return ratio_iu(model, u) * h;
      },
      0.0, std::abs(w), QuadratureOptions{tol.frequency});
  const double f11 = 3.0 * C / (kPi * std::pow(z, 4)) * integral;
  return state == 1 ? f11 : -f11;
}

double two_level_offresonant_broadening_delta(const AtomSpec& atom, const MaterialModel& model,
                                              const ShiftedSpectrum& spectrum, double z,
                                              const Tolerances& tol) {
  require_two_level(atom, spectrum, "two_level_offresonant_broadening_delta");
  require_z(z, "two_level_offresonant_broadening_delta");
  const double C = atom.reference_C();
  const double Gamma = spectrum.widths(1);
  if (C == 0.0 || model.is_vacuum() || Gamma == 0.0) return 0.0;

  const double w = spectrum.omega_tilde(1, 0);
  const double G2 = Gamma * Gamma;
  // h(Gamma) - h(0) = w G^2 (u^2/P - 1/4) / ((P - u^2 G^2 / P) Q),
  // Q = w^2 + u^2, P = Q + G^2/4.
  const double integral = integrate_scalar_semi_infinite(
      [&](double u) {
        const double Q = w * w + u * u;
        const double P = Q + 0.25 * G2;
        const double dh = w * G2 * (u * u / P - 0.25) / ((P - u * u * G2 / P) * Q);
        return ratio_iu(model, u) * dh;
      },
      0.0, std::abs(w), QuadratureOptions{tol.frequency});
  return 3.0 * C / (kPi * std::pow(z, 4)) * integral;
}

}  // namespace cpforce
