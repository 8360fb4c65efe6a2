#include "cpforce/greens.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "cpforce/error.hpp"
#include "cpforce/units.hpp"

namespace cpforce {

namespace {

constexpr double kC = kSpeedOfLight;
constexpr double kPoleGuard = 1e-12;
const cdouble kI(0.0, 1.0);

void require_height(double z, const char* who) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError(std::string(who) + ": height z must be positive, got " + std::to_string(z));
}

// Reflection coefficients from precomputed normal wave numbers, written in
// the rationalised form (x^2 - y^2)/(x + y)^2 so that weak contrasts do not
// cancel catastrophically.
ReflectionPair reflection_from_betas(cdouble eps, cdouble mu, cdouble k2, cdouble q2,
                                     cdouble beta0, cdouble beta, double q) {
  const cdouble num_s = mu * (mu - eps) * k2 - (mu * mu - 1.0) * q2;
  const cdouble num_p = eps * (eps - mu) * k2 - (eps * eps - 1.0) * q2;
  ReflectionPair r{0.0, 0.0};
  if (num_s != 0.0) {
    const cdouble den = mu * beta0 + beta;
    if (std::abs(den) < kPoleGuard * std::abs(mu * beta0))
      throw PoleError("s-polarised reflection pole at q = " + std::to_string(q), q);
    r.r_s = num_s / (den * den);
  }
  if (num_p != 0.0) {
    const cdouble den = eps * beta0 + beta;
    if (std::abs(den) < kPoleGuard * std::abs(eps * beta0))
      throw PoleError("p-polarised reflection pole at q = " + std::to_string(q), q);
    r.r_p = num_p / (den * den);
  }
  return r;
}

// Component layout of the vector integrand for complex frequencies:
// {xx, zz, dz_xx, dz_zz, lateral} as (re, im) pairs.
constexpr int kComplexDim = 10;

void store(Eigen::Ref<Eigen::VectorXd> out, int slot, cdouble v) {
  out[2 * slot] = v.real();
  out[2 * slot + 1] = v.imag();
}

cdouble load(const Eigen::VectorXd& v, int slot) { return {v[2 * slot], v[2 * slot + 1]}; }

GreenEval assemble(cdouble xx, cdouble zz, cdouble dxx, cdouble dzz, cdouble lateral,
                   double z, cdouble omega) {
  GreenEval g;
  g.tensor.diagonal() << xx, xx, zz;
  g.dz_tensor.diagonal() << dxx, dxx, dzz;
  g.lateral = lateral;
  g.z = z;
  g.omega = omega;
  return g;
}

}  // namespace

Mat3c GreenEval::curl() const {
  const cdouble w = curl_coefficient();
  Mat3c c = Mat3c::Zero();
  c(0, 1) = -w;
  c(1, 0) = w;
  return c;
}

cdouble branch_sqrt(cdouble x) {
  cdouble r = std::sqrt(x);
  if (r.imag() < 0.0 || (r.imag() == 0.0 && r.real() < 0.0)) r = -r;
  return r;
}

ReflectionPair reflection_coeffs(cdouble eps, cdouble mu, double q, cdouble omega) {
  if (!(q >= 0.0)) throw DomainError("reflection_coeffs: q must be non-negative");
  const cdouble k = omega / kC;
  const cdouble k2 = k * k;
  const cdouble q2 = q * q;
  const cdouble beta0 = branch_sqrt(k2 - q2);
  const cdouble beta = branch_sqrt(eps * mu * k2 - q2);
  return reflection_from_betas(eps, mu, k2, q2, beta0, beta, q);
}

GreenEval green_scatter_iu(const MaterialModel& model, double z, double u,
                           const QuadratureOptions& opts) {
  require_height(z, "green_scatter_iu");
  if (!(u > 0.0)) throw DomainError("green_scatter_iu: u must be positive");
  if (model.is_vacuum()) return assemble(0.0, 0.0, 0.0, 0.0, 0.0, z, cdouble(0.0, u));

  const double eps = eval_eps_iu(model, u);
  const double mu = eval_mu_iu(model, u);
  const double kappa2 = u * u / (kC * kC);  // -k^2
  const double contrast = (eps * mu - 1.0) * kappa2;

  // exp(-2 b0 z) is split as exp(-2 b0_min z) exp(-2 (b0 - b0_min) z) so
  // that large u underflows cleanly to zero instead of to denormals.
  const double b0_min = u / kC;
  const double damping = std::exp(-2.0 * b0_min * z);
  if (damping == 0.0) return assemble(0.0, 0.0, 0.0, 0.0, 0.0, z, cdouble(0.0, u));

  VectorIntegrand integrand = [&](double b0, Eigen::Ref<Eigen::VectorXd> out) {
    const double b = std::sqrt(b0 * b0 + contrast);
    const double ds = mu * b0 + b;
    const double dp = eps * b0 + b;
    const double r_s = ((mu * mu - 1.0) * b0 * b0 - contrast) / (ds * ds);
    const double r_p = ((eps * eps - 1.0) * b0 * b0 - contrast) / (dp * dp);
    const double q2 = b0 * b0 - kappa2;
    const double e = std::exp(-2.0 * (b0 - b0_min) * z) / (8.0 * kPi);
    const double xx = e * (r_s - r_p * b0 * b0 / kappa2);
    const double zz = -2.0 * e * r_p * q2 / kappa2;
    out[0] = xx;
    out[1] = zz;
    out[2] = -2.0 * b0 * xx;
    out[3] = -2.0 * b0 * zz;
    out[4] = -e * b0 * q2 * r_p / kappa2;
  };
  const auto res = integrate_semi_infinite(integrand, 5, b0_min, 0.5 / z, opts,
                                           "green_scatter_iu");
  const Eigen::VectorXd v = damping * res.value;
  return assemble(v[0], v[1], v[2], v[3], v[4], z, cdouble(0.0, u));
}

GreenEval green_scatter_complex(const MaterialModel& model, double z, cdouble omega,
                                const QuadratureOptions& opts) {
  require_height(z, "green_scatter_complex");
  if (omega.imag() < 0.0)
    throw DomainError("green_scatter_complex: Im(omega) < 0 is outside the analyticity domain");
  if (omega == 0.0) throw DomainError("green_scatter_complex: omega must be nonzero");
  if (model.is_vacuum()) return assemble(0.0, 0.0, 0.0, 0.0, 0.0, z, omega);

  const cdouble eps = eval_eps(model, omega);
  const cdouble mu = eval_mu(model, omega);
  const cdouble k = omega / kC;
  const cdouble k2 = k * k;
  const double q_split = std::max(k.real(), 0.0);
  const cdouble detune = k2 - q_split * q_split;  // zero for real omega

  // measure = (i / 8 pi) q dq / beta0, expressed per unit of the sector variable.
  auto contribute = [&](double q2_real, cdouble beta0, cdouble measure, double q,
                        Eigen::Ref<Eigen::VectorXd> out) {
    const cdouble q2 = q2_real;
    const cdouble beta = branch_sqrt(eps * mu * k2 - q2);
    const auto r = reflection_from_betas(eps, mu, k2, q2, beta0, beta, q);
    const cdouble e = measure * std::exp(2.0 * kI * beta0 * z);
    const cdouble xx = e * (r.r_s - r.r_p * beta0 * beta0 / k2);
    const cdouble zz = e * 2.0 * r.r_p * q2 / k2;
    const cdouble d = 2.0 * kI * beta0;
    store(out, 0, xx);
    store(out, 1, zz);
    store(out, 2, d * xx);
    store(out, 3, d * zz);
    store(out, 4, -kI * e * beta0 * q2 * r.r_p / k2);
  };

  Eigen::VectorXd total = Eigen::VectorXd::Zero(kComplexDim);

  if (q_split > 0.0) {
    // q = q_split sin t
    VectorIntegrand propagating = [&](double t, Eigen::Ref<Eigen::VectorXd> out) {
      const double s = std::sin(t);
      const double c = std::cos(t);
      const double q = q_split * s;
      const cdouble beta0 = branch_sqrt(detune + q_split * q_split * c * c);
      const cdouble measure = kI / (8.0 * kPi) * q_split * q_split * s * c / beta0;
      contribute(q * q, beta0, measure, q, out);
    };
    total += integrate(propagating, kComplexDim, 0.0, 0.5 * kPi, opts,
                       "green_scatter (propagating sector)")
                 .value;
  }

  // q = sqrt(q_split^2 + s^2)
  VectorIntegrand evanescent = [&](double s, Eigen::Ref<Eigen::VectorXd> out) {
    const double q2 = q_split * q_split + s * s;
    const cdouble beta0 = branch_sqrt(detune - s * s);
    const cdouble measure = kI / (8.0 * kPi) * s / beta0;
    contribute(q2, beta0, measure, std::sqrt(q2), out);
  };
  total += integrate_semi_infinite(evanescent, kComplexDim, 0.0, 0.5 / z, opts,
                                   "green_scatter (evanescent sector)")
               .value;

  return assemble(load(total, 0), load(total, 1), load(total, 2), load(total, 3),
                  load(total, 4), z, omega);
}

GreenEval green_scatter_real(const MaterialModel& model, double z, double omega,
                             const QuadratureOptions& opts) {
  if (!(omega > 0.0)) throw DomainError("green_scatter_real: omega must be positive");
  return green_scatter_complex(model, z, cdouble(omega, 0.0), opts);
}

GreenEval short_distance_green_real(cdouble eps_at_omega, double z, cdouble omega) {
  require_height(z, "short_distance_green_real");
  if (omega == 0.0) throw DomainError("short_distance_green_real: omega must be nonzero");
  const cdouble denom = eps_at_omega + 1.0;
  if (denom == 0.0) throw PoleError("short_distance_green_real: eps = -1 (surface-plasmon pole)", 0.0);
  const cdouble ratio = (eps_at_omega - 1.0) / denom;
  const cdouble pref = kC * kC / (32.0 * kPi * omega * omega * z * z * z) * ratio;
  return assemble(pref, 2.0 * pref, -3.0 / z * pref, -6.0 / z * pref, 1.5 / z * pref, z, omega);
}

Mat3 weighted_iu_short_distance(const std::function<double(double)>& f,
                                const MaterialModel& model, double z, double u_scale,
                                const QuadratureOptions& opts) {
  require_height(z, "weighted_iu_short_distance");
  if (!(u_scale > 0.0)) throw DomainError("weighted_iu_short_distance: u_scale must be positive");
  auto h = [&](double u) {
    const double eps = eval_eps_iu(model, u);
    return f(u) / (u * u) * (eps - 1.0) / (eps + 1.0);
  };

  // Integrability probe: u*h(u) must die out at both ends of the half line.
  double reference = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double u = u_scale * std::pow(10.0, -3.0 + 0.1 * i);
    const double v = std::abs(u * h(u));
    if (!std::isfinite(v)) throw DomainError("weighted_iu_short_distance: weight is not finite");
    reference = std::max(reference, v);
  }
  if (reference == 0.0) return Mat3::Zero();
  for (double end : {1e-9, 1e9}) {
    const double u = u_scale * end;
    const double v = std::abs(u * h(u));
    if (!std::isfinite(v) || v > 1e-6 * reference) {
      throw DomainError(std::string("weighted_iu_short_distance: f(u)/u^2 is not integrable at u -> ") +
                        (end < 1.0 ? "0" : "infinity"));
    }
  }

  const double integral = integrate_scalar_semi_infinite(h, 0.0, u_scale, opts);
  const double pref = -kC * kC / (32.0 * kPi * z * z * z) * integral;
  Mat3 out = Mat3::Zero();
  out.diagonal() << pref, pref, 2.0 * pref;
  return out;
}

Eigen::VectorXd integrate_imaginary_axis(const MaterialModel& model, double z, int dim,
                                         double u_scale, const IuIntegrand& fn,
                                         const Tolerances& tol) {
  require_height(z, "integrate_imaginary_axis");
  if (model.is_vacuum()) return Eigen::VectorXd::Zero(dim);
  const QuadratureOptions inner{tol.green_iu};
  VectorIntegrand outer = [&](double u, Eigen::Ref<Eigen::VectorXd> out) {
    if (u <= 0.0) {
      out.setZero();
      return;
    }
    fn(u, green_scatter_iu(model, z, u, inner), out);
  };
  return integrate_semi_infinite(outer, dim, 0.0, u_scale, QuadratureOptions{tol.frequency},
                                 "imaginary-frequency integral")
      .value;
}

}  // namespace cpforce
