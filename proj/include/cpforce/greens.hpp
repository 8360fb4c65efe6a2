#pragma once

#include <Eigen/Core>
#include <functional>

#include "cpforce/material.hpp"
#include "cpforce/quadrature.hpp"

namespace cpforce {

using Mat3c = Eigen::Matrix3cd;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Vec3c = Eigen::Vector3cd;

// Quadrature targets used by the Green-tensor and frequency integrals.
// `uniform` implements the front end's --tolerance override.
struct Tolerances {
  double green_iu = 1e-9;
  double green_real = 1e-8;
  double frequency = 1e-8;

  static Tolerances uniform(double tol) { return {tol, tol, tol}; }
};

struct ReflectionPair {
  cdouble r_s;
  cdouble r_p;
};

// Equal-position scattering Green tensor of the half space z < 0, evaluated
// at height z > 0 in vacuum.
//
// `dz_tensor` is d/dz_A of G(r_A, r_A, omega), i.e. both arguments move; by
// reciprocity the derivative with respect to the first argument alone is half
// of it. `lateral` is d/dx G_xz(r, r_A) at r = r_A (first argument only); the
// same value is d/dy G_yz, while d/dx G_zx = d/dy G_zy = -lateral. These are
// the only non-vanishing first-argument derivatives at coincidence.
struct GreenEval {
  Mat3c tensor = Mat3c::Zero();
  Mat3c dz_tensor = Mat3c::Zero();
  cdouble lateral = 0.0;
  double z = 0.0;
  cdouble omega = 0.0;

  // First-argument z-derivative of G(r, r_A) at r = r_A.
  Mat3c one_sided_dz() const { return 0.5 * dz_tensor; }

  // The curl (first argument) of G at coincidence is w * [[0,-1,0],[1,0,0],[0,0,0]]
  // with w returned here.
  cdouble curl_coefficient() const { return 0.5 * dz_tensor(0, 0) + lateral; }
  Mat3c curl() const;
};

// sqrt with the branch Im >= 0 enforced (and Re >= 0 on the real axis).
cdouble branch_sqrt(cdouble x);

// Fresnel coefficients r_s = (mu b0 - b)/(mu b0 + b), r_p = (eps b0 - b)/(eps b0 + b)
// with b0^2 = omega^2/c^2 - q^2 and b^2 = eps mu omega^2/c^2 - q^2, Im b0, Im b >= 0.
// Throws PoleError when a denominator vanishes relative to its first term.
ReflectionPair reflection_coeffs(cdouble eps, cdouble mu, double q, cdouble omega);

// G at omega = i u (u > 0): real tensor from the integral over the imaginary
// part b0 of the normal wave number, b0 in [u/c, inf).
GreenEval green_scatter_iu(const MaterialModel& model, double z, double u,
                           const QuadratureOptions& opts = {1e-9});

// G at a real frequency omega > 0 from the transverse wave-number integral,
// split into the propagating (q < omega/c) and evanescent sectors.
GreenEval green_scatter_real(const MaterialModel& model, double z, double omega,
                             const QuadratureOptions& opts = {1e-8});

// Same integral for any omega in the closed upper half plane (used for the
// complex pole frequencies of the resonant force and for cross-checks on the
// imaginary axis).
GreenEval green_scatter_complex(const MaterialModel& model, double z, cdouble omega,
                                const QuadratureOptions& opts = {1e-8});

// Short-distance closed form c^2/(32 pi omega^2 z^3) (eps-1)/(eps+1) diag(1,1,2),
// with dz_tensor = -3/z tensor and the matching quasi-static lateral term.
GreenEval short_distance_green_real(cdouble eps_at_omega, double z, cdouble omega);

// Short-distance value of  int_0^inf du f(u) G(iu):
//   -(c^2 / 32 pi z^3) int_0^inf du f(u)/u^2 (eps(iu)-1)/(eps(iu)+1) diag(1,1,2).
// `u_scale` sets the quadrature mapping (typically the atomic frequency).
// Throws DomainError when f(u)/u^2 is not integrable at either end.
Mat3 weighted_iu_short_distance(const std::function<double(double)>& f,
                                const MaterialModel& model, double z, double u_scale = 1.0,
                                const QuadratureOptions& opts = {1e-9});

// Integrates fn(u, G(iu)) over u in [0, inf) with the full Green tensor
// evaluated at every abscissa. `u_scale` sets the quadrature mapping.
using IuIntegrand =
    std::function<void(double u, const GreenEval& g, Eigen::Ref<Eigen::VectorXd> out)>;
Eigen::VectorXd integrate_imaginary_axis(const MaterialModel& model, double z, int dim,
                                         double u_scale, const IuIntegrand& fn,
                                         const Tolerances& tol = {});

}  // namespace cpforce
