#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>

namespace cpforce {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct QuadratureResult {
  Eigen::VectorXd value;
  double error = 0.0;  // max-norm error estimate
  int evaluations = 0;
  int intervals = 0;
};

// Writes the integrand components at x into `out` (pre-sized to dim).
using VectorIntegrand = std::function<void(double x, Eigen::Ref<Eigen::VectorXd> out)>;

// Globally adaptive 21-point Gauss-Kronrod quadrature of a vector-valued
// integrand on [a, b]. All components share abscissae; the error is measured
// in the max norm. Throws NumericError when the interval budget runs out.
QuadratureResult integrate(const VectorIntegrand& f, int dim, double a, double b,
                           const QuadratureOptions& opts = {},
                           const std::string& label = "integrate");

// Integral over [a, inf) through x = a + scale * t / (1 - t), t in [0, 1).
// `scale` should match the decay length of the integrand.
QuadratureResult integrate_semi_infinite(const VectorIntegrand& f, int dim, double a,
                                         double scale, const QuadratureOptions& opts = {},
                                         const std::string& label = "integrate_semi_infinite");

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts = {});
double integrate_scalar_semi_infinite(const std::function<double(double)>& f, double a,
                                      double scale, const QuadratureOptions& opts = {});

}  // namespace cpforce
