#include "cpforce/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "cpforce/error.hpp"

namespace cpforce {

namespace {

// Kronrod abscissae and weights of the 21-point rule (QUADPACK qk21); the
// odd-indexed abscissae carry the embedded 10-point Gauss rule.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600525452700, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double a;
  double b;
  Eigen::VectorXd value;
  Eigen::VectorXd abs_value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment apply_rule(const VectorIntegrand& f, int dim, double a, double b,
                   Eigen::VectorXd& scratch) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Eigen::VectorXd kronrod = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd gauss = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd abs_sum = Eigen::VectorXd::Zero(dim);

  f(center, scratch);
  kronrod += kWgk[10] * scratch;
  abs_sum += kWgk[10] * scratch.cwiseAbs();
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f(center - dx, scratch);
    Eigen::VectorXd lo = scratch;
    f(center + dx, scratch);
    const Eigen::VectorXd sum = lo + scratch;
    kronrod += kWgk[j] * sum;
    abs_sum += kWgk[j] * (lo.cwiseAbs() + scratch.cwiseAbs());
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  Segment s{a, b, kronrod * half, abs_sum * std::abs(half), 0.0};
  s.error = ((kronrod - gauss) * half).cwiseAbs().maxCoeff();
  return s;
}

}  // namespace

QuadratureResult integrate(const VectorIntegrand& f, int dim, double a, double b,
                           const QuadratureOptions& opts, const std::string& label) {
  QuadratureResult result;
  result.value = Eigen::VectorXd::Zero(dim);
  if (a == b) return result;

  Eigen::VectorXd scratch(dim);
  std::priority_queue<Segment> heap;
  heap.push(apply_rule(f, dim, a, b, scratch));
  result.evaluations = 21;

  Eigen::VectorXd total = heap.top().value;
  Eigen::VectorXd total_abs = heap.top().abs_value;
  double total_error = heap.top().error;
  constexpr double kRoundoff = 50.0 * std::numeric_limits<double>::epsilon();
  // Absolute floor far below any physical scale; stops refinement of
  // integrands that have decayed into the denormal range.
  constexpr double kFloor = 1e3 * std::numeric_limits<double>::min() /
                            std::numeric_limits<double>::epsilon();

  while (true) {
    const double magnitude = total.cwiseAbs().maxCoeff();
    const double target = std::max({opts.abs_tol, opts.rel_tol * magnitude,
                                     kRoundoff * total_abs.maxCoeff(), kFloor});
    if (total_error <= target) break;
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      throw NumericError(label + ": adaptive quadrature did not converge (estimate " +
                             std::to_string(magnitude) + ", error bound " +
                             std::to_string(total_error) + ")",
                         magnitude, total_error);
    }
    Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Interval cannot be split further in double precision.
      throw NumericError(label + ": interval collapsed before reaching tolerance",
                         magnitude, total_error);
    }
    Segment left = apply_rule(f, dim, worst.a, mid, scratch);
    Segment right = apply_rule(f, dim, mid, worst.b, scratch);
    result.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_abs += left.abs_value + right.abs_value - worst.abs_value;
    total_error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    if (!std::isfinite(total_error)) {
      throw NumericError(label + ": integrand produced a non-finite value",
                         std::numeric_limits<double>::quiet_NaN(), total_error);
    }
  }

  // Re-sum to remove drift from the running updates.
  result.value.setZero();
  total_error = 0.0;
  result.intervals = static_cast<int>(heap.size());
  while (!heap.empty()) {
    result.value += heap.top().value;
    total_error += heap.top().error;
    heap.pop();
  }
  result.error = total_error;
  return result;
}

QuadratureResult integrate_semi_infinite(const VectorIntegrand& f, int dim, double a,
                                         double scale, const QuadratureOptions& opts,
                                         const std::string& label) {
  if (!(scale > 0.0)) throw DomainError(label + ": mapping scale must be positive");
  Eigen::VectorXd inner(dim);
  VectorIntegrand mapped = [&](double t, Eigen::Ref<Eigen::VectorXd> out) {
    const double one_minus = 1.0 - t;
    const double x = a + scale * t / one_minus;
    const double jac = scale / (one_minus * one_minus);
    f(x, inner);
    out = inner * jac;
  };
  return integrate(mapped, dim, 0.0, 1.0, opts, label);
}

double integrate_scalar(const std::function<double(double)>& f, double a, double b,
                        const QuadratureOptions& opts) {
  VectorIntegrand v = [&](double x, Eigen::Ref<Eigen::VectorXd> out) { out[0] = f(x); };
  return integrate(v, 1, a, b, opts, "integrate_scalar").value[0];
}

double integrate_scalar_semi_infinite(const std::function<double(double)>& f, double a,
                                      double scale, const QuadratureOptions& opts) {
  VectorIntegrand v = [&](double x, Eigen::Ref<Eigen::VectorXd> out) { out[0] = f(x); };
  return integrate_semi_infinite(v, 1, a, scale, opts, "integrate_scalar_semi_infinite")
      .value[0];
}

}  // namespace cpforce
