#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "cpforce/atom.hpp"
#include "cpforce/error.hpp"
#include "cpforce/greens.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpforce;
using testing::rel_diff;

namespace {

ShiftedSpectrum two_level_spectrum(const AtomSpec& atom, double wt, double gamma1) {
  ShiftedSpectrum s = bare_spectrum(atom);
  s.omega_tilde(1, 0) = wt;
  s.omega_tilde(0, 1) = -wt;
  s.widths(1) = gamma1;
  s.width_channels(1, 0) = gamma1;
  return s;
}

AtomSpec random_atom(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> gap(0.3, 1.5), comp(-1.0, 1.0);
  std::vector<double> e{0.0};
  for (int i = 1; i < n; ++i) e.push_back(e.back() + gap(rng));
  AtomSpec atom(e, 1e-7);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < m; ++k) atom.set_dipole(m, k, Vec3(comp(rng), comp(rng), comp(rng)));
  return atom;
}

}  // namespace

TEST_SUITE("atom") {

TEST_CASE("two-level construction") {
  const auto a = AtomSpec::two_level(1e-7, 1.1, 0.4, 0.3);
  CHECK(a.size() == 2);
  CHECK(a.omega(1, 0) == doctest::Approx(1.1));
  CHECK(a.omega(0, 1) == doctest::Approx(-1.1));
  CHECK(a.dipole(1, 0).norm() == doctest::Approx(1.0));
  CHECK(a.dipole(1, 0).z() == doctest::Approx(std::cos(0.4)));
  CHECK((a.dipole(0, 1) - a.dipole(1, 0)).norm() == 0.0);
  CHECK(a.dipole(0, 0).norm() == 0.0);
  CHECK(a.kappa() == doctest::Approx(1.5e-7).epsilon(1e-14));
  CHECK_THROWS_AS(AtomSpec::two_level(1e-7, -1.0, 0.0), DomainError);
}

TEST_CASE("static polarizability of the ground state") {
  const auto a = AtomSpec::two_level(1e-7, 1.2, 0.5, 0.2);
  const auto p = alpha0(a, 0, 0.0);
  const Vec3 d = a.dipole(1, 0);
  const Mat3 expect = 2.0 / 1.2 * d * d.transpose();
  CHECK((p.tensor.real() - expect).norm() < 1e-14);
  CHECK(p.tensor.imag().norm() == 0.0);
  Eigen::SelfAdjointEigenSolver<Mat3> es(p.tensor.real());
  CHECK(es.eigenvalues().minCoeff() > -1e-14);
}

TEST_CASE("imaginary-axis polarizability is real, decreasing, and flips sign for the excited state") {
  const auto a = AtomSpec::two_level(1e-7, 1.0, 0.0);
  double prev = 1e300;
  for (double u = 0.01; u < 50.0; u *= 1.5) {
    const auto g = alpha0(a, 0, {0.0, u}).tensor;
    const auto e = alpha0(a, 1, {0.0, u}).tensor;
    CHECK(g.imag().norm() == 0.0);
    CHECK(g(2, 2).real() < prev);
    prev = g(2, 2).real();
    CHECK((e + g).norm() < 1e-15 * g.norm());
  }
  CHECK(alpha0_scalar(a, 0, {0.0, 1.0}).real() ==
        doctest::Approx(alpha0(a, 0, {0.0, 1.0}).tensor.trace().real() / 3.0));
}

TEST_CASE("pole on a transition frequency") {
  const auto a = AtomSpec::two_level(1e-7, 1.0, 0.0);
  CHECK_THROWS_AS(alpha0(a, 0, 1.0), PoleError);
}

TEST_CASE("generalized polarizability reduces to the lowest-order one") {
  std::mt19937 rng(7);
  for (int n = 2; n <= 5; ++n) {
    const auto a = random_atom(rng, n);
    const auto s = bare_spectrum(a);
    for (int l = 0; l < n; ++l)
      for (cdouble w : {cdouble(0.0, 0.4), cdouble(0.0, 3.0), cdouble(0.17, 0.05)}) {
        const Mat3c diff = alpha_generalized(a, s, l, l, w).tensor - alpha0(a, l, w).tensor;
        CHECK(diff.norm() <= 1e-13 * alpha0(a, l, w).tensor.norm());
      }
  }
}

TEST_CASE("symmetric combination for the excited two-level atom") {
  const double wt = 1.1, G = 0.003;
  const auto a = AtomSpec::two_level(1e-7, 1.09, 0.3);
  const auto s = two_level_spectrum(a, wt, G);
  const Vec3 d = a.dipole(1, 0);
  for (double u : {0.0, 0.05, 0.9, 7.0}) {
    const Mat3c sum =
        alpha_generalized(a, s, 1, 1, {0.0, u}).tensor + alpha_generalized(a, s, 1, 1, {0.0, -u}).tensor;
    const double f = wt / (wt * wt + (u + G / 2) * (u + G / 2)) * (wt * wt + u * u + G * G / 4) /
                     (wt * wt + (u - G / 2) * (u - G / 2));
    const Mat3 expect = -4.0 * d * d.transpose() * f;
    CHECK((sum - expect.cast<cdouble>()).norm() < 1e-13 * expect.norm());
    if (u == 0.0) {
      const double u0 = -4.0 / (wt * (1.0 + G * G / (4.0 * wt * wt)));
      CHECK(sum(2, 2).real() == doctest::Approx(u0 * d.z() * d.z()).epsilon(1e-13));
    }
  }
}

TEST_CASE("swap identity alpha_mn(w) = conj alpha_nm(-conj w)") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> wd(0.0, 0.01);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + trial % 3;
    const auto a = random_atom(rng, n);
    ShiftedSpectrum s = bare_spectrum(a);
    for (int m = 1; m < n; ++m) s.widths(m) = wd(rng);
    for (int m = 0; m < n; ++m)
      for (int k = 0; k < n; ++k)
        for (cdouble w : {cdouble(0.3, 0.2), cdouble(0.0, 1.3)}) {
          const Mat3c lhs = alpha_generalized(a, s, m, k, w).tensor;
          const Mat3c rhs = alpha_generalized(a, s, k, m, -std::conj(w)).tensor.conjugate();
          CHECK((lhs - rhs).norm() <= 1e-13 * (1.0 + lhs.norm()));
        }
  }
}

TEST_CASE("lowest-order polarizability at iu is real symmetric for random atoms") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_atom(rng, 3 + trial % 3);
    for (int l = 0; l < a.size(); ++l)
      for (double u : {0.1, 1.0, 10.0}) {
        const Mat3c t = alpha0(a, l, {0.0, u}).tensor;
        CHECK(t.imag().norm() == 0.0);
        CHECK((t - t.transpose()).norm() <= 1e-14 * t.norm());
      }
  }
}

TEST_CASE("dipole validation") {
  AtomSpec a({0.0, 1.0}, 1e-7);
  CHECK_THROWS_AS(a.set_dipole(0, 0, Vec3(0, 0, 1)), DomainError);
  CHECK_THROWS_AS(a.set_dipole(0, 2, Vec3(0, 0, 1)), DomainError);
  CHECK_THROWS_AS(AtomSpec({0.0, -1.0}, 1e-7), DomainError);
}

}
