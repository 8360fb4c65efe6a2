#include <cmath>

#include "cpforce/error.hpp"
#include "cpforce/units.hpp"
#include "doctest.h"

using namespace cpforce;

TEST_SUITE("units") {

TEST_CASE("internal speed of light and coupling") {
  CHECK(kSpeedOfLight == doctest::Approx(1.0 / (2.0 * kPi)));
  CHECK(dipole_coupling(1e-7) == doctest::Approx(1.5e-7).epsilon(1e-14));
}

TEST_CASE("reduced C/(hbar z^3) matches an SI reduction") {
  // SI path: d_A^2 from g, C = d_A^2 (1 + cos^2 theta) / (32 pi eps0),
  // z = 0.0075 lambda_T with lambda_T = 2 pi c / omega_T.
  const double hbar = 1.054571817e-34, eps0 = 8.8541878128e-12, c = 299792458.0;
  const double wT = 1.0e15, g = 1e-7, z = 0.0075;
  const double dA2 = 3.0 * kPi * hbar * eps0 * c * c * c * g / (wT * wT);
  const double C = dA2 * 2.0 / (32.0 * kPi * eps0);
  const double zsi = z * 2.0 * kPi * c / wT;
  const double oracle = C / (hbar * zsi * zsi * zsi * wT);
  CHECK(reduced_C_over_hbar_z3(g, 0.0, z) == doctest::Approx(oracle).epsilon(1e-12));
  // frozen value of the same oracle
  CHECK(reduced_C_over_hbar_z3(g, 0.0, z) == doctest::Approx(1.7917519129555273e-4).epsilon(1e-12));
}

TEST_CASE("trivial limits and exact ratios") {
  CHECK(reduced_C_over_hbar_z3(0.0, 0.3, 0.01) == 0.0);
  const double a = reduced_C_over_hbar_z3(1e-7, 0.0, 0.01);
  const double b = reduced_C_over_hbar_z3(1e-7, kPi / 2.0, 0.01);
  // (1 + cos^2 theta) goes from 2 to 1
  CHECK(b / a == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("z^-3 scaling and linearity in g") {
  for (double g : {1e-9, 1e-7, 3e-6})
    for (double th : {0.0, 0.4, 1.3})
      for (double z : {0.001, 0.0075, 0.2}) {
        const double v = reduced_C_over_hbar_z3(g, th, z);
        CHECK(reduced_C_over_hbar_z3(g, th, 2.0 * z) == doctest::Approx(v / 8.0).epsilon(1e-14));
        CHECK(reduced_C_over_hbar_z3(2.0 * g, th, z) == doctest::Approx(2.0 * v).epsilon(1e-14));
      }
}

TEST_CASE("C/hbar from the dipole components agrees with the angle form") {
  const double th = 0.7, z = 0.004;
  const double dz = std::cos(th);
  CHECK(reduced_C_over_hbar(1e-7, 1.0, dz * dz) / (z * z * z) ==
        doctest::Approx(reduced_C_over_hbar_z3(1e-7, th, z)).epsilon(1e-14));
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(reduced_C_over_hbar_z3(1e-7, 0.0, 0.0), DomainError);
  CHECK_THROWS_AS(reduced_C_over_hbar_z3(1e-7, 0.0, -1.0), DomainError);
  CHECK_THROWS_AS(reduced_C_over_hbar_z3(-1.0, 0.0, 0.1), DomainError);
  CHECK_THROWS_AS(UnitSystem(0.0, 1e-7), DomainError);
}

TEST_CASE("unit system round trips") {
  const UnitSystem u(2.1e15, 1e-7);
  CHECK(u.lambda_T() == doctest::Approx(2.0 * kPi * 299792458.0 / 2.1e15).epsilon(1e-14));
  for (double x : {1e-9, 0.37, 12.5}) {
    CHECK(u.frequency_to_internal(u.frequency_from_internal(x)) == doctest::Approx(x).epsilon(1e-14));
    CHECK(u.length_to_internal(u.length_from_internal(x)) == doctest::Approx(x).epsilon(1e-14));
    CHECK(u.time_to_internal(u.time_from_internal(x)) == doctest::Approx(x).epsilon(1e-14));
  }
  CHECK(u.dipole_moment_si() > 0.0);
}

}
