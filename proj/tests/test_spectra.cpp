#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "cpforce/error.hpp"
#include "cpforce/spectra.hpp"
#include "cpforce/units.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpforce;
using testing::rel_diff;

namespace {

// Closed-form resonant shift with an independent permittivity evaluation.
double resonant_shift_oracle(double K, double w, double wp, double gamma) {
  const cdouble e = testing::eps_oracle(w, wp, gamma);
  return -K * (std::norm(e) - 1.0) / std::norm(e + 1.0);
}

}  // namespace

TEST_SUITE("spectra") {

TEST_CASE("vacuum gives no shift and no width") {
  const auto a = AtomSpec::two_level(1e-7, 1.0, 0.0);
  const auto s = bare_spectrum(a, 0.01);
  const auto v = MaterialModel::vacuum();
  CHECK(shift_channel_general(a, v, 0.01, 1, 0, s) == 0.0);
  CHECK(shift_channel_general(a, v, 0.01, 0, 1, s) == 0.0);
  CHECK(width_channel_general(a, v, 0.01, 1, 0, s) == 0.0);
}

TEST_CASE("general channels reproduce the short-distance two-level forms") {
  const auto m = testing::reference_medium();
  const double z = testing::kZ1;
  for (double w10 : {0.95, 1.05, 1.25}) {
    INFO("omega10 = " << w10);
    const auto a = AtomSpec::two_level(testing::kG, w10, 0.0);
    const auto s = bare_spectrum(a, z);
    const double K = reduced_C_over_hbar_z3(testing::kG, 0.0, z);

    const double res = shift_channel_resonant(a, m, z, 1, 0, s);
    CHECK(rel_diff(res, resonant_shift_oracle(K, w10, testing::kOmegaP, testing::kGamma)) < 0.03);

    const double offres = (shift_channel_general(a, m, z, 1, 0, s) - res) - shift_channel_general(a, m, z, 0, 1, s);
    CHECK(rel_diff(offres, two_level_offresonant_shift(a, m, z, w10)) < 0.03);

    CHECK(width_channel_general(a, m, z, 0, 1, s) == 0.0);
    CHECK(shift_channel_resonant(a, m, z, 0, 1, s) == 0.0);
  }
}

TEST_CASE("general width reproduces the short-distance rate") {
  // The relative correction to the short-distance rate grows like z^2 and
  // reaches 7% at z = 0.0075 below the resonance, so compare closer in.
  const auto m = testing::reference_medium();
  for (double z : {0.005, 0.0025})
    for (double w10 : {0.95, 1.05, 1.1, 1.12, 1.1319, 1.14, 1.16, 1.25}) {
      const auto a = AtomSpec::two_level(testing::kG, w10, 0.0);
      const auto s = bare_spectrum(a, z);
      CHECK(rel_diff(width_channel_general(a, m, z, 1, 0, s), two_level_decay_rate(a, m, z, w10)) < 0.03);
    }
}

TEST_CASE("closed-form decay rate and off-resonant shift vs oracles") {
  const auto m = testing::reference_medium();
  const auto a = AtomSpec::two_level(testing::kG, 1.1, 0.0);
  const double z = testing::kZ1, K = reduced_C_over_hbar_z3(testing::kG, 0.0, z);
  for (double w : {0.9, 1.1319, 1.3}) {
    const cdouble e = testing::eps_oracle(w);
    CHECK(rel_diff(two_level_decay_rate(a, m, z, w), 4.0 * K * e.imag() / std::norm(e + 1.0)) < 1e-13);
    CHECK(rel_diff(two_level_shift_rhs(a, m, z, w), resonant_shift_oracle(K, w, testing::kOmegaP, testing::kGamma)) < 1e-13);
    const double oracle = 2.0 * K * w / kPi * testing::oracle_integral_0_inf([&](double u) {
      const double eu = testing::eps_oracle({0.0, u}).real();
      return (eu - 1.0) / (eu + 1.0) / (w * w + u * u);
    });
    CHECK(rel_diff(two_level_offresonant_shift(a, m, z, w), oracle) < 1e-8);
  }
}

TEST_CASE("lossless medium far from the resonance has almost no width") {
  const auto clean = MaterialModel::drude_lorentz_dielectric(testing::kOmegaP, 1e-8);
  const double w10 = 0.6, z = testing::kZ1;
  const auto a = AtomSpec::two_level(testing::kG, w10, 0.0);
  const auto s = bare_spectrum(a, z);
  const double K = reduced_C_over_hbar_z3(testing::kG, 0.0, z);
  CHECK(two_level_decay_rate(a, clean, z, w10) < 2e-6 * two_level_decay_rate(a, testing::reference_medium(), z, w10));
  // What is left in the full tensor is the reflection correction to the
  // free-space rate g w^3, not absorption.
  const double g_clean = width_channel_general(a, clean, z, 1, 0, s);
  CHECK(std::abs(g_clean) < 1.5 * testing::kG * w10 * w10 * w10);
  CHECK(std::abs(g_clean) < 1e-3 * K);
}

TEST_CASE("two-level solver limits") {
  const auto m = testing::reference_medium();
  const auto far = solve_two_level_shift(AtomSpec::two_level(testing::kG, 1.1, 0.0), m, 1e3);
  CHECK(std::abs(far.omega_tilde - 1.1) < 1e-10);
  const auto off = solve_two_level_shift(AtomSpec::two_level(0.0, 1.1, 0.0), m, testing::kZ1);
  CHECK(off.delta_omega == 0.0);
  CHECK(off.gamma == 0.0);
  CHECK(off.delta_omega_offres == 0.0);
  CHECK(check_offresonant_bound(off, AtomSpec::two_level(0.0, 1.1, 0.0), m, testing::kZ1).ratio == 0.0);
}

TEST_CASE("fixed point agrees with the quintic root") {
  const auto m = testing::reference_medium();
  for (double z : {testing::kZ1, testing::kZ2})
    for (double w10 : {0.9, 1.1, 1.13, 1.16, 1.4}) {
      const auto a = AtomSpec::two_level(testing::kG, w10, 0.0);
      const auto s = solve_two_level_shift(a, m, z);
      const double K = reduced_C_over_hbar_z3(testing::kG, 0.0, z);
      const double root = testing::companion_root(testing::quintic(K, w10, testing::kOmegaP, testing::kGamma),
                                         w10 + s.delta_omega_bare);
      INFO("z = " << z << ", omega10 = " << w10);
      CHECK(rel_diff(s.omega_tilde, root) < 1e-10);
      CHECK(rel_diff(s.delta_omega, root - w10) < 1e-7);
    }
}

TEST_CASE("self-consistency residual") {
  const auto m = testing::reference_medium();
  for (double w10 = 1.0; w10 <= 1.3; w10 += 0.01) {
    const auto a = AtomSpec::two_level(testing::kG, w10, 0.0);
    const auto s = solve_two_level_shift(a, m, testing::kZ1);
    CHECK(std::abs(two_level_shift_rhs(a, m, testing::kZ1, s.omega_tilde) - s.delta_omega) <= 1e-12);
    CHECK(s.gamma >= 0.0);
    CHECK(s.spectrum.omega_tilde(1, 0) == -s.spectrum.omega_tilde(0, 1));
    CHECK(s.spectrum.widths(0) == 0.0);
    CHECK(s.spectrum.widths(1) == s.gamma);
  }
}

TEST_CASE("perturbative and self-consistent shifts agree for small shifts") {
  const auto m = testing::reference_medium();
  int checked = 0;
  for (double w10 = 0.5; w10 <= 2.0; w10 += 0.05) {
    const auto s = solve_two_level_shift(AtomSpec::two_level(testing::kG, w10, 0.0), m, 0.02);
    if (std::abs(s.delta_omega) / w10 < 1e-4) {
      ++checked;
      CHECK(rel_diff(s.delta_omega, s.delta_omega_bare) < 0.1);
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("off-resonant bound holds along a sweep") {
  const auto m = testing::reference_medium();
  for (int i = 0; i < 50; ++i) {
    const double w10 = 0.8 + 0.6 * i / 49.0;
    const auto a = AtomSpec::two_level(testing::kG, w10, 0.0);
    const auto s = solve_two_level_shift(a, m, testing::kZ1);
    const auto b = check_offresonant_bound(s, a, m, testing::kZ1);
    CHECK(b.ratio <= b.bound);
    CHECK(b.satisfied);
    CHECK(b.ratio <= 1e-4);
  }
}

TEST_CASE("validity warning far outside the short-distance regime") {
  const auto s = solve_two_level_shift(AtomSpec::two_level(testing::kG, 1.1, 0.0), testing::reference_medium(), 0.2);
  CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("general spectrum of a three-level atom") {
  const auto m = testing::reference_medium();
  const auto a = testing::three_level_atom();
  const auto s = solve_spectrum_general(a, m, testing::kZ1);
  CHECK((s.omega_tilde + s.omega_tilde.transpose()).norm() < 1e-15);
  CHECK(s.widths(0) == 0.0);
  for (int i = 0; i < 3; ++i) {
    CHECK(s.widths(i) >= 0.0);
    CHECK(s.widths(i) == doctest::Approx(s.width_channels.row(i).sum()).epsilon(1e-14));
    CHECK(s.level_shifts(i) == doctest::Approx(s.shift_channels.row(i).sum()).epsilon(1e-14));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(s.omega_tilde(i, j) == doctest::Approx(a.omega(i, j) + s.level_shifts(i) - s.level_shifts(j)).epsilon(1e-12));
  // converged: another evaluation leaves the shifts unchanged
  const auto again = evaluate_spectrum(a, m, testing::kZ1, s);
  CHECK((again.level_shifts - s.level_shifts).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("general two-level spectrum matches the short-distance solver") {
  const auto m = testing::reference_medium();
  const auto a = AtomSpec::two_level(testing::kG, 1.12, 0.0);
  const auto g = solve_spectrum_general(a, m, 0.005);
  const auto c = solve_two_level_shift(a, m, 0.005);
  CHECK(rel_diff(g.omega_tilde(1, 0) - 1.12, c.delta_omega + c.delta_omega_offres) < 0.03);
  CHECK(rel_diff(g.widths(1), c.gamma) < 0.03);
}

TEST_CASE("quasi-degenerate transitions are rejected") {
  AtomSpec a({0.0, 1.0, 2.0}, testing::kG);
  a.set_dipole(1, 0, Vec3(0, 0, 1));
  a.set_dipole(2, 1, Vec3(0, 0, 1));
  ShiftedSpectrum s = bare_spectrum(a, testing::kZ1);
  s.widths << 0.0, 1e-3, 3e-3;
  CHECK_THROWS_AS(check_nondegenerate(s), DegeneracyError);
  s.widths.setZero();
  CHECK_NOTHROW(check_nondegenerate(bare_spectrum(testing::three_level_atom(), testing::kZ1)));
}

}
