#include <cmath>

#include "cpforce/error.hpp"
#include "cpforce/material.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace cpforce;
using testing::eps_oracle;

TEST_SUITE("material") {

TEST_CASE("vacuum limit") {
  const auto m = MaterialModel::drude_lorentz_dielectric(0.0, 0.01);
  CHECK(std::abs(eval_eps(m, {0.5, 0.0}) - 1.0) == 0.0);
  CHECK(eval_eps(MaterialModel::vacuum(), {0.3, 0.2}) == cdouble(1.0));
  CHECK(eval_mu(testing::reference_medium(), {0.3, 0.0}) == cdouble(1.0));
}

TEST_CASE("pinned values") {
  const auto m = testing::reference_medium();
  CHECK(eval_eps(m, 0.0).real() == doctest::Approx(1.5625).epsilon(1e-15));
  CHECK(eval_eps(m, {0.0, 1.0}).real() == doctest::Approx(1.2798507462686568).epsilon(1e-14));
  CHECK(eval_eps_iu(m, 1.0) == doctest::Approx(1.2798507462686568).epsilon(1e-14));
  CHECK(eval_eps_iu(m, 0.0) == doctest::Approx(1.5625).epsilon(1e-15));
  CHECK(std::abs(eval_eps_iu(m, 1e6) - 1.0) < 1e-9);
}

TEST_CASE("agrees with an independent evaluation off the axes") {
  const auto m = testing::reference_medium();
  for (cdouble w : {cdouble(0.3, 0.0), cdouble(1.1, 0.02), cdouble(2.5, 1.3), cdouble(0.99, 0.0)})
    CHECK(testing::rel_diff(eval_eps(m, w), eps_oracle(w)) < 1e-14);
}

TEST_CASE("surface resonance") {
  CHECK(surface_resonance(MaterialModel::drude_lorentz_dielectric(0.0, 0.01)) == doctest::Approx(1.0));
  CHECK(surface_resonance(testing::reference_medium()) == doctest::Approx(1.1319231422671772).epsilon(1e-14));
  CHECK(surface_resonance(MaterialModel::drude_lorentz_dielectric(1.0, 0.01)) ==
        doctest::Approx(std::sqrt(1.5)).epsilon(1e-14));
  CHECK_THROWS_AS(surface_resonance(MaterialModel::vacuum()), NotApplicableError);
}

TEST_CASE("absorption, Schwarz reflection and monotonicity") {
  const auto m = testing::reference_medium();
  for (int i = 1; i < 300; ++i) {
    const double w = 3.0 * i / 300.0;
    CHECK(eval_eps(m, w).imag() > 0.0);
  }
  double prev = eval_eps_iu(m, 0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double u = 100.0 * i / 1000.0;
    const cdouble e = eval_eps(m, {0.0, u});
    CHECK(std::abs(e.imag()) <= 1e-14 * std::abs(e));
    const double v = eval_eps_iu(m, u);
    CHECK(v >= 1.0);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("domain errors") {
  const auto m = testing::reference_medium();
  CHECK_THROWS_AS(eval_eps(m, {1.0, -0.1}), DomainError);
  CHECK_THROWS_AS(eval_eps_iu(m, -1.0), DomainError);
  DrudeLorentzParams p{0.75, 1.0, 0.0};
  CHECK_THROWS_AS(p.validate(), DomainError);
  CHECK_THROWS_AS(MaterialModel::drude_lorentz_dielectric(0.75, -0.1), DomainError);
}

}
