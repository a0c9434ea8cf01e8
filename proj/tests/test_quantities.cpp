#include <cmath>

#include "cpneq/errors.hpp"
#include "cpneq/quantities.hpp"
#include "doctest.h"

using namespace cpneq;

TEST_CASE("matsubara energies") {
  CHECK(matsubara_energy(0, 300.0) == 0.0);
  const double x1 = matsubara_energy(1, 300.0);
  CHECK(x1 == doctest::Approx(2 * M_PI * 8.617333262e-5 * 300.0).epsilon(1e-15));
  CHECK(matsubara_energy(7, 300.0) == doctest::Approx(7 * x1).epsilon(1e-15));
  CHECK_THROWS_AS(matsubara_energy(1, 0.0), Error);
  CHECK_THROWS_AS(matsubara_energy(-1, 300.0), Error);
}

TEST_CASE("wave numbers keep precision near their cones") {
  CHECK(q_imaginary(3.0, 4.0) == 5.0);
  const double k = 1.0, w = 1.0 - 1e-12;
  CHECK(q_evanescent(w, k) == doctest::Approx(std::sqrt(2e-12)).epsilon(1e-9));
  CHECK_THROWS_AS(q_evanescent(2.0, 1.0), Error);

  const double r = 1.0 / 300.0;
  CHECK(plasmonic_p(5.0, 900.0, r) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_THROWS_AS(plasmonic_p(1.0, 900.0, r), Error);
  const auto [qt, g] = largek_qtilde_gamma(3.0, 1500.0, r);
  CHECK(qt == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(g == doctest::Approx(0.75).epsilon(1e-15));
  CHECK_THROWS_AS(largek_qtilde_gamma(5.0, 1500.0, r), Error);
}

TEST_CASE("unit system validation") {
  UnitSystem u;
  CHECK_NOTHROW(u.validate());
  u.fermi_velocity_ratio = 1.5;
  CHECK_THROWS_AS(u.validate(), Error);
}
