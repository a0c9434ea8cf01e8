#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <sstream>

#include "cpneq/errors.hpp"
#include "cpneq/materials.hpp"
#include "doctest.h"

using namespace cpneq;

namespace {

OscillatorModel single_oscillator() {
  OscillatorModel m;
  m.eps_inf = 1.0;
  m.oscillators = {{2.0, 1.0, 0.2}};
  return m;
}

// Im eps of the model on a log grid wide enough that the truncated tails
// are negligible.
OpticalTable tabulate(const Substrate& s, double lo, double hi, int n) {
  OpticalTable t;
  for (int i = 0; i < n; ++i) {
    const double e = lo * std::pow(hi / lo, i / double(n - 1));
    t.energy.push_back(e);
    t.im_epsilon.push_back(s.permittivity_real_axis(e).imag());
  }
  return t;
}

}  // namespace

TEST_CASE("oscillator model on both axes") {
  const auto s = Substrate::oscillators(single_oscillator());
  CHECK(s.static_epsilon() == doctest::Approx(3.0));
  CHECK(s.permittivity_imaginary_axis(2.0) ==
        doctest::Approx(1.0 + 2.0 / (1.0 + 4.0 + 0.4)).epsilon(1e-15));
  const auto e = s.permittivity_real_axis(1.0);
  CHECK(e.real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(e.imag() == doctest::Approx(2.0 / 0.2).epsilon(1e-15));
  CHECK_FALSE(s.lossless());
  CHECK(Substrate::vacuum().lossless());
}

TEST_CASE("default silica is passive and reasonable") {
  const auto s = Substrate::default_sio2();
  CHECK(s.static_epsilon() == doctest::Approx(3.8).epsilon(0.05));
  double prev = s.static_epsilon();
  for (double xi = 1e-3; xi < 100.0; xi *= 2.0) {
    const double e = s.permittivity_imaginary_axis(xi);
    CHECK(e <= prev);
    CHECK(e >= 1.0);
    prev = e;
  }
  for (double w = 1e-3; w < 100.0; w *= 1.7)
    CHECK(s.permittivity_real_axis(w).imag() >= 0.0);
}

TEST_CASE("Kramers-Kronig from a tabulated oscillator") {
  const auto model = Substrate::oscillators(single_oscillator());
  const auto table = Substrate::table(tabulate(model, 1e-5, 1e5, 6001));
  CHECK_FALSE(table.coverage_warning().has_value());
  for (double xi : {0.01, 0.3, 1.0, 3.0, 20.0})
    CHECK(table.permittivity_imaginary_axis(xi) ==
          doctest::Approx(model.permittivity_imaginary_axis(xi)).epsilon(2e-4));
  for (double w : {0.05, 0.5, 0.9, 1.1, 2.0, 10.0}) {
    const auto a = table.permittivity_real_axis(w);
    const auto b = model.permittivity_real_axis(w);
    CHECK(std::abs(a.real() - b.real()) < 2e-3 * std::abs(b));
    CHECK(a.imag() == doctest::Approx(b.imag()).epsilon(1e-3));
  }
}

TEST_CASE("segment integrals are exact for the interpolant") {
  OpticalTable t{{0.1, 0.5, 1.0, 3.0, 7.0}, {0.0, 1.0, 4.0, 2.0, 0.5}};
  const auto s = Substrate::table(t);
  CHECK(s.coverage_warning().has_value());
  auto im = [&](double x) { return s.permittivity_real_axis(x).imag(); };
  for (double xi : {0.0, 0.2, 1.0, 5.0}) {
    double sum = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i)
      sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
          [&](double x) { return x * im(x) / (x * x + xi * xi); }, t.energy[i - 1],
          t.energy[i], 10, 1e-15);
    CHECK(s.permittivity_imaginary_axis(xi) ==
          doctest::Approx(1.0 + 2.0 / M_PI * sum).epsilon(1e-12));
  }
}

TEST_CASE("table parsing") {
  std::istringstream ok("# energy, im\n0.1, 0.5\n\n0.2 0.7\n");
  const auto t = load_optical_table(ok);
  CHECK(t.size() == 2);

  const auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      load_optical_table(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("0.1 0.5\n0.2\n") == 2);
  CHECK(line_of("0.1 0.5\n0.2 -1\n") == 2);
  CHECK(line_of("# c\n0.1 0.5\n0.1 0.6\n") == 3);
  CHECK(line_of("0.1 0.5 9\n") == 1);
  CHECK(line_of("-1 0.5\n") == 1);
  CHECK_THROWS_AS(load_optical_table_file("/nonexistent/table.csv"), Error);
  CHECK_THROWS_AS(Substrate::table(OpticalTable{}), Error);
}

TEST_CASE("nanoparticle polarizability") {
  Nanoparticle p;
  p.radius = 2.0;
  p.eps0 = 4.0;
  CHECK(static_polarizability(p) == doctest::Approx(8.0 * 3.0 / 6.0));
  p.kind = Nanoparticle::Kind::Metallic;
  CHECK(static_polarizability(p) == 8.0);
  p.radius = -1.0;
  CHECK_THROWS_AS(static_polarizability(p), Error);
}
