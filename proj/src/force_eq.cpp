#include "cpneq/force_eq.hpp"

#include <cmath>
#include <exception>
#include <string>
#include <vector>

#include "cpneq/errors.hpp"

namespace cpneq {

namespace {

constexpr long kBatch = 8;

double ev_per_nm_to_newton(double f) { return f * constants::ev_per_nm_in_newton; }

}  // namespace

void ForceSpec::validate() const {
  require(rel_tol > 0.0 && rel_tol < 1.0, ErrorKind::InvalidParameter,
          "rel_tol must lie in (0, 1)");
  require(max_matsubara > 0, ErrorKind::InvalidParameter,
          "max_matsubara must be positive");
  require(k_cutoff > 0.0 && omega_cutoff > 0.0, ErrorKind::InvalidParameter,
          "cutoffs must be positive");
  require(fixture != CoefficientFixture::Frozen || frozen_temperature > 0.0,
          ErrorKind::InvalidParameter, "frozen_temperature must be positive");
}

void Scenario::validate() const {
  require(std::isfinite(separation) && separation > 0.0,
          ErrorKind::InvalidParameter, "separation must be positive");
  require(override_validity_floor || separation >= 200.0,
          ErrorKind::InvalidParameter,
          "separation " + std::to_string(separation) +
              " nm is below the 200 nm validity floor of the Dirac model");
  require(std::isfinite(environment_temperature) && environment_temperature > 0.0,
          ErrorKind::InvalidParameter, "environment temperature must be positive");
  require(std::isfinite(plate_temperature) && plate_temperature > 0.0,
          ErrorKind::InvalidParameter, "plate temperature must be positive");
  particle.validate();
  const double t_max = std::max(environment_temperature, plate_temperature);
  const double limit = 0.1 * constants::hbar_c / (constants::boltzmann * t_max);
  require(particle.radius < limit, ErrorKind::InvalidParameter,
          "nanoparticle radius " + std::to_string(particle.radius) +
              " nm is not small against hbar c/(k_B T) (limit " +
              std::to_string(limit) + " nm)");
  plate.validate();
}

double f0(double a, double alpha0) {
  require(a > 0.0, ErrorKind::InvalidParameter, "separation must be positive");
  return ev_per_nm_to_newton(-3.0 * constants::hbar_c * alpha0 /
                             (2.0 * constants::pi * std::pow(a, 5)));
}

double f_classical(double a, double temperature, double alpha0) {
  require(a > 0.0 && temperature > 0.0, ErrorKind::InvalidParameter,
          "separation and temperature must be positive");
  return ev_per_nm_to_newton(-3.0 * constants::boltzmann * temperature * alpha0 /
                             (4.0 * std::pow(a, 4)));
}

ForceValue make_force_value(const Scenario& s, double newtons,
                            double error_estimate) {
  ForceValue v;
  v.newtons = newtons;
  v.error_estimate = error_estimate;
  const double alpha0 = s.alpha0();
  if (alpha0 > 0.0) {
    v.ratio_f0 = newtons / f0(s.separation, alpha0);
    v.ratio_fcl = newtons / f_classical(s.separation, s.environment_temperature, alpha0);
  }
  return v;
}

CoatedPlate effective_plate(const Scenario& scenario, const ForceSpec& spec) {
  CoatedPlate plate = scenario.plate;
  plate.temperature = spec.fixture == CoefficientFixture::Frozen
                          ? spec.frozen_temperature
                          : scenario.plate_temperature;
  return plate;
}

MatsubaraTerm matsubara_term(const Scenario& scenario, long l,
                             const ForceSpec& spec) {
  const double a = scenario.separation;
  const double h = constants::hbar_c / (2.0 * a);
  const double x = matsubara_energy(l, scenario.environment_temperature);
  const double tl = x / h;
  const CoatedPlate plate = effective_plate(scenario, spec);
  const bool ideal = spec.fixture == CoefficientFixture::IdealMetal;

  // t = 2 a q / (hbar c) = s + t_l; k = h sqrt(s (s + 2 t_l))
  auto f = [&](double, double s, double) {
    const double t = s + tl;
    const double k = h * std::sqrt(s * (s + 2.0 * tl));
    Reflection<double> r{1.0, -1.0};
    if (!ideal) r = reflection_imaginary(plate, x, k, spec.polarization);
    double bracket = (2.0 * t * t - tl * tl) * r.tm;
    if (l > 0) bracket -= tl * tl * r.te;
    return t * std::exp(-s) * bracket;
  };
  quad::QuadratureSpec qs;
  qs.rel_tol = 0.1 * spec.rel_tol;
  qs.family = spec.family;
  qs.max_evaluations = spec.max_evaluations;
  const auto res = quad::integrate_finite(f, 0.0, spec.k_cutoff, qs);

  const double kt = constants::boltzmann * scenario.environment_temperature;
  const double pref = -2.0 * kt * scenario.alpha0() / std::pow(2.0 * a, 4) *
                      std::exp(-tl) * (l == 0 ? 0.5 : 1.0);
  MatsubaraTerm term;
  term.value = pref * res.value;
  term.error = std::abs(pref) * res.error_estimate;
  term.evaluations = res.evaluations;
  return term;
}

ForceValue equilibrium_force(const Scenario& scenario, const ForceSpec& spec) {
  scenario.validate();
  spec.validate();
  if (scenario.alpha0() == 0.0) return make_force_value(scenario, 0.0, 0.0);

  double sum = 0.0, err = 0.0;
  long evaluations = 0;
  int small_run = 0;
  long l = 0;
  const bool parallel = spec.execution == Execution::Parallel;
  std::vector<MatsubaraTerm> batch(kBatch);
  for (;;) {
    if (l >= spec.max_matsubara)
      throw Error(ErrorKind::SummationError,
                  "Matsubara sum not converged after " +
                      std::to_string(spec.max_matsubara) + " terms");
    const long first = l;
    const long n = std::min(kBatch, spec.max_matsubara - first);
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) if (parallel)
    for (long i = 0; i < n; ++i) {
      try {
        batch[i] = matsubara_term(scenario, first + i, spec);
      } catch (...) {
#pragma omp critical(cpneq_matsubara_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (long i = 0; i < n; ++i, ++l) {
      const MatsubaraTerm& t = batch[i];
      sum += t.value;
      err += t.error;
      evaluations += t.evaluations;
      small_run = std::abs(t.value) <= spec.rel_tol * std::abs(sum) ? small_run + 1 : 0;
      if (small_run == 3) {
        ForceValue v = make_force_value(scenario, ev_per_nm_to_newton(sum),
                                        ev_per_nm_to_newton(err));
        v.terms = l + 1;
        v.evaluations = evaluations;
        return v;
      }
    }
  }
}

}  // namespace cpneq
