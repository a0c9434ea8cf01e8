#pragma once

#include "cpneq/materials.hpp"
#include "cpneq/polarization.hpp"
#include "cpneq/quadrature.hpp"
#include "cpneq/reflection.hpp"

namespace cpneq {

enum class Execution { Serial, Parallel };

// Test fixtures replacing the physical plate response.
enum class CoefficientFixture {
  None,
  IdealMetal,  // r_tm = 1, r_te = -1 on the imaginary axis
  Frozen,      // plate evaluated at ForceSpec::frozen_temperature
};

struct ForceSpec {
  double rel_tol = 1e-6;
  long max_matsubara = 100000;
  long max_evaluations = 4000000;
  quad::RuleFamily family = quad::RuleFamily::GaussKronrod;
  Execution execution = Execution::Serial;
  CoefficientFixture fixture = CoefficientFixture::None;
  double frozen_temperature = 300.0;
  double k_cutoff = 60.0;      // upper limit of t = 2 a q
  double omega_cutoff = 40.0;  // in units of k_B max(T_E, T_p)
  int pole_scan = 16;          // scan points per plasmonic k-piece, 0 = off
  PolarizationOptions polarization;

  void validate() const;
};

struct Scenario {
  double separation = 1000.0;  // nm
  double environment_temperature = 300.0;
  double plate_temperature = 300.0;
  Nanoparticle particle;
  CoatedPlate plate;
  bool override_validity_floor = false;

  // Separation floor of 200 nm and radius < 0.1 hbar c / (k_B T_max).
  void validate() const;
  double alpha0() const { return static_polarizability(particle); }
};

struct ForceValue {
  double newtons = 0.0;
  double ratio_f0 = 0.0;
  double ratio_fcl = 0.0;
  double error_estimate = 0.0;  // N
  long terms = 0;               // Matsubara terms summed
  long evaluations = 0;
};

// -3 hbar c alpha0 / (2 pi a^5), in newtons; a in nm, alpha0 in nm^3.
double f0(double a, double alpha0);
// -3 k_B T alpha0 / (4 a^4), in newtons.
double f_classical(double a, double temperature, double alpha0);

ForceValue make_force_value(const Scenario& scenario, double newtons,
                            double error_estimate);

// Matsubara sum at the environment temperature; the plate enters through its
// reflection coefficients at the plate temperature.
ForceValue equilibrium_force(const Scenario& scenario, const ForceSpec& spec = {});

// The plate as the force integrands see it: at the plate temperature, or at
// the frozen reference temperature in fixture mode.
CoatedPlate effective_plate(const Scenario& scenario, const ForceSpec& spec);

// Single Matsubara term (l = 0 already halved), in eV/nm, with its error.
struct MatsubaraTerm {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};
MatsubaraTerm matsubara_term(const Scenario& scenario, long l,
                             const ForceSpec& spec = {});

}  // namespace cpneq
