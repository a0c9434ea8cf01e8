#pragma once

// Polarization tensor of gapped, doped graphene in the reduced form used by
// the reflection coefficients: pi00 = Pi_00 (hbar c)/hbar in eV and
// pi = Pi (hbar c)^3/hbar in eV^3. Frequencies and wave numbers are passed as
// energies (hbar xi, hbar omega, hbar c k).

#include <complex>

#include "cpneq/quadrature.hpp"
#include "cpneq/quantities.hpp"

namespace cpneq {

struct GrapheneSheet {
  double delta = 0.0;  // mass gap, eV
  double mu = 0.0;     // chemical potential, eV
  double fermi_velocity_ratio = constants::default_fermi_velocity_ratio;

  bool gap_dominated() const { return delta > 2.0 * std::abs(mu); }
  void validate() const;
};

enum class Region { ImaginaryAxis, PlasmonicSubgap, PlasmonicSupragap, LargeK };
enum class TemperaturePath { FiniteT, ZeroT };

const char* to_string(Region region);
const char* to_string(TemperaturePath path);

struct PolarizationPair {
  std::complex<double> pi00;
  std::complex<double> pi;
  Region region = Region::ImaginaryAxis;
  TemperaturePath temperature_path = TemperaturePath::FiniteT;
  double error_pi00 = 0.0;  // absolute quadrature error estimates
  double error_pi = 0.0;
  long evaluations = 0;
};

struct RegionClassification {
  Region region = Region::LargeK;
  // p for the plasmonic regions, q-tilde for LargeK (energies).
  double scale = 0.0;
  // Lower u-limit: D-tilde = delta/p or D = delta/q-tilde.
  double lower = 0.0;
  // 1 - delta^2/p^2; plasmonic regions only.
  double a = 0.0;
  // Roots of the common denominator; supragap only, u1 <= u2.
  double u1 = 0.0;
  double u2 = 0.0;
  // Fermi threshold 2 mu / scale; meaningful when has_fermi_threshold.
  double u0 = 0.0;
  bool has_fermi_threshold = false;
};

struct PolarizationOptions {
  double rel_tol = 1e-9;
  long max_evaluations = 200000;
  quad::RuleFamily family = quad::RuleFamily::GaussKronrod;
  bool parallel = false;
  double zero_temperature_threshold = 1e-3;  // K
  double fine_structure = constants::fine_structure;
  double boltzmann = constants::boltzmann;
};

// 2[x + (1 - x^2) arctan(1/x)]
double psi(double x);

// sum over kappa = +-1 of 1/(exp(B u + kappa mu/kT) + 1)
double fermi_weight(double u, double b, double mu_over_kt);

// Delta - p (1 + Delta^2/p^2) artanh(p/Delta), for p < Delta.
double phi1(double p, double delta);
// Delta - p (1 + Delta^2/p^2) [artanh(Delta/p) + i pi/2], for p >= Delta.
std::complex<double> phi2(double p, double delta);

PolarizationPair pi_matsubara(const GrapheneSheet& sheet, double xi, double k,
                              double temperature,
                              const PolarizationOptions& options = {});

RegionClassification classify_region(const GrapheneSheet& sheet, double omega,
                                     double k);

PolarizationPair pi_real_subgap(const GrapheneSheet& sheet, double omega,
                                double k, double temperature,
                                const PolarizationOptions& options = {});
PolarizationPair pi_real_supragap(const GrapheneSheet& sheet, double omega,
                                  double k, double temperature,
                                  const PolarizationOptions& options = {});
PolarizationPair pi_real_largek(const GrapheneSheet& sheet, double omega,
                                double k, double temperature,
                                const PolarizationOptions& options = {});
PolarizationPair pi_zero_temperature(const GrapheneSheet& sheet, double omega,
                                     double k,
                                     const PolarizationOptions& options = {});

// Classifies (omega, k) and calls the matching region function; temperatures
// below options.zero_temperature_threshold take the zero-temperature path.
PolarizationPair pi_real(const GrapheneSheet& sheet, double omega, double k,
                         double temperature,
                         const PolarizationOptions& options = {});

}  // namespace cpneq
