#pragma once

#include <complex>
#include <optional>

#include "cpneq/materials.hpp"
#include "cpneq/polarization.hpp"

namespace cpneq {

// Graphene sheet (optional) on a substrate (vacuum allowed).
struct CoatedPlate {
  std::optional<GrapheneSheet> sheet;
  Substrate substrate;
  double temperature = 300.0;  // K, graphene temperature

  void validate() const;
};

template <class T>
struct Reflection {
  T tm{};
  T te{};
};

// Transmitted-wave number sqrt(k^2 - eps omega^2): principal root, and
// -i sqrt(|x|) for a real negative radicand (limit Im eps -> 0+).
std::complex<double> q_epsilon_real(std::complex<double> eps, double omega,
                                    double k);

// Coefficients from given permittivity and polarization values.
Reflection<double> reflection_imaginary_from(double eps, double xi, double k,
                                             double pi00, double pi);
// q = sqrt(k^2 - omega^2) is passed in so callers integrating in q keep it
// exact near the light cone.
Reflection<std::complex<double>> reflection_real_from(std::complex<double> eps,
                                                      double omega, double k,
                                                      double q,
                                                      std::complex<double> pi00,
                                                      std::complex<double> pi);

Reflection<double> reflection_imaginary(const CoatedPlate& plate, double xi,
                                        double k,
                                        const PolarizationOptions& options = {});
Reflection<std::complex<double>> reflection_real(
    const CoatedPlate& plate, double omega, double k,
    const PolarizationOptions& options = {});

}  // namespace cpneq
