#include "cpneq/quantities.hpp"

#include <string>

#include "cpneq/errors.hpp"

namespace cpneq {

void UnitSystem::validate() const {
  require(hbar_c > 0.0, ErrorKind::InvalidParameter, "hbar_c must be positive");
  require(boltzmann > 0.0, ErrorKind::InvalidParameter,
          "boltzmann must be positive");
  require(fine_structure > 0.0 && fine_structure < 1.0,
          ErrorKind::InvalidParameter, "fine_structure must lie in (0, 1)");
  require(fermi_velocity_ratio > 0.0 && fermi_velocity_ratio < 1.0,
          ErrorKind::InvalidParameter,
          "fermi_velocity_ratio must lie in (0, 1)");
}

double matsubara_energy(long l, double temperature, const UnitSystem& units) {
  require(temperature > 0.0, ErrorKind::InvalidParameter,
          "temperature must be positive, got " + std::to_string(temperature));
  require(l >= 0, ErrorKind::InvalidParameter,
          "Matsubara index must be non-negative");
  return 2.0 * constants::pi * units.boltzmann * temperature *
         static_cast<double>(l);
}

double q_imaginary(double xi, double k) {
  require(xi >= 0.0 && k >= 0.0, ErrorKind::InvalidParameter,
          "q_imaginary needs xi >= 0 and k >= 0");
  return std::hypot(k, xi);
}

double q_evanescent(double omega, double k) {
  require(omega >= 0.0 && k >= omega, ErrorKind::DomainError,
          "q_evanescent needs 0 <= omega <= k (propagating sector excluded)");
  // (k - w)(k + w) keeps precision near the light cone.
  return std::sqrt((k - omega) * (k + omega));
}

double plasmonic_p(double omega, double k, double fermi_velocity_ratio) {
  const double vk = fermi_velocity_ratio * k;
  require(k >= 0.0 && omega >= vk, ErrorKind::DomainError,
          "plasmonic_p needs omega >= v_F k");
  return std::sqrt((omega - vk) * (omega + vk));
}

std::pair<double, double> largek_qtilde_gamma(double omega, double k,
                                              double fermi_velocity_ratio) {
  const double vk = fermi_velocity_ratio * k;
  require(omega >= 0.0 && vk > omega, ErrorKind::DomainError,
          "largek_qtilde_gamma needs v_F k > omega");
  const double qt = std::sqrt((vk - omega) * (vk + omega));
  return {qt, omega / qt};
}

}  // namespace cpneq
