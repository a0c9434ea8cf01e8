#pragma once

// Unit conventions shared by every module.
//
// Energies are in eV, lengths in nm, temperatures in K. Frequencies are
// exchanged as energies (hbar*omega) and wave numbers as hbar*c*k, so every
// kinematic quantity below is an energy in eV.

#include <cmath>
#include <utility>

namespace cpneq {

namespace constants {
inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double hbar_c = 197.3269804;                 // eV nm
inline constexpr double boltzmann = 8.617333262e-5;           // eV / K
inline constexpr double fine_structure = 7.2973525693e-3;
inline constexpr double default_fermi_velocity_ratio = 1.0 / 300.0;
inline constexpr double ev_per_nm_in_newton = 1.602176634e-10;  // (eV/nm) -> N
}  // namespace constants

struct UnitSystem {
  double hbar_c = constants::hbar_c;
  double boltzmann = constants::boltzmann;
  double fine_structure = constants::fine_structure;
  double fermi_velocity_ratio = constants::default_fermi_velocity_ratio;

  // Throws invalid-parameter when any invariant is broken.
  void validate() const;
};

// A point on the real frequency axis, both coordinates as energies.
struct KinematicPoint {
  double omega = 0.0;
  double k = 0.0;
};

// hbar * xi_l = 2 pi k_B T l.
double matsubara_energy(long l, double temperature,
                        const UnitSystem& units = {});

// sqrt(k^2 + xi^2)
double q_imaginary(double xi, double k);

// sqrt(k^2 - omega^2); evanescent sector only.
double q_evanescent(double omega, double k);

// sqrt(omega^2 - r^2 k^2) with r = v_F / c; plasmonic region only.
double plasmonic_p(double omega, double k, double fermi_velocity_ratio);

// (sqrt(r^2 k^2 - omega^2), omega / sqrt(r^2 k^2 - omega^2)); large-k region.
std::pair<double, double> largek_qtilde_gamma(double omega, double k,
                                              double fermi_velocity_ratio);

}  // namespace cpneq
