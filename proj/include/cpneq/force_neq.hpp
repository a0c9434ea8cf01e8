#pragma once

#include <array>

#include "cpneq/force_eq.hpp"

namespace cpneq {

// Contributions of the kinematic regions of the inner k-integral.
struct RegionContributions {
  double plasmonic_subgap = 0.0;
  double plasmonic_supragap = 0.0;
  double large_k = 0.0;

  double sum() const { return plasmonic_subgap + plasmonic_supragap + large_k; }
};

struct NeqCorrection {
  double newtons = 0.0;
  double error_estimate = 0.0;  // N
  double tail_bound = 0.0;      // N, bound on the omega-cutoff remainder
  RegionContributions regions;  // N
  long evaluations = 0;
  long poles = 0;               // plasmon poles used as split points
};

struct NeqBreakdown {
  ForceValue equilibrium_part;
  NeqCorrection r_part;
  ForceValue total;
};

// n(omega/k_B T_E) - n(omega/k_B T_p) with n the Bose factor.
double theta(double omega, double environment_temperature,
             double plate_temperature);

// Inner k-integral at fixed omega: int t e^-t Im{(2 t^2 + w^2) r_tm + w^2 r_te} dt
// with t = 2 a q/(hbar c), w = 2 a omega/(hbar c), split by region.
struct InnerIntegral {
  std::array<double, 3> regions{};  // subgap, supragap, large-k
  double error = 0.0;
  long evaluations = 0;
  long poles = 0;
};
InnerIntegral nonequilibrium_inner(const Scenario& scenario, double omega,
                                   const ForceSpec& spec = {});

NeqCorrection nonequilibrium_correction(const Scenario& scenario,
                                        const ForceSpec& spec = {});

// F_neq = F_eq(T_E; plate at T_p) + F_r.
NeqBreakdown nonequilibrium_force(const Scenario& scenario,
                                  const ForceSpec& spec = {});

}  // namespace cpneq
