#include "cpneq/force_neq.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include <boost/math/tools/toms748_solve.hpp>

#include "cpneq/errors.hpp"

namespace cpneq {

namespace {

using cplx = std::complex<double>;

struct Vec3 {
  std::array<double, 3> v{};

  Vec3& operator+=(const Vec3& o) {
    for (int i = 0; i < 3; ++i) v[i] += o.v[i];
    return *this;
  }
  friend Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend Vec3 operator-(Vec3 a, const Vec3& b) {
    for (int i = 0; i < 3; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend Vec3 operator*(Vec3 a, double s) {
    for (double& x : a.v) x *= s;
    return a;
  }
  friend Vec3 operator*(double s, const Vec3& a) { return a * s; }
  friend double abs(const Vec3& a) {
    return std::abs(a.v[0]) + std::abs(a.v[1]) + std::abs(a.v[2]);
  }
};

// Everything the inner integrand needs at one omega.
struct InnerContext {
  const CoatedPlate* plate;
  const ForceSpec* spec;
  double omega;  // eV
  double h;      // hbar c / (2 a), eV
  cplx eps;

  struct Point {
    double integrand;  // t e^-t Im{...}
    cplx den_tm;       // denominators of r_tm and r_te, scaled by 1/k^3
    cplx den_te;
  };

  Point at(double t) const {
    const double q = h * t;
    const double k = std::hypot(q, omega);
    cplx pi00 = 0.0, pi = 0.0;
    Point out;
    if (plate->sheet) {
      const auto c = classify_region(*plate->sheet, omega, k);
      // region edges are integrable singularities of the polarization
      if (c.scale == 0.0 || (c.region == Region::PlasmonicSupragap && c.a == 0.0)) {
        out.integrand = 0.0;
        out.den_tm = out.den_te = std::numeric_limits<double>::quiet_NaN();
        return out;
      }
      PolarizationPair p;
      try {
        p = pi_real(*plate->sheet, omega, k, plate->temperature, spec->polarization);
      } catch (const IntegrationError& e) {
        char where[96];
        std::snprintf(where, sizeof where, " (polarization at omega=%.17g eV, k=%.17g eV)",
                      omega, k);
        std::string msg = e.what();
        const std::string prefix = std::string(to_string(ErrorKind::IntegrationError)) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        throw IntegrationError(msg + where, e.partial_value(),
                               e.error_estimate());
      }
      pi00 = p.pi00;
      pi = p.pi;
    }
    const auto r = reflection_real_from(eps, omega, k, q, pi00, pi);
    const double w = omega / h;
    const cplx bracket = (2.0 * t * t + w * w) * r.tm + w * w * r.te;
    out.integrand = t * std::exp(-t) * bracket.imag();
    const cplx qe = q_epsilon_real(eps, omega, k);
    const double k3 = k * k * k;
    out.den_tm = (k * k * (eps * q + qe) + q * qe * pi00) / k3;
    out.den_te = (k * k * (q + qe) + pi) / k3;
    return out;
  }
};

// Zeros of Re(denominator) inside (ta, tb): plasmon-like poles of the
// coefficients that would otherwise hide between quadrature nodes.
std::vector<double> find_poles(const InnerContext& ctx, double ta, double tb,
                               int scan, long& evaluations) {
  std::vector<double> roots;
  if (scan <= 0 || !(tb > ta)) return roots;
  std::vector<double> ts(scan + 1), tm(scan + 1), te(scan + 1);
  for (int i = 0; i <= scan; ++i) {
    // interior nodes only; the ends may be singular
    const double s = (i + 0.5) / (scan + 1);
    ts[i] = ta + (tb - ta) * s;
    const auto p = ctx.at(ts[i]);
    tm[i] = p.den_tm.real();
    te[i] = p.den_te.real();
    ++evaluations;
  }
  const auto refine = [&](double lo, double hi, bool use_tm, double flo, double fhi) {
    auto f = [&](double t) {
      ++evaluations;
      const auto p = ctx.at(t);
      return use_tm ? p.den_tm.real() : p.den_te.real();
    };
    boost::uintmax_t iters = 60;
    const auto tol = [](double a, double b) {
      return std::abs(b - a) <= 1e-13 * std::max(std::abs(a), std::abs(b));
    };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
    return 0.5 * (r.first + r.second);
  };
  for (int i = 0; i < scan; ++i) {
    if ((tm[i] < 0.0) != (tm[i + 1] < 0.0))
      roots.push_back(refine(ts[i], ts[i + 1], true, tm[i], tm[i + 1]));
    if ((te[i] < 0.0) != (te[i + 1] < 0.0))
      roots.push_back(refine(ts[i], ts[i + 1], false, te[i], te[i + 1]));
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

double bose(double x) { return 1.0 / std::expm1(x); }

}  // namespace

double theta(double omega, double environment_temperature,
             double plate_temperature) {
  require(std::isfinite(omega) && omega > 0.0, ErrorKind::DomainError,
          "theta needs omega > 0 (both Bose factors diverge at 0)");
  require(environment_temperature > 0.0 && plate_temperature > 0.0,
          ErrorKind::InvalidParameter, "temperatures must be positive");
  if (environment_temperature == plate_temperature) return 0.0;
  const double kb = constants::boltzmann;
  return bose(omega / (kb * environment_temperature)) -
         bose(omega / (kb * plate_temperature));
}

InnerIntegral nonequilibrium_inner(const Scenario& scenario, double omega,
                                   const ForceSpec& spec) {
  require(omega > 0.0, ErrorKind::InvalidParameter, "omega must be positive");
  const CoatedPlate plate = effective_plate(scenario, spec);
  InnerContext ctx{&plate, &spec, omega, constants::hbar_c / (2.0 * scenario.separation),
                   plate.substrate.permittivity_real_axis(omega)};
  InnerIntegral out;
  if (spec.fixture == CoefficientFixture::IdealMetal) return out;

  const double r = plate.sheet ? plate.sheet->fermi_velocity_ratio
                               : constants::default_fermi_velocity_ratio;
  const double delta = plate.sheet ? plate.sheet->delta : 0.0;
  const double t_max = spec.k_cutoff;
  // k = omega / v_F and p = delta expressed in t
  const double t_b = omega * std::sqrt((1.0 - r) * (1.0 + r)) / r / ctx.h;
  const double pd2 = omega * omega * (1.0 - r) * (1.0 + r) - delta * delta;
  const double t_d = pd2 > 0.0 ? std::sqrt(pd2) / r / ctx.h : 0.0;

  // substrate light cone k = sqrt(Re eps) omega, where q_eps turns real
  const double t_eps = ctx.eps.real() > 1.0
                           ? omega / ctx.h * std::sqrt(ctx.eps.real() - 1.0)
                           : 0.0;

  struct Piece {
    int region;  // 0 subgap, 1 supragap, 2 large-k
    double a, b;
    bool left_singular, right_singular;
  };
  std::vector<Piece> pieces;
  if (t_d > 0.0) pieces.push_back({1, 0.0, std::min(t_d, t_max), false, t_d < t_max});
  if (t_b > t_d) pieces.push_back({0, t_d, std::min(t_b, t_max), t_d > 0.0, t_b < t_max});
  if (t_b < t_max) pieces.push_back({2, t_b, t_max, true, false});

  for (const auto& pc : pieces) {
    if (!(pc.b > pc.a)) continue;
    quad::QuadratureSpec qs;
    qs.rel_tol = 0.1 * spec.rel_tol;
    qs.abs_tol = 1e-300;
    qs.family = spec.family;
    qs.max_evaluations = spec.max_evaluations;
    qs.left_singular = pc.left_singular;
    qs.right_singular = pc.right_singular;
    if (t_eps > pc.a && t_eps < pc.b) qs.split_points.push_back(t_eps);
    if (pc.region != 2 && plate.sheet) {
      long ev = 0;
      for (double t : find_poles(ctx, pc.a, pc.b, spec.pole_scan, ev))
        if (t > pc.a && t < pc.b) qs.split_points.push_back(t);
      out.evaluations += ev;
      out.poles += static_cast<long>(qs.split_points.size()) -
                   (t_eps > pc.a && t_eps < pc.b ? 1 : 0);
    }
    const Region expect = pc.region == 0   ? Region::PlasmonicSubgap
                          : pc.region == 1 ? Region::PlasmonicSupragap
                                           : Region::LargeK;
    const auto res = quad::integrate_finite(
        [&](double t) {
          // Nodes that round onto a region edge sit on an integrable
          // singularity with vanishing weight; they are dropped.
          if (plate.sheet) {
            const double k = std::hypot(ctx.h * t, omega);
            if (classify_region(*plate.sheet, omega, k).region != expect) return 0.0;
          }
          return ctx.at(t).integrand;
        },
        pc.a, pc.b, qs);
    out.regions[pc.region] += res.value;
    out.error += res.error_estimate;
    out.evaluations += res.evaluations;
  }
  return out;
}

NeqCorrection nonequilibrium_correction(const Scenario& scenario,
                                        const ForceSpec& spec) {
  scenario.validate();
  spec.validate();
  NeqCorrection out;
  const double te = scenario.environment_temperature;
  const double tp = scenario.plate_temperature;
  const double alpha0 = scenario.alpha0();
  if (te == tp || alpha0 == 0.0 || spec.fixture == CoefficientFixture::IdealMetal)
    return out;

  const double w_max = spec.omega_cutoff * constants::boltzmann * std::max(te, tp);
  const double w_floor = 1e-12 * w_max;
  quad::QuadratureSpec qs;
  qs.rel_tol = spec.rel_tol;
  qs.abs_tol = 1e-300;
  qs.family = spec.family;
  qs.max_evaluations = spec.max_evaluations;
  qs.parallel = spec.execution == Execution::Parallel;
  if (scenario.plate.sheet) {
    for (double s : {scenario.plate.sheet->delta, 2.0 * std::abs(scenario.plate.sheet->mu)})
      if (s > 0.0 && s < w_max) qs.split_points.push_back(s);
  }

  std::atomic<long> poles{0}, inner_evaluations{0};
  auto f = [&](double w) {
    quad::Sample<Vec3> s;
    // Below w_floor the kinematics underflow. Im r is odd in omega, so the
    // integrand stays bounded as omega -> 0 and the dropped part is of
    // relative order 1e-12.
    if (w < w_floor) return s;
    const double th = theta(w, te, tp);
    if (th == 0.0) return s;
    const InnerIntegral in = nonequilibrium_inner(scenario, w, spec);
    poles += in.poles;
    inner_evaluations += in.evaluations;
    for (int i = 0; i < 3; ++i) s.value.v[i] = th * in.regions[i];
    s.error = std::abs(th) * in.error;
    return s;
  };
  const auto res = quad::integrate_finite(f, 0.0, w_max, qs);

  const double a = scenario.separation;
  const double pref = 2.0 * alpha0 / (constants::pi * std::pow(2.0 * a, 4)) *
                      constants::ev_per_nm_in_newton;
  out.regions.plasmonic_subgap = pref * res.value.v[0];
  out.regions.plasmonic_supragap = pref * res.value.v[1];
  out.regions.large_k = pref * res.value.v[2];
  out.newtons = out.regions.sum();
  out.error_estimate = std::abs(pref) * res.error_estimate;
  out.tail_bound = std::exp(-spec.omega_cutoff) * std::abs(out.newtons);
  out.evaluations = res.evaluations + inner_evaluations.load();
  out.poles = poles.load();
  return out;
}

NeqBreakdown nonequilibrium_force(const Scenario& scenario, const ForceSpec& spec) {
  NeqBreakdown b;
  b.equilibrium_part = equilibrium_force(scenario, spec);
  b.r_part = nonequilibrium_correction(scenario, spec);
  b.total = make_force_value(scenario, b.equilibrium_part.newtons + b.r_part.newtons,
                             b.equilibrium_part.error_estimate + b.r_part.error_estimate);
  return b;
}

}  // namespace cpneq
