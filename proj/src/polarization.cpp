#include "cpneq/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cpneq/detail/kernels.hpp"
#include "cpneq/errors.hpp"

namespace cpneq {

namespace {

using cplx = std::complex<double>;
using detail::KernelPair;
constexpr double kInf = std::numeric_limits<double>::infinity();

double fermi(double x) {
  if (x > 0.0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (std::exp(x) + 1.0);
}

// Occupation factor along u. At zero temperature it is the step 1 on
// [lower, u0) and 0 beyond.
struct Weight {
  bool zero_t = false;
  double b = 0.0;     // scale / (2 kT)
  double m = 0.0;     // mu / kT
  double u0 = 0.0;    // 2|mu| / scale
  double operator()(double u) const {
    if (zero_t) return u < u0 ? 1.0 : 0.0;
    return fermi_weight(u, b, m);
  }
  // Beyond this point the weight is below the double range.
  double cutoff() const {
    if (zero_t) return u0;
    return (std::abs(m) + 746.0) / b;
  }
};

struct Special {
  double u;
  bool singular;
};

struct UResult {
  KernelPair value;
  double error = 0.0;
  long evaluations = 0;
};

// Integrates weight(u) * kernel(x, offset) over x = u - shift, from lower to
// the weight cutoff, split at every special point. Limits and special points
// are given in x. offset(s) returns x - s exactly when s is an end of the
// current piece.
template <class Kernel>
UResult integrate_u(const Kernel& kernel, double lower,
                    std::vector<Special> specials, const Weight& weight,
                    const PolarizationOptions& opt, double shift = 0.0) {
  UResult out;
  const double cut = weight.cutoff() - shift;
  if (!(cut > lower)) return out;
  const double x0 = weight.u0 - shift;
  if (!weight.zero_t && x0 > lower && x0 < cut) specials.push_back({x0, false});
  std::sort(specials.begin(), specials.end(),
            [](const Special& x, const Special& y) { return x.u < y.u; });

  // Points at or just below the previous cut, within rounding, are merged
  // into it. A branch point can coincide with the lower limit analytically
  // yet land just below it.
  const auto close = [](double x, double y) {
    return std::abs(x - y) <= 1e-13 * std::max(1.0, std::abs(y));
  };
  std::vector<Special> pts{{lower, false}};
  for (const auto& s : specials) {
    if (!(s.u < cut)) continue;
    if (s.u <= pts.back().u && close(s.u, pts.back().u)) {
      pts.back().singular = pts.back().singular || s.singular;
      continue;
    }
    if (!(s.u > lower)) continue;
    pts.push_back(s);
  }
  const bool finite_upper = weight.zero_t;
  if (finite_upper) pts.push_back({cut, false});
  const std::size_t pieces = finite_upper ? pts.size() - 1 : pts.size();

  quad::QuadratureSpec spec;
  spec.rel_tol = opt.rel_tol;
  spec.abs_tol = 0.1 * opt.rel_tol / static_cast<double>(pieces);
  spec.max_evaluations = opt.max_evaluations;
  spec.family = opt.family;
  spec.parallel = opt.parallel;

  for (std::size_t i = 0; i < pieces; ++i) {
    const double sa = pts[i].u;
    spec.left_singular = pts[i].singular;
    if (i + 1 < pts.size()) {
      const double sb = pts[i + 1].u;
      spec.right_singular = pts[i + 1].singular;
      // Offsets go through the nearer end. Near a large u the node itself is
      // rounded, and u - s would disagree with the exact end distance.
      auto f = [&](double u, double dl, double dr) {
        const auto offset = [&](double s) {
          if (s == sa) return dl;
          if (s == sb) return -dr;
          return dl <= dr ? dl + (sa - s) : (sb - s) - dr;
        };
        // every zero-temperature piece lies below the step
        return kernel(u, offset) * (weight.zero_t ? 1.0 : weight(shift + u));
      };
      const auto r = quad::integrate_finite(f, sa, sb, spec);
      out.value += r.value;
      out.error += r.error_estimate;
      out.evaluations += r.evaluations;
    } else {
      spec.right_singular = false;
      auto f = [&](double u, double dl, double) {
        const auto offset = [&](double s) { return dl + (sa - s); };
        return kernel(u, offset) * weight(shift + u);
      };
      const auto r = quad::integrate_semiinfinite(f, sa, 1.0 / weight.b, spec);
      out.value += r.value;
      out.error += r.error_estimate;
      out.evaluations += r.evaluations;
    }
  }
  return out;
}

Weight make_weight(double scale, double temperature, double mu,
                   const PolarizationOptions& opt) {
  Weight w;
  w.u0 = 2.0 * std::abs(mu) / scale;
  if (temperature < opt.zero_temperature_threshold) {
    w.zero_t = true;
  } else {
    const double kt = opt.boltzmann * temperature;
    w.b = scale / (2.0 * kt);
    w.m = mu / kt;
  }
  return w;
}

// first + pref * integral, with the kernels normalised so that the
// quadrature tolerance is relative to the first terms.
template <class Kernel>
PolarizationPair assemble(const Kernel& kernel, double lower,
                          std::vector<Special> specials, const Weight& weight,
                          cplx first00, cplx first_pi, double pref,
                          const PolarizationOptions& opt, double shift = 0.0) {
  const double s00 = std::abs(first00) > 0.0 ? std::abs(first00) : 1.0;
  const double spi = std::abs(first_pi) > 0.0 ? std::abs(first_pi) : 1.0;
  const double n00 = pref / s00;
  const double npi = pref / spi;
  auto scaled = [&](double u, const auto& offset) {
    KernelPair k = kernel(u, offset);
    return KernelPair{k.k00 * n00, k.kpi * npi};
  };
  const UResult r =
      integrate_u(scaled, lower, std::move(specials), weight, opt, shift);
  PolarizationPair p;
  p.pi00 = first00 + r.value.k00 * s00;
  p.pi = first_pi + r.value.kpi * spi;
  p.error_pi00 = r.error * s00;
  p.error_pi = r.error * spi;
  p.evaluations = r.evaluations;
  p.temperature_path =
      weight.zero_t ? TemperaturePath::ZeroT : TemperaturePath::FiniteT;
  return p;
}

// sum_{n>=1} z^{2n} [1/(2n-1) + 1/(2n+1)]
double phi_series(double z) {
  const double z2 = z * z;
  double term = z2, sum = 0.0;
  for (int n = 1; n < 200; ++n) {
    const double t = term * (1.0 / (2 * n - 1) + 1.0 / (2 * n + 1));
    sum += t;
    if (t < 1e-18 * sum) break;
    term *= z2;
  }
  return sum;
}

void check_point(double omega, double k) {
  require(std::isfinite(omega) && std::isfinite(k) && omega >= 0.0 && k > 0.0,
          ErrorKind::InvalidParameter, "need omega >= 0 and k > 0");
  require(k >= omega, ErrorKind::DomainError,
          "k < omega lies in the propagating sector");
}

void check_temperature(double temperature) {
  require(std::isfinite(temperature) && temperature >= 0.0,
          ErrorKind::InvalidParameter, "temperature must be >= 0");
}

PolarizationPair largek_impl(const GrapheneSheet& sheet, double w, double k,
                             const Weight& weight,
                             const PolarizationOptions& opt) {
  const double r = sheet.fermi_velocity_ratio;
  const auto [qt, g] = largek_qtilde_gamma(w, k, r);
  const double alpha = opt.fine_structure;
  const detail::LargeKKernel kernel(w, qt, g, sheet.delta);
  const double d = kernel.d;
  const double ps = psi(d);
  PolarizationPair p = assemble(
      kernel, kernel.xlow, {{kernel.xstar[1], true}, {kernel.xstar[0], true}},
      weight, alpha * k * k * ps / qt, alpha * k * k * qt * ps,
      4.0 * alpha * qt / (r * r), opt, kernel.s);
  p.region = Region::LargeK;
  return p;
}

PolarizationPair plasmonic_impl(const GrapheneSheet& sheet, double w, double k,
                                const RegionClassification& c,
                                const Weight& weight,
                                const PolarizationOptions& opt) {
  const double r = sheet.fermi_velocity_ratio;
  const double alpha = opt.fine_structure;
  const double p = c.scale;
  const bool supra = c.region == Region::PlasmonicSupragap;
  const detail::PlasmonicKernel kernel(w, p, r * k, c.a, c.lower, c.u1, c.u2,
                                       supra);
  const double u1 = c.u1, u2 = c.u2;

  std::vector<Special> specials;
  cplx phi;
  if (supra) {
    specials = {{u1, true}, {u2, true}};
    phi = phi2(p, sheet.delta);
  } else {
    specials = {{w / p, true}};
    phi = phi1(p, sheet.delta);
  }
  PolarizationPair out =
      assemble(kernel, c.lower, std::move(specials), weight,
               -2.0 * alpha * k * k * phi / (p * p), 2.0 * alpha * k * k * phi,
               4.0 * alpha * p / (r * r), opt);
  out.region = c.region;
  if (!supra) {
    out.pi00.imag(0.0);
    out.pi.imag(0.0);
  }
  return out;
}

PolarizationPair dispatch(const GrapheneSheet& sheet, double omega, double k,
                          double temperature, const PolarizationOptions& opt,
                          Region expected, bool check_region) {
  const RegionClassification c = classify_region(sheet, omega, k);
  if (check_region)
    require(c.region == expected, ErrorKind::DomainError,
            std::string("point lies in region ") + to_string(c.region) +
                ", not " + to_string(expected));
  require(c.scale > 0.0, ErrorKind::DomainError,
          "omega = v_F k is a singular point of the polarization");
  require(!(c.region == Region::PlasmonicSupragap && c.a == 0.0),
          ErrorKind::DomainError,
          "the gap edge p = delta is a logarithmic singularity");
  const Weight weight = make_weight(c.scale, temperature, sheet.mu, opt);
  if (c.region == Region::LargeK)
    return largek_impl(sheet, omega, k, weight, opt);
  return plasmonic_impl(sheet, omega, k, c, weight, opt);
}

}  // namespace

void GrapheneSheet::validate() const {
  require(std::isfinite(delta) && delta >= 0.0, ErrorKind::InvalidParameter,
          "delta must be finite and >= 0");
  require(std::isfinite(mu), ErrorKind::InvalidParameter, "mu must be finite");
  require(fermi_velocity_ratio > 0.0 && fermi_velocity_ratio < 1.0,
          ErrorKind::InvalidParameter, "fermi_velocity_ratio must lie in (0, 1)");
}

const char* to_string(Region region) {
  switch (region) {
    case Region::ImaginaryAxis: return "imaginary-axis";
    case Region::PlasmonicSubgap: return "plasmonic-subgap";
    case Region::PlasmonicSupragap: return "plasmonic-supragap";
    case Region::LargeK: return "large-k";
  }
  return "unknown";
}

const char* to_string(TemperaturePath path) {
  return path == TemperaturePath::ZeroT ? "zero-t" : "finite-t";
}

double psi(double x) {
  require(x >= 0.0, ErrorKind::DomainError, "psi needs x >= 0");
  if (x == kInf) return 0.0;
  if (x < 2.0) return 2.0 * (x + (1.0 - x * x) * std::atan(1.0 / x));
  const double y = 1.0 / x, y2 = y * y;
  double pw = y, sum = 0.0, sign = 1.0;
  for (int n = 0; n < 60; ++n) {
    const double t = pw * (1.0 / (2 * n + 1) + 1.0 / (2 * n + 3));
    sum += sign * t;
    if (t < 1e-18 * sum) break;
    pw *= y2;
    sign = -sign;
  }
  return 2.0 * sum;
}

double fermi_weight(double u, double b, double mu_over_kt) {
  return fermi(b * u + mu_over_kt) + fermi(b * u - mu_over_kt);
}

double phi1(double p, double delta) {
  require(p >= 0.0 && p < delta, ErrorKind::DomainError, "phi1 needs 0 <= p < delta");
  const double z = p / delta;
  if (z < 0.3) return -delta * phi_series(z);
  return delta * (1.0 - (z + 1.0 / z) * std::atanh(z));
}

std::complex<double> phi2(double p, double delta) {
  require(p > 0.0 && p >= delta, ErrorKind::DomainError, "phi2 needs p >= delta");
  const double y = delta / p;
  const double im = -0.5 * constants::pi * p * (1.0 + y * y);
  double re;
  if (y < 0.3) re = -delta * phi_series(y);
  else if (y == 1.0) re = -kInf;
  else re = p * (y - (1.0 + y * y) * std::atanh(y));
  return {re, im};
}

RegionClassification classify_region(const GrapheneSheet& sheet, double omega,
                                     double k) {
  sheet.validate();
  check_point(omega, k);
  const double r = sheet.fermi_velocity_ratio;
  const double vk = r * k;
  RegionClassification c;
  if (vk >= omega) {
    c.region = Region::LargeK;
    c.scale = std::sqrt((vk - omega) * (vk + omega));
  } else {
    c.scale = std::sqrt((omega - vk) * (omega + vk));
    const double p = c.scale;
    if (p < sheet.delta) {
      c.region = Region::PlasmonicSubgap;
      c.a = 1.0 - (sheet.delta / p) * (sheet.delta / p);
    } else {
      c.region = Region::PlasmonicSupragap;
      c.a = (p - sheet.delta) * (p + sheet.delta) / (p * p);
      const double root = vk * std::sqrt(c.a);
      c.u1 = (omega - root) / p;
      c.u2 = (omega + root) / p;
    }
  }
  c.lower = c.scale > 0.0 ? sheet.delta / c.scale : kInf;
  c.u0 = c.scale > 0.0 ? 2.0 * std::abs(sheet.mu) / c.scale : kInf;
  c.has_fermi_threshold = 2.0 * std::abs(sheet.mu) > sheet.delta;
  return c;
}

PolarizationPair pi_matsubara(const GrapheneSheet& sheet, double xi, double k,
                              double temperature,
                              const PolarizationOptions& opt) {
  sheet.validate();
  require(std::isfinite(xi) && xi >= 0.0, ErrorKind::InvalidParameter,
          "xi must be >= 0");
  require(std::isfinite(k) && k > 0.0, ErrorKind::InvalidParameter, "k must be > 0");
  require(std::isfinite(temperature) && temperature > 0.0,
          ErrorKind::InvalidParameter, "temperature must be > 0");
  const double r = sheet.fermi_velocity_ratio;
  const double alpha = opt.fine_structure;
  const detail::MatsubaraKernel kernel(xi, k, sheet.delta, r);
  const double qt = kernel.qt;
  const double d = kernel.d;
  const Weight weight = make_weight(qt, temperature, sheet.mu, opt);
  const double ps = psi(d);
  PolarizationPair p =
      assemble(kernel, d, {{kernel.uc, true}}, weight, alpha * k * k * ps / qt,
               alpha * k * k * qt * ps, 4.0 * alpha * qt / (r * r), opt);
  p.region = Region::ImaginaryAxis;
  p.pi00.imag(0.0);
  p.pi.imag(0.0);
  return p;
}

PolarizationPair pi_real_subgap(const GrapheneSheet& sheet, double omega,
                                double k, double temperature,
                                const PolarizationOptions& opt) {
  check_temperature(temperature);
  return dispatch(sheet, omega, k, temperature, opt, Region::PlasmonicSubgap, true);
}

PolarizationPair pi_real_supragap(const GrapheneSheet& sheet, double omega,
                                  double k, double temperature,
                                  const PolarizationOptions& opt) {
  check_temperature(temperature);
  return dispatch(sheet, omega, k, temperature, opt, Region::PlasmonicSupragap,
                  true);
}

PolarizationPair pi_real_largek(const GrapheneSheet& sheet, double omega,
                                double k, double temperature,
                                const PolarizationOptions& opt) {
  check_temperature(temperature);
  return dispatch(sheet, omega, k, temperature, opt, Region::LargeK, true);
}

PolarizationPair pi_zero_temperature(const GrapheneSheet& sheet, double omega,
                                     double k, const PolarizationOptions& opt) {
  return dispatch(sheet, omega, k, 0.0, opt, Region::LargeK, false);
}

PolarizationPair pi_real(const GrapheneSheet& sheet, double omega, double k,
                         double temperature, const PolarizationOptions& opt) {
  check_temperature(temperature);
  return dispatch(sheet, omega, k, temperature, opt, Region::LargeK, false);
}

}  // namespace cpneq
