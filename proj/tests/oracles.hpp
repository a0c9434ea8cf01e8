#pragma once

// Reference values computed straight from the textbook expressions, with
// long double arithmetic, Boost quadrature or a fixed Simpson grid. None of
// this goes through the library kernels.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

namespace oracle {

using ld = long double;
using cld = std::complex<long double>;

inline constexpr ld kAlpha = 7.2973525693e-3L;
inline constexpr ld kBoltzmann = 8.617333262e-5L;
inline constexpr ld kPi = 3.141592653589793238462643383279502884L;

struct Pair {
  std::complex<double> pi00;
  std::complex<double> pi;
};

inline ld psi(ld x) { return 2.0L * (x + (1.0L - x * x) * std::atan(1.0L / x)); }

// Delta - p (1 + Delta^2/p^2) artanh(p/Delta)
inline ld phi1(ld p, ld delta) {
  return delta - p * (1.0L + delta * delta / (p * p)) * std::atanh(p / delta);
}
inline std::complex<ld> phi2(ld p, ld delta) {
  const ld f = p * (1.0L + delta * delta / (p * p));
  return {delta - f * std::atanh(delta / p), -f * kPi / 2.0L};
}

inline ld fermi_weight(ld u, ld b, ld m) {
  ld s = 0.0L;
  for (ld kappa : {1.0L, -1.0L}) s += 1.0L / (std::exp(b * u + kappa * m) + 1.0L);
  return s;
}

struct Sheet {
  double delta;
  double mu;
  double r = 1.0 / 300.0;
};

// Upper u-limit where the Fermi weight drops below 1e-30 of its scale.
inline ld u_cut(ld b, ld m) { return (std::abs(m) + 80.0L) / b; }

template <class F>
ld gk(const F& f, ld a, ld b) {
  return boost::math::quadrature::gauss_kronrod<ld, 61>::integrate(f, a, b, 20, 1e-16L);
}

// Imaginary-axis tensor, printed real-part form with the principal root.
inline Pair matsubara(const Sheet& s, double xi, double k, double temperature) {
  const ld K = k, X = xi, r = s.r;
  const ld qt = std::sqrt(r * r * K * K + X * X);
  const ld g = X / qt, D = s.delta / qt;
  const ld kt = kBoltzmann * temperature;
  const ld b = qt / (2.0L * kt), m = s.mu / kt;
  auto i00 = [&](ld u) {
    const cld R(1.0L - u * u + D * D - g * g * D * D, 2.0L * g * u);
    const cld N(1.0L - u * u, 2.0L * g * u);
    return fermi_weight(u, b, m) * (1.0L - std::real(N / std::sqrt(R)));
  };
  auto ipi = [&](ld u) {
    const cld R(1.0L - u * u + D * D - g * g * D * D, 2.0L * g * u);
    // xi^2 [(1 + i u/g)^2 + (1/g^2 - 1) D^2]
    const cld N = cld(X, qt * u) * cld(X, qt * u) + (qt * qt - X * X) * D * D;
    return fermi_weight(u, b, m) * (X * X - std::real(N / std::sqrt(R)));
  };
  const ld hi = std::max(u_cut(b, m), D + 1.0L);
  const ld ps = psi(D);
  Pair p;
  p.pi00 = double(kAlpha * K * K * ps / qt + 4.0L * kAlpha * qt / (r * r) * gk(i00, D, hi));
  p.pi = double(kAlpha * K * K * qt * ps - 4.0L * kAlpha * qt / (r * r) * gk(ipi, D, hi));
  return p;
}

// Plasmonic sector with p < Delta: both integrands are real and smooth.
inline Pair subgap(const Sheet& s, double w, double k, double temperature) {
  const ld W = w, vk = s.r * k, r = s.r, K = k;
  const ld P = std::sqrt(W * W - vk * vk);
  const ld Dt = s.delta / P, A = 1.0L - Dt * Dt;
  const ld kt = kBoltzmann * temperature;
  const ld b = P / (2.0L * kt), m = s.mu / kt;
  auto B1 = [&](ld x) { return (x * x - vk * vk) / std::sqrt(x * x - vk * vk * A); };
  auto B2 = [&](ld x) { return (x * x + vk * vk * (1.0L - A)) / std::sqrt(x * x - vk * vk * A); };
  auto i00 = [&](ld u) {
    return fermi_weight(u, b, m) *
           (1.0L - (B1(P * u + W) - B1(P * u - W)) / (2.0L * P));
  };
  auto ipi = [&](ld u) {
    return fermi_weight(u, b, m) *
           (W * W - P / 2.0L * (B2(P * u + W) - B2(P * u - W)));
  };
  const ld hi = std::max(u_cut(b, m), Dt + 1.0L);
  const ld mid = W / P;
  auto both = [&](auto f) {
    return mid > Dt && mid < hi ? gk(f, Dt, mid) + gk(f, mid, hi) : gk(f, Dt, hi);
  };
  const ld ph = phi1(P, s.delta);
  Pair p;
  p.pi00 = double(-2.0L * kAlpha * K * K * ph / (P * P) + 4.0L * kAlpha * P / (r * r) * both(i00));
  p.pi = double(2.0L * kAlpha * K * K * ph + 4.0L * kAlpha * P / (r * r) * both(ipi));
  return p;
}

// Plasmonic sector with p >= Delta. Below u1 the two B terms add; above u1
// they subtract, and on (u1, u2) the lambda = -1 root is -i sqrt|x|.
inline Pair supragap(const Sheet& s, double w, double k, double temperature) {
  const double W = w, vk = s.r * k, r = s.r, K = k;
  const double P = std::sqrt((W - vk) * (W + vk));
  const double Dt = s.delta / P, A = 1.0 - Dt * Dt;
  const double u1 = (W - vk * std::sqrt(A)) / P, u2 = (W + vk * std::sqrt(A)) / P;
  const double kt = double(kBoltzmann) * temperature;
  const double b = P / (2.0 * kt), m = s.mu / kt;
  const double c2 = vk * vk * A;
  // Root of x^2 - c2 at x = P u - W written through the distance to u1 or u2.
  auto root_minus = [&](double u, double d1, double d2) {
    const double rad = P * P * d1 * d2;
    (void)u;
    return rad >= 0.0 ? std::complex<double>(std::sqrt(rad), 0.0)
                      : std::complex<double>(0.0, -std::sqrt(-rad));
  };
  auto terms = [&](double u, double d1, double d2, double sign) {
    const double xp = P * u + W, xm = P * u - W;
    const double sp = std::sqrt(xp * xp - c2);
    const auto sm = root_minus(u, d1, d2);
    const auto b1 = (xp * xp - vk * vk) / sp + sign * (xm * xm - vk * vk) / sm;
    const auto b2 = (xp * xp + vk * vk * (1.0 - A)) / sp +
                    sign * (xm * xm + vk * vk * (1.0 - A)) / sm;
    const double fw = double(fermi_weight(u, b, m));
    return std::make_pair(fw * (1.0 - b1 / (2.0 * P)), fw * (W * W - P / 2.0 * b2));
  };
  boost::math::quadrature::tanh_sinh<double> ts(15);
  std::complex<double> s00 = 0.0, spi = 0.0;
  auto piece = [&](double lo, double hi, double sign, int which_left) {
    // which_left: 0 plain, 1 left end is u1, 2 left end is u2, -1 right end is u1
    const double half = 0.5 * (hi - lo);
    for (int comp = 0; comp < 4; ++comp) {
      auto f = [&](double t, double tc) {
        // t in (-1, 1); tc is -1 - t on the left half and 1 - t on the right
        const bool left = tc < 0.0 || (tc == 0.0 && t < 0.0);
        const double from_lo = left ? -half * tc : half * (2.0 - tc);
        const double from_hi = left ? half * (2.0 + tc) : half * tc;
        const double u = left ? lo + from_lo : hi - from_hi;
        double d1 = u - u1, d2 = u - u2;
        if (which_left == 1) d1 = from_lo, d2 = -from_hi;
        if (which_left == 2) d2 = from_lo, d1 = (u2 - u1) + from_lo;
        if (which_left == -1) d1 = -from_hi;
        const auto [a, c] = terms(u, d1, d2, sign);
        const std::complex<double> v = comp < 2 ? a : c;
        return (comp % 2 == 0 ? v.real() : v.imag()) * half;
      };
      const double val = ts.integrate(f, -1.0, 1.0);
      const std::complex<double> add = comp % 2 == 0 ? std::complex<double>(val, 0.0)
                                                     : std::complex<double>(0.0, val);
      if (comp < 2) s00 += add; else spi += add;
    }
  };
  const double hi = std::max(double(u_cut(b, m)), u2 + 1.0);
  if (u1 > Dt) piece(Dt, u1, 1.0, -1);
  piece(u1, u2, -1.0, 1);
  piece(u2, hi, -1.0, 2);
  const auto ph = phi2(P, s.delta);
  const std::complex<double> phd(double(ph.real()), double(ph.imag()));
  Pair p;
  p.pi00 = -2.0 * double(kAlpha) * K * K * phd / (P * P) + 4.0 * double(kAlpha) * P / (r * r) * s00;
  p.pi = 2.0 * double(kAlpha) * K * K * phd + 4.0 * double(kAlpha) * P / (r * r) * spi;
  return p;
}

// Zero-temperature first terms for Delta > 2 mu.
inline Pair zero_t_gapped(const Sheet& s, double w, double k) {
  const ld W = w, K = k, vk = s.r * k;
  Pair p;
  if (W > vk) {
    const ld P = std::sqrt(W * W - vk * vk);
    if (P < s.delta) {
      const ld ph = phi1(P, s.delta);
      p.pi00 = double(-2.0L * kAlpha * K * K * ph / (P * P));
      p.pi = double(2.0L * kAlpha * K * K * ph);
    } else {
      const auto ph = phi2(P, s.delta);
      p.pi00 = std::complex<double>(-2.0L * kAlpha * K * K * ph / (P * P));
      p.pi = std::complex<double>(2.0L * kAlpha * K * K * ph);
    }
  } else {
    const ld qt = std::sqrt(vk * vk - W * W);
    const ld D = s.delta / qt;
    p.pi00 = double(kAlpha * K * K * psi(D) / qt);
    p.pi = double(kAlpha * K * K * qt * psi(D));
  }
  return p;
}

// Large-k sector for Delta < 2 mu at zero temperature: the lambda-weighted
// finite integral over [D, 2 mu / q~]. For R < 0 the root is i sqrt|R|; for
// R >= 0 it is lambda sqrt(R) while g D < 1 and sqrt(R) beyond. Pieces run
// between branch points with tanh-sinh in long double.
inline Pair zero_t_largek_doped(const Sheet& s, double w, double k) {
  const ld W = w, K = k, r = s.r, vk = r * k;
  const ld qt = std::sqrt(vk * vk - W * W);
  const ld g = W / qt, D = s.delta / qt, u0 = 2.0L * s.mu / qt;
  const ld sroot = std::sqrt((1.0L + g * g) * (1.0L + D * D));
  const ld star[2] = {g + sroot, -g + sroot};  // lambda = +1, -1
  // the lambda = -1 real root changes sheet once g D passes 1
  const ld real_sign[2] = {1.0L, g * D > 1.0L ? 1.0L : -1.0L};
  std::vector<ld> cuts = {D};
  for (ld x : star)
    if (x > D && x < u0) cuts.push_back(x);
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(u0);
  boost::math::quadrature::tanh_sinh<ld> ts(12);
  cld br00 = u0 - D, brpi = (u0 - D) * W * W;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const ld lo = cuts[j], hi = cuts[j + 1];
    auto piece = [&](int which, bool imag) {
      return ts.integrate(
          [&](ld u, ld xc) {
            cld a = 0.0L;
            for (int i = 0; i < 2; ++i) {
              const ld lam = i == 0 ? 1.0L : -1.0L;
              ld dist = star[i] - u;
              if (star[i] == lo && xc < 0) dist = xc;
              if (star[i] == hi && xc > 0) dist = xc;
              const ld R = dist * (u - lam * g + sroot);
              const cld root =
                  R >= 0.0L ? cld(real_sign[i] * std::sqrt(R), 0.0L) : cld(0.0L, std::sqrt(-R));
              ld num;
              if (which == 0) {
                num = R - D * D * (1.0L + g * g);
              } else {
                const ld xw = W - lam * u * qt;
                num = xw * xw - (qt * qt + W * W) * D * D;
              }
              a += lam * num / root;
            }
            return imag ? a.imag() : a.real();
          },
          lo, hi);
    };
    br00 -= 0.5L * cld(piece(0, false), piece(0, true));
    brpi -= 0.5L * cld(piece(1, false), piece(1, true));
  }
  const ld ps = psi(D);
  Pair p;
  p.pi00 = std::complex<double>(kAlpha * K * K * ps / qt + 4.0L * kAlpha * qt / (r * r) * br00);
  p.pi = std::complex<double>(kAlpha * K * K * qt * ps + 4.0L * kAlpha * qt / (r * r) * brpi);
  return p;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  return std::abs(a - b) / std::abs(b);
}

}  // namespace oracle
