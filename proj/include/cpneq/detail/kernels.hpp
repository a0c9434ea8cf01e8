#pragma once

// Pointwise u-kernels of the polarization integrals. Each kernel is called
// as k(u, offset) where offset(s) returns u - s for the special points s of
// that kernel; the quadrature wrapper supplies exact offsets near panel ends.
// at(u) uses plain subtraction and exists for tests.

#include <algorithm>
#include <cmath>
#include <complex>

namespace cpneq::detail {

using cplx = std::complex<double>;

struct KernelPair {
  cplx k00;
  cplx kpi;

  KernelPair& operator+=(const KernelPair& o) {
    k00 += o.k00;
    kpi += o.kpi;
    return *this;
  }
  friend KernelPair operator+(KernelPair a, const KernelPair& b) { return a += b; }
  friend KernelPair operator-(const KernelPair& a, const KernelPair& b) {
    return {a.k00 - b.k00, a.kpi - b.kpi};
  }
  friend KernelPair operator*(const KernelPair& a, double s) {
    return {a.k00 * s, a.kpi * s};
  }
  friend KernelPair operator*(double s, const KernelPair& a) { return a * s; }
  friend double abs(const KernelPair& a) {
    return std::max(std::abs(a.k00), std::abs(a.kpi));
  }
};

// Imaginary axis. kpi carries the sign of the integral term in pi, so that
// pi = first + pref * int w kpi as in every other region.
//
// With Z = gamma + i u, rho^2 = 1 - gamma^2 and S^2 = Z^2 + rho^2 (1 + D^2):
//   k00 = rho^2 [1/(1 + gamma) - (1 + D^2) Re 1/(S + Z) + D^2 Re 1/S]
//   kpi = q^2 rho^2 [-gamma/(1 + gamma) - (1 + D^2) Re 1/(S + Z) + Re 1/S]
// Both are O(rho^2) term by term, so xi >> v_F k loses no digits.
struct MatsubaraKernel {
  double xi, qt, g, d, rho2, uc;

  MatsubaraKernel(double xi_, double k, double delta, double r)
      : xi(xi_), qt(std::hypot(r * k, xi_)) {
    g = xi / qt;
    d = delta / qt;
    const double rho = r * k / qt;
    rho2 = rho * rho;
    uc = std::sqrt(1.0 + d * d * rho2);
  }

  template <class Offset>
  KernelPair operator()(double u, const Offset& offset) const {
    const double re = -offset(uc) * (u + uc);  // uc^2 - u^2
    const cplx s = std::sqrt(cplx(re, 2.0 * g * u));
    const cplx z(g, u);
    const double a = (1.0 + d * d) * (1.0 / (s + z)).real();
    const double b = (1.0 / s).real();
    const double k00 = rho2 * (1.0 / (1.0 + g) - a + d * d * b);
    const double kpi = qt * qt * rho2 * (-g / (1.0 + g) - a + b);
    return {k00, -kpi};
  }
  KernelPair at(double u) const {
    return (*this)(u, [u](double s) { return u - s; });
  }
};

// Region v_F k > omega. Half sum over the conjugate pair lambda = +-1; a
// negative radicand takes the root lambda * i * sqrt(|R|). The lambda = -1
// root is real on [d, s - g], an interval of width (d/2)(g - 1/d)^2 that
// closes at g d = 1; past that point the continuation arrives on the
// negative sheet.
//
// The integration variable is x = u - s, so the branch points sit at exactly
// x = +-g even when g << s.
struct LargeKKernel {
  double w, qt, g, d, e2, s, w2, qw;
  double xstar[2];  // lambda = +1, -1, as u* - s
  double xlow;      // d - s
  double sgn[2];

  LargeKKernel(double w_, double qt_, double g_, double delta)
      : w(w_), qt(qt_), g(g_) {
    d = delta / qt;
    e2 = d * d * (1.0 + g * g);
    s = std::sqrt((1.0 + g * g) * (1.0 + d * d));
    xstar[0] = g;
    xstar[1] = -g;
    // s - d = (1 + g^2 + g^2 d^2) / (s + d)
    xlow = -(1.0 + g * g * (1.0 + d * d)) / (s + d);
    w2 = w * w;
    qw = (qt * qt + w2) * d * d;
    sgn[0] = 1.0;
    sgn[1] = g * d > 1.0 ? -1.0 : 1.0;
  }

  // a+/sqrt(r+) - a-/sqrt(r-) for r+-, given the exact a+^2 r- - a-^2 r+
  static double root_diff(double ap, double am, double rp, double rm,
                          double cross) {
    const double sp = std::sqrt(rp), sm = std::sqrt(rm);
    if (ap * am <= 0.0) return ap / sp - am / sm;
    return cross / (sp * sm * (ap * sm + am * sp));
  }

  // offset(xs) returns x - xs
  template <class Offset>
  KernelPair operator()(double x, const Offset& offset) const {
    const double u = s + x;
    double rad[2];
    for (int i = 0; i < 2; ++i) {
      const double lam = i == 0 ? 1.0 : -1.0;
      // R = (u* - u)(u - u'), u' = lam g - s
      rad[i] = -offset(xstar[i]) * (2.0 * s + x - lam * g);
    }
    const bool real_pair = rad[0] >= 0.0 && rad[1] >= 0.0 && sgn[1] < 0.0;
    const bool imag_pair = rad[0] < 0.0 && rad[1] < 0.0;
    if (real_pair || imag_pair) {
      // the two lambda terms nearly cancel when g d >> 1; difference them
      // analytically. A = R - e2 = m +- q, B = x^2 - qw.
      const double m = (1.0 - u) * (1.0 + u), q = 2.0 * u * g;
      const double ap = m + q, am = m - q;
      const double xp = w - u * qt, xm = w + u * qt;
      const double bp = xp * xp - qw, bm = xm * xm - qw;
      const double c00 = 2.0 * q * (m * (m + 2.0 * e2) - q * q);
      const double opg = 1.0 + g * g;
      const double cpi =
          -2.0 * q * qt * qt * qt * qt * (opg * opg - rad[0] * rad[1]);
      if (real_pair) {
        return {1.0 - 0.5 * root_diff(ap, am, rad[0], rad[1], c00),
                w2 - 0.5 * root_diff(bp, bm, rad[0], rad[1], cpi)};
      }
      // S = +-i sqrt|R|: the sum is -i times the difference over |R|
      return {cplx(1.0, 0.5 * root_diff(ap, am, -rad[0], -rad[1], -c00)),
              cplx(w2, 0.5 * root_diff(bp, bm, -rad[0], -rad[1], -cpi))};
    }
    KernelPair kp{1.0, w2};
    for (int i = 0; i < 2; ++i) {
      const double lam = i == 0 ? 1.0 : -1.0;
      const cplx sq = rad[i] >= 0.0 ? cplx(sgn[i] * std::sqrt(rad[i]), 0.0)
                                    : cplx(0.0, lam * std::sqrt(-rad[i]));
      const double x = w - lam * u * qt;
      kp.k00 -= 0.5 * (rad[i] - e2) / sq;
      kp.kpi -= 0.5 * (x * x - qw) / sq;
    }
    return kp;
  }
  KernelPair at(double u) const {
    const double x = u - s;
    return (*this)(x, [x](double xs) { return x - xs; });
  }
};

// Plasmonic region omega > v_F k. In the supragap case the lambda = -1 root
// vanishes at u1 and u2; below u1 the two B terms are added, above they are
// subtracted, and on (u1, u2) the root is -i sqrt(|x|).
struct PlasmonicKernel {
  double w, p, rk2, c2, dt2, u1, u2;
  bool supra;

  PlasmonicKernel(double w_, double p_, double rk, double a, double dt,
                  double u1_, double u2_, bool supra_)
      : w(w_), p(p_), rk2(rk * rk), c2(rk * rk * a), dt2(dt * dt), u1(u1_),
        u2(u2_), supra(supra_) {}

  template <class Offset>
  KernelPair operator()(double u, const Offset& offset) const {
    const double xp = p * u + w;
    // in the subgap case u = w / p is a split point, so xm comes from the
    // exact offset; near the gap edge the kernel peaks sharply there
    const double xm = supra ? p * u - w : p * offset(w / p);
    const double sqp = std::sqrt(xp * xp - c2);
    cplx sqm;
    double sg = -1.0;
    if (supra) {
      const double d1 = offset(u1);
      const double d2 = offset(u2);
      const double rad = p * p * d1 * d2;
      sqm = rad >= 0.0 ? cplx(std::sqrt(rad), 0.0) : cplx(0.0, -std::sqrt(-rad));
      if (d1 < 0.0) sg = 1.0;
    } else {
      sqm = std::sqrt(xm * xm - c2);
    }
    if (sg < 0.0 && xm > 0.0 && sqm.imag() == 0.0) {
      // signed branch with both roots real: rewritten without the
      // difference of two nearly equal square roots
      const double sm = sqm.real();
      const double pu = p * u;
      const double dl = -c2 * (1.0 / (sqp + xp) + 1.0 / (sm + xm)) / (2.0 * pu);
      const double e = rk2 * dt2;  // rk^2 (1 - a)
      const double prod = sqp * sm;
      const double wmp = rk2 / (w + p);  // w - p
      const double k00 = (-wmp / p + dl - (w / p) * e / prod) / (1.0 + dl);
      const double kpi = w * (wmp + w * dl + p * rk2 / prod) / (1.0 + dl);
      return {cplx(k00, 0.0), cplx(kpi, 0.0)};
    }
    const cplx b1 = (xp * xp - rk2) / sqp + sg * (xm * xm - rk2) / sqm;
    const cplx b2 = (xp * xp + rk2 * dt2) / sqp + sg * (xm * xm + rk2 * dt2) / sqm;
    return {1.0 - b1 / (2.0 * p), w * w - 0.5 * p * b2};
  }
  KernelPair at(double u) const {
    return (*this)(u, [u](double s) { return u - s; });
  }
};

}  // namespace cpneq::detail
