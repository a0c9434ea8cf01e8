#include "cpneq/reflection.hpp"

#include <cmath>

#include "cpneq/errors.hpp"

namespace cpneq {

using cplx = std::complex<double>;

void CoatedPlate::validate() const {
  require(sheet.has_value() || !substrate.is_vacuum(),
          ErrorKind::InvalidParameter,
          "plate needs a graphene sheet or a non-vacuum substrate");
  if (sheet) sheet->validate();
  require(std::isfinite(temperature) && temperature >= 0.0,
          ErrorKind::InvalidParameter, "plate temperature must be >= 0");
}

cplx q_epsilon_real(cplx eps, double omega, double k) {
  const cplx rad = k * k - eps * (omega * omega);
  if (rad.imag() == 0.0 && rad.real() < 0.0)
    return {0.0, -std::sqrt(-rad.real())};
  return std::sqrt(rad);
}

Reflection<double> reflection_imaginary_from(double eps, double xi, double k,
                                             double pi00, double pi) {
  const double q = std::hypot(k, xi);
  const double qe = std::sqrt(k * k + eps * xi * xi);
  // q - qe and eps q - qe without cancellation
  const double dq = (1.0 - eps) * xi * xi / (q + qe);
  const double k2 = k * k;
  const double qq = q * qe * pi00;
  Reflection<double> r;
  r.tm = (k2 * ((eps - 1.0) * q + dq) + qq) / (k2 * (eps * q + qe) + qq);
  r.te = (k2 * dq - pi) / (k2 * (q + qe) + pi);
  return r;
}

Reflection<cplx> reflection_real_from(cplx eps, double omega, double k,
                                      double q, cplx pi00, cplx pi) {
  const cplx qe = q_epsilon_real(eps, omega, k);
  const cplx dq = (eps - 1.0) * (omega * omega) / (q + qe);
  const double k2 = k * k;
  const cplx qq = q * qe * pi00;
  Reflection<cplx> r;
  r.tm = (k2 * ((eps - 1.0) * q + dq) + qq) / (k2 * (eps * q + qe) + qq);
  r.te = (k2 * dq - pi) / (k2 * (q + qe) + pi);
  return r;
}

Reflection<double> reflection_imaginary(const CoatedPlate& plate, double xi,
                                        double k,
                                        const PolarizationOptions& options) {
  plate.validate();
  require(std::isfinite(xi) && xi >= 0.0, ErrorKind::InvalidParameter,
          "xi must be >= 0");
  require(std::isfinite(k) && k > 0.0, ErrorKind::InvalidParameter, "k must be > 0");
  const double eps = plate.substrate.permittivity_imaginary_axis(xi);
  double pi00 = 0.0, pi = 0.0;
  if (plate.sheet) {
    const auto p = pi_matsubara(*plate.sheet, xi, k, plate.temperature, options);
    pi00 = p.pi00.real();
    pi = p.pi.real();
  }
  return reflection_imaginary_from(eps, xi, k, pi00, pi);
}

Reflection<cplx> reflection_real(const CoatedPlate& plate, double omega,
                                 double k, const PolarizationOptions& options) {
  plate.validate();
  require(std::isfinite(omega) && std::isfinite(k) && omega >= 0.0 && k > 0.0,
          ErrorKind::InvalidParameter, "need omega >= 0 and k > 0");
  require(k >= omega, ErrorKind::DomainError,
          "k < omega lies in the propagating sector");
  const cplx eps = plate.substrate.permittivity_real_axis(omega);
  cplx pi00 = 0.0, pi = 0.0;
  if (plate.sheet) {
    const auto p = pi_real(*plate.sheet, omega, k, plate.temperature, options);
    pi00 = p.pi00;
    pi = p.pi;
  }
  return reflection_real_from(eps, omega, k, q_evanescent(omega, k), pi00, pi);
}

}  // namespace cpneq
