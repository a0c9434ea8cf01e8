#include "cpneq/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cpneq/errors.hpp"
#include "cpneq/quantities.hpp"

namespace cpneq {

namespace {

constexpr double two_over_pi = 2.0 / constants::pi;

// z - atan(z) without cancellation for small z.
double z_minus_atan(double z) {
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    return z * z2 * (1.0 / 3.0 - z2 * (1.0 / 5.0 - z2 / 7.0));
  }
  return z - std::atan(z);
}

}  // namespace

void OpticalTable::validate() const {
  require(!energy.empty(), ErrorKind::InvalidMaterial, "optical table is empty");
  require(energy.size() == im_epsilon.size(), ErrorKind::InvalidMaterial,
          "optical table columns differ in length");
  for (std::size_t i = 0; i < energy.size(); ++i) {
    require(std::isfinite(energy[i]) && energy[i] > 0.0,
            ErrorKind::InvalidMaterial, "photon energies must be positive");
    require(std::isfinite(im_epsilon[i]) && im_epsilon[i] >= 0.0,
            ErrorKind::InvalidMaterial, "Im eps must be non-negative");
    if (i > 0)
      require(energy[i] > energy[i - 1], ErrorKind::InvalidMaterial,
              "photon energies must increase strictly");
  }
}

void OscillatorModel::validate() const {
  require(std::isfinite(eps_inf) && eps_inf >= 1.0, ErrorKind::InvalidMaterial,
          "eps_inf must be >= 1");
  for (const auto& o : oscillators) {
    require(std::isfinite(o.strength) && o.strength >= 0.0,
            ErrorKind::InvalidMaterial, "oscillator strength must be >= 0");
    require(std::isfinite(o.resonance) && o.resonance > 0.0,
            ErrorKind::InvalidMaterial, "oscillator resonance must be > 0");
    require(std::isfinite(o.damping) && o.damping >= 0.0,
            ErrorKind::InvalidMaterial, "oscillator damping must be >= 0");
  }
}

OpticalTable load_optical_table(std::istream& in) {
  OpticalTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double e = 0.0, im = 0.0;
    std::string extra;
    if (!(fields >> e >> im)) throw ParseError("expected two numbers", lineno);
    if (fields >> extra) throw ParseError("unexpected extra column", lineno);
    if (!std::isfinite(e) || e <= 0.0)
      throw ParseError("photon energy must be positive", lineno);
    if (!std::isfinite(im) || im < 0.0)
      throw ParseError("negative Im eps violates passivity", lineno);
    if (!t.energy.empty() && e <= t.energy.back())
      throw ParseError("photon energies are not strictly increasing", lineno);
    t.energy.push_back(e);
    t.im_epsilon.push_back(im);
  }
  return t;
}

OpticalTable load_optical_table_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::InvalidMaterial,
          "cannot open optical table '" + path + "'");
  return load_optical_table(in);
}

Substrate::Substrate() : response_(Vacuum{}) {}

Substrate Substrate::vacuum() { return Substrate(); }

Substrate Substrate::oscillators(OscillatorModel model) {
  model.validate();
  Substrate s;
  s.response_ = std::move(model);
  s.static_epsilon_ = s.permittivity_imaginary_axis(0.0);
  return s;
}

Substrate Substrate::table(OpticalTable table) {
  table.validate();
  Substrate s;
  TableData data;
  const auto& e = table.energy;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0) data.grid.push_back(0.5 * (e[i - 1] + e[i]));
    data.grid.push_back(e[i]);
  }
  data.grid_re.reserve(data.grid.size());
  for (double w : data.grid) data.grid_re.push_back(table_real_part(table, w));
  if (e.front() > 1e-3 || e.back() < 1e2) {
    std::ostringstream msg;
    msg << "optical table covers [" << e.front() << ", " << e.back()
        << "] eV, narrower than [1e-3, 1e2] eV; Im eps is zero outside";
    s.warning_ = msg.str();
  }
  data.table = std::move(table);
  s.response_ = std::move(data);
  s.static_epsilon_ = s.permittivity_imaginary_axis(1e-6);
  return s;
}

Substrate Substrate::default_sio2() {
  OscillatorModel m;
  m.eps_inf = 1.0;
  const auto osc = [](double c, double w, double g) {
    return Oscillator{c * w * w, w, g};
  };
  m.oscillators = {osc(0.829, 0.0573, 0.0045), osc(0.873, 0.1335, 0.007),
                   osc(1.098, 13.38, 0.5)};
  return oscillators(std::move(m));
}

bool Substrate::is_vacuum() const {
  return std::holds_alternative<Vacuum>(response_);
}

bool Substrate::lossless() const {
  if (is_vacuum()) return true;
  if (const auto* m = std::get_if<OscillatorModel>(&response_))
    return std::all_of(m->oscillators.begin(), m->oscillators.end(),
                       [](const Oscillator& o) {
                         return o.damping == 0.0 || o.strength == 0.0;
                       });
  return false;
}

double Substrate::permittivity_imaginary_axis(double xi) const {
  require(xi >= 0.0, ErrorKind::InvalidParameter, "xi must be >= 0");
  if (const auto* m = std::get_if<OscillatorModel>(&response_)) {
    double eps = m->eps_inf;
    for (const auto& o : m->oscillators)
      eps += o.strength /
             (o.resonance * o.resonance + xi * xi + o.damping * xi);
    return eps;
  }
  if (const auto* d = std::get_if<TableData>(&response_))
    return table_imaginary_axis(d->table, xi);
  return 1.0;
}

std::complex<double> Substrate::permittivity_real_axis(double omega) const {
  require(omega >= 0.0, ErrorKind::InvalidParameter, "omega must be >= 0");
  if (const auto* m = std::get_if<OscillatorModel>(&response_)) {
    std::complex<double> eps = m->eps_inf;
    for (const auto& o : m->oscillators)
      eps += o.strength / std::complex<double>(
                              o.resonance * o.resonance - omega * omega,
                              -o.damping * omega);
    return eps;
  }
  if (const auto* d = std::get_if<TableData>(&response_)) {
    if (omega == 0.0) return static_epsilon_;
    const auto& g = d->grid;
    double re;
    if (omega <= g.front() || omega >= g.back()) {
      re = table_real_part(d->table, omega);
    } else {
      const auto it = std::upper_bound(g.begin(), g.end(), omega);
      const std::size_t j = static_cast<std::size_t>(it - g.begin());
      const double s = (omega - g[j - 1]) / (g[j] - g[j - 1]);
      re = d->grid_re[j - 1] + s * (d->grid_re[j] - d->grid_re[j - 1]);
    }
    return {re, table_im(d->table, omega)};
  }
  return 1.0;
}

double Substrate::table_im(const OpticalTable& t, double omega) {
  const auto& e = t.energy;
  if (omega < e.front() || omega > e.back()) return 0.0;
  if (e.size() == 1) return t.im_epsilon.front();
  auto it = std::upper_bound(e.begin(), e.end(), omega);
  if (it == e.end()) return t.im_epsilon.back();
  const std::size_t j = static_cast<std::size_t>(it - e.begin());
  const double s = (omega - e[j - 1]) / (e[j] - e[j - 1]);
  return t.im_epsilon[j - 1] + s * (t.im_epsilon[j] - t.im_epsilon[j - 1]);
}

// 1 + (2/pi) int x Im eps(x) / (x^2 + xi^2) dx with Im eps piecewise linear,
// integrated exactly segment by segment.
double Substrate::table_imaginary_axis(const OpticalTable& t, double xi) {
  const auto& e = t.energy;
  const auto& f = t.im_epsilon;
  double sum = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double x0 = e[i - 1], x1 = e[i], d = x1 - x0;
    const double b = (f[i] - f[i - 1]) / d;
    const double a = f[i - 1] - b * x0;
    const double den = x0 * x0 + xi * xi;
    const double log_part = 0.5 * std::log1p((x1 - x0) * (x1 + x0) / den);
    // (x1 - x0) - xi [atan(x1/xi) - atan(x0/xi)]
    double lin_part;
    if (xi == 0.0) {
      lin_part = d;
    } else {
      const double q = xi * xi + x0 * x1;
      const double z = xi * d / q;
      lin_part = d * x0 * x1 / q + xi * z_minus_atan(z);
    }
    sum += a * log_part + b * lin_part;
  }
  return 1.0 + two_over_pi * sum;
}

// Principal-value dispersion integral for Re eps at real omega, exact for
// the piecewise-linear Im eps.
double Substrate::table_real_part(const OpticalTable& t, double omega) {
  const auto& e = t.energy;
  const auto& f = t.im_epsilon;
  double sum = 0.0;
  for (std::size_t i = 1; i < e.size(); ++i) {
    const double x0 = e[i - 1], x1 = e[i];
    const double b = (f[i] - f[i - 1]) / (x1 - x0);
    const double a = f[i - 1] - b * x0;
    const double c_minus = 0.5 * (a + b * omega);
    const double c_plus = 0.5 * (a - b * omega);
    const auto antideriv = [&](double x) {
      double g = b * x + c_plus * std::log(x + omega);
      if (x != omega) g += c_minus * std::log(std::abs(x - omega));
      return g;
    };
    sum += antideriv(x1) - antideriv(x0);
  }
  return 1.0 + two_over_pi * sum;
}

void Nanoparticle::validate() const {
  require(std::isfinite(radius) && radius > 0.0, ErrorKind::InvalidParameter,
          "nanoparticle radius must be positive");
  if (kind == Kind::Dielectric)
    require(std::isfinite(eps0) && eps0 >= 1.0, ErrorKind::InvalidParameter,
            "nanoparticle eps0 must be >= 1");
}

double static_polarizability(const Nanoparticle& particle) {
  particle.validate();
  const double r3 = particle.radius * particle.radius * particle.radius;
  if (particle.kind == Nanoparticle::Kind::Metallic) return r3;
  return r3 * (particle.eps0 - 1.0) / (particle.eps0 + 2.0);
}

}  // namespace cpneq
