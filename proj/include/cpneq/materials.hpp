#pragma once

#include <complex>
#include <istream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cpneq {

// Tabulated imaginary part of the permittivity, photon energies in eV.
struct OpticalTable {
  std::vector<double> energy;
  std::vector<double> im_epsilon;

  std::size_t size() const { return energy.size(); }
  void validate() const;
};

// Lorentz oscillator: strength in eV^2, resonance and damping in eV.
struct Oscillator {
  double strength = 0.0;
  double resonance = 1.0;
  double damping = 0.0;
};

// eps(omega) = eps_inf + sum_j g_j / (w_j^2 - omega^2 - i gamma_j omega)
struct OscillatorModel {
  double eps_inf = 1.0;
  std::vector<Oscillator> oscillators;

  void validate() const;
};

struct Vacuum {};

// Reads two numeric columns (energy, Im eps), comma or whitespace separated,
// '#' comment lines allowed. Throws ParseError carrying the line number.
OpticalTable load_optical_table(std::istream& in);
OpticalTable load_optical_table_file(const std::string& path);

// Dielectric response of the plate on both frequency axes. Immutable after
// construction; the table route builds its real-axis cache eagerly.
class Substrate {
 public:
  Substrate();  // vacuum

  static Substrate vacuum();
  static Substrate oscillators(OscillatorModel model);
  static Substrate table(OpticalTable table);

  // Two infrared and one ultraviolet oscillator standing in for fused silica
  // optical data. Configuration data, not a measured dataset.
  static Substrate default_sio2();

  bool is_vacuum() const;
  bool lossless() const;
  double static_epsilon() const { return static_epsilon_; }
  // Set when a table does not cover [1e-3, 1e2] eV.
  const std::optional<std::string>& coverage_warning() const { return warning_; }

  double permittivity_imaginary_axis(double xi) const;
  std::complex<double> permittivity_real_axis(double omega) const;

 private:
  struct TableData {
    OpticalTable table;
    std::vector<double> grid;      // nodes and midpoints
    std::vector<double> grid_re;   // Re eps on the grid
  };

  std::variant<Vacuum, OscillatorModel, TableData> response_;
  double static_epsilon_ = 1.0;
  std::optional<std::string> warning_;

  static double table_imaginary_axis(const OpticalTable& t, double xi);
  static double table_real_part(const OpticalTable& t, double omega);
  static double table_im(const OpticalTable& t, double omega);
};

struct Nanoparticle {
  enum class Kind { Dielectric, Metallic };

  double radius = 1.0;  // nm
  Kind kind = Kind::Dielectric;
  double eps0 = 3.81;   // static permittivity, dielectric only

  void validate() const;
};

// alpha(0) = R^3 (eps0 - 1) / (eps0 + 2); R^3 for metals. In nm^3.
double static_polarizability(const Nanoparticle& particle);

}  // namespace cpneq
