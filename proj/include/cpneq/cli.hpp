#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpneq/force_neq.hpp"

namespace cpneq::cli {

enum class Spacing { Linear, Log };
enum class Normalization { F0, Fcl, Absolute, All };
enum class OutputFormat { Csv, Json };

struct SeparationGrid {
  double min = 200.0;  // nm
  double max = 2000.0;
  int count = 20;
  Spacing spacing = Spacing::Log;

  std::vector<double> values() const;
};

struct SweepConfig {
  Scenario base;  // separation, plate temperature and sheet are overwritten per row
  double fermi_velocity_ratio = constants::default_fermi_velocity_ratio;
  SeparationGrid separations;
  std::vector<double> deltas;
  std::vector<double> mus;
  std::vector<double> plate_temperatures;
  Normalization normalization = Normalization::All;
  ForceSpec spec;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::Csv;
  int threads = 1;
  bool timing = false;

  void validate() const;
};

// Flat sections of `key = value` lines. Values are numbers, quoted strings,
// true/false, or [a, b, ...] arrays of numbers. '#' starts a comment.
//
//   [scenario]  environment_temperature particle_radius particle_kind
//               particle_eps0 fermi_velocity_ratio substrate substrate_table
//               override_validity_floor
//   [sweep]     separation_min separation_max separation_count
//               separation_spacing delta mu plate_temperature normalization
//   [quadrature] rel_tol family max_evaluations max_matsubara k_cutoff
//               omega_cutoff pole_scan polarization_rel_tol fixture
//               frozen_temperature
//   [output]    path format threads
//
// Required: [sweep] separation_min, separation_max, separation_count, delta,
// mu, plate_temperature. Relative substrate_table paths resolve against
// base_dir; load_config_file passes the config file's directory.
//
// Command-line overrides are applied before validation.
struct Overrides {
  std::optional<std::string> output_path;
  std::optional<OutputFormat> format;
  std::optional<int> threads;
  std::optional<CoefficientFixture> fixture;
  bool override_validity_floor = false;
  bool timing = false;
};

SweepConfig parse_config(const std::string& text, const std::string& base_dir = "",
                         const Overrides& overrides = {});
SweepConfig load_config_file(const std::string& path, const Overrides& overrides = {});

struct ResultRow {
  double a_nm = 0.0;
  double delta_eV = 0.0;
  double mu_eV = 0.0;
  double Tp_K = 0.0;
  double TE_K = 0.0;
  double F_eq_N = 0.0;
  double F_r_N = 0.0;
  double F_neq_N = 0.0;
  double F_neq_over_F0 = 0.0;
  double F_neq_over_Fcl = 0.0;
  double F_eq_over_F0 = 0.0;
  double F_eq_over_Fcl = 0.0;
  double err_estimate = 0.0;
  long evaluations = 0;
  double wall_ms = 0.0;
  std::string error;  // empty on success

  // diagnostics sidecar
  RegionContributions regions;
  double tail_bound = 0.0;
  long poles = 0;
  long matsubara_terms = 0;
};

struct SweepSummary {
  std::size_t rows = 0;
  std::size_t failed = 0;
  long evaluations = 0;
  double max_error_estimate = 0.0;
};

const std::vector<std::string>& csv_header();

// Rows are emitted in sweep order (separation slowest, then delta, mu, T_p)
// through `sink` as soon as every earlier row is done.
SweepSummary run_sweep(const SweepConfig& config,
                       const std::function<void(const ResultRow&)>& sink);
std::vector<ResultRow> run_sweep(const SweepConfig& config,
                                 SweepSummary* summary = nullptr);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, Normalization normalization);
  void write(const ResultRow& row);

 private:
  std::ostream& out_;
  Normalization normalization_;
};

void write_json(std::ostream& out, const std::vector<ResultRow>& rows,
                Normalization normalization);
void write_diagnostics_header(std::ostream& out);
void write_diagnostics(std::ostream& out, const ResultRow& row);

// Full-precision numeric field: 17 significant digits.
std::string format_number(double x);

}  // namespace cpneq::cli
