// Parameter sweeps of the Casimir-Polder force on a graphene-coated plate.
//
// Exit status: 0 all rows computed, 2 some rows failed (recorded in the
// error column), 1 configuration or I/O error.

#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "cpneq/cli.hpp"
#include "cpneq/errors.hpp"

namespace cli = cpneq::cli;

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Polder force sweeps for graphene-coated plates"};
  std::string config_path, output, fixture;
  int threads = 0;
  bool diagnostics = false, override_floor = false, timing = false;
  app.add_option("--config", config_path, "sweep configuration file")->required();
  app.add_option("--output", output, "output file (.csv or .json); default stdout");
  app.add_option("--threads", threads, "rows computed concurrently")
      ->check(CLI::PositiveNumber);
  app.add_flag("--diagnostics", diagnostics,
               "write per-row region contributions to <output>.diagnostics.csv");
  app.add_flag("--override-validity-floor", override_floor,
               "allow separations below 200 nm");
  app.add_option("--fixture", fixture, "reflection-coefficient test fixture")
      ->check(CLI::IsMember({"ideal-metal", "frozen-coefficients"}));
  app.add_flag("--timing", timing, "fill the wall_ms column (breaks byte-determinism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cli::SweepConfig config;
  try {
    cli::Overrides ov;
    if (!output.empty()) {
      ov.output_path = output;
      if (output.size() > 5 && output.substr(output.size() - 5) == ".json")
        ov.format = cli::OutputFormat::Json;
      else
        ov.format = cli::OutputFormat::Csv;
    }
    if (threads > 0) ov.threads = threads;
    if (fixture == "ideal-metal") ov.fixture = cpneq::CoefficientFixture::IdealMetal;
    if (fixture == "frozen-coefficients") ov.fixture = cpneq::CoefficientFixture::Frozen;
    ov.override_validity_floor = override_floor;
    ov.timing = timing;
    config = cli::load_config_file(config_path, ov);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!config.output_path.empty()) {
    file.open(config.output_path);
    if (!file) {
      std::cerr << "cannot write '" << config.output_path << "'\n";
      return 1;
    }
    out = &file;
  }
  std::ofstream diag;
  if (diagnostics) {
    const std::string path = config.output_path.empty()
                                 ? std::string("cpneq_sweep.diagnostics.csv")
                                 : config.output_path + ".diagnostics.csv";
    diag.open(path);
    if (!diag) {
      std::cerr << "cannot write '" << path << "'\n";
      return 1;
    }
    cli::write_diagnostics_header(diag);
  }

  cli::SweepSummary summary;
  if (config.format == cli::OutputFormat::Csv) {
    cli::CsvWriter writer(*out, config.normalization);
    summary = cli::run_sweep(config, [&](const cli::ResultRow& row) {
      writer.write(row);
      if (diagnostics) cli::write_diagnostics(diag, row);
    });
  } else {
    std::vector<cli::ResultRow> rows;
    summary = cli::run_sweep(config, [&](const cli::ResultRow& row) {
      rows.push_back(row);
      if (diagnostics) cli::write_diagnostics(diag, row);
    });
    cli::write_json(*out, rows, config.normalization);
  }

  std::cerr << "rows " << summary.rows << ", failed " << summary.failed
            << ", evaluations " << summary.evaluations << ", max error estimate "
            << cli::format_number(summary.max_error_estimate) << " N\n";
  return summary.failed > 0 ? 2 : 0;
}
