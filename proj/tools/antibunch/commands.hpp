// Subcommand implementations. Each turns a Settings record into a Table;
// the front end handles parsing, output and exit codes.
#pragma once

#include "output.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace antibunch::cli {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Settings {
  // Emitter. Rates share one arbitrary unit; delays are in its inverse.
  std::string drive = "incoherent";
  double P = 1.0;
  double gamma = 1.0;
  double omega = 2.0;
  double delta = 0.0;
  double heitler_omega = 0.01;

  // Delay grid.
  double tau_max = 10.0;
  int points = 201;

  // Noise.
  double xi = 0.0;
  std::string model = "coherent";
  double gamma_n = 1.0;
  std::string input;        // optional signal curve (CSV with tau,g2 columns)
  std::string noise_input;  // noise curve for --model custom

  // Jitter and filter.
  std::string kind = "exponential";
  std::string convention = "main-text";
  double Gamma = 1.0;
  std::string method = "closed-form";
  std::string regime;  // Mollow limit form; empty selects the general form
  double omega_xi = 0.0;
  double tolerance = 0.0;  // 0 selects the per-formula default

  // Scans.
  std::string figure;
  double Gamma_min = 0.0, Gamma_max = 0.0;
  int Gamma_points = 0;
  double omega_min = 0.0, omega_max = 0.0;
  int omega_points = 0;

  int seed = 0;
  std::string inject_fault;
};

struct CommandResult {
  Table table;
  bool validation_failed = false;
  std::string message;  // reported on stderr when validation fails
};

CommandResult run_bare(const Settings& s);
CommandResult run_noise(const Settings& s);
CommandResult run_jitter(const Settings& s);
CommandResult run_filter(const Settings& s);
CommandResult run_scan(const Settings& s);

struct ValidateResult {
  nlohmann::json report;
  bool passed = false;
};

ValidateResult run_validate(const Settings& s, const OutputOptions& opt);

// Reads a two-column curve (tau, g2) from a CSV file; '#' lines are skipped,
// as is a non-numeric header row.
struct CurveData {
  std::vector<double> tau;
  std::vector<double> g2;
};
CurveData read_curve_csv(const std::string& path);

}  // namespace antibunch::cli
