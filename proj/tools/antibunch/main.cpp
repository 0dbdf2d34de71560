#include "commands.hpp"
#include "output.hpp"

#include "antibunch/emitter.hpp"
#include "antibunch/numerics.hpp"
#include "antibunch/version.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <iostream>

namespace {

namespace cli = antibunch::cli;

enum ExitCode { kOk = 0, kUsage = 2, kIo = 3, kValidation = 4 };


void emit(const std::string& out_path, const std::function<void(std::ostream&)>& write) {
  if (out_path.empty() || out_path == "-") {
    write(std::cout);
    std::cout.flush();
    if (!std::cout) throw cli::IoError("failed to write standard output");
    return;
  }
  std::ofstream os(out_path);
  if (!os) throw cli::IoError("cannot open " + out_path + " for writing");
  write(os);
  os.flush();
  if (!os) throw cli::IoError("failed to write " + out_path);
}

}  // namespace

int main(int argc, char** argv) {
  cli::Settings s;
  std::string format = "csv";
  std::string out_path;
  bool no_timestamp = false;

  CLI::App app{"Second-order photon correlations of a driven two-level emitter under noise, "
               "detector jitter and frequency filtering."};
  app.set_version_flag("--version", antibunch::version_string());
  app.set_config("--config", "", "Read flat 'key = value' settings; explicit flags take precedence");
  app.require_subcommand(1);

  app.add_option("--drive", s.drive, "incoherent, coherent or heitler")
      ->check(CLI::IsMember({"incoherent", "coherent", "heitler"}))
      ->capture_default_str();
  app.add_option("--P", s.P, "Incoherent pump rate")->capture_default_str();
  app.add_option("--gamma", s.gamma, "Emitter decay rate (rate unit)")->capture_default_str();
  app.add_option("--omega", s.omega, "Coherent drive amplitude")->capture_default_str();
  app.add_option("--delta", s.delta, "Emitter-laser detuning")->capture_default_str();
  app.add_option("--heitler-omega", s.heitler_omega, "Drive amplitude assumed for the Heitler regime")
      ->capture_default_str();
  app.add_option("--tau-max", s.tau_max, "Largest delay")->capture_default_str();
  app.add_option("--points", s.points, "Number of delays")->capture_default_str();
  app.add_option("--xi", s.xi, "Noise-to-signal intensity ratio")->capture_default_str();
  app.add_option("--model", s.model, "Noise model: coherent, thermal or custom")
      ->check(CLI::IsMember({"coherent", "thermal", "custom"}))
      ->capture_default_str();
  app.add_option("--gamma-n", s.gamma_n, "Inverse coherence time of thermal noise")->capture_default_str();
  app.add_option("--input", s.input, "Signal curve CSV (tau,g2) for the noise command");
  app.add_option("--noise-input", s.noise_input, "Noise curve CSV (tau,g2) for --model custom");
  app.add_option("--kind", s.kind, "Jitter kernel: heaviside, exponential, laplace or gaussian")
      ->check(CLI::IsMember({"heaviside", "exponential", "laplace", "gaussian"}))
      ->capture_default_str();
  app.add_option("--convention", s.convention, "Kernel width convention: main-text or appendix")
      ->check(CLI::IsMember({"main-text", "appendix"}))
      ->capture_default_str();
  app.add_option("--Gamma", s.Gamma, "Jitter rate or filter linewidth")->capture_default_str();
  app.add_option("--method", s.method, "closed-form, oracle or both")
      ->check(CLI::IsMember({"closed-form", "oracle", "both"}))
      ->capture_default_str();
  app.add_option("--regime", s.regime, "Mollow limit form: small-Gamma, central or large-Gamma")
      ->check(CLI::IsMember({"small-Gamma", "central", "large-Gamma", "small", "large"}));
  app.add_option("--omega-xi", s.omega_xi, "Filter detuning from the emission line (oracle only)")
      ->capture_default_str();
  app.add_option("--tolerance", s.tolerance, "Tolerance for --method both (default per formula)");
  app.add_option("--figure", s.figure, "Scan selector: fig2c, fig3c, fig4c, fig5c or fig6")
      ->check(CLI::IsMember({"fig2c", "fig3c", "fig4c", "fig5c", "fig6"}));
  app.add_option("--Gamma-min", s.Gamma_min, "Scan grid: smallest Gamma");
  app.add_option("--Gamma-max", s.Gamma_max, "Scan grid: largest Gamma");
  app.add_option("--Gamma-points", s.Gamma_points, "Scan grid: number of Gamma values");
  app.add_option("--omega-min", s.omega_min, "Scan grid: smallest Omega");
  app.add_option("--omega-max", s.omega_max, "Scan grid: largest Omega");
  app.add_option("--omega-points", s.omega_points, "Scan grid: number of Omega values");
  app.add_option("--seed", s.seed, "Recorded in the output header; results are deterministic")
      ->capture_default_str();
  app.add_option("--format", format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "Output path (default standard output)");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the generation timestamp");
  app.add_option("--inject-fault", s.inject_fault, "Perturb one closed form (validation self-test)")
      ->group("");

  auto* bare = app.add_subcommand("bare", "Bare emitter correlation g2(tau)")->fallthrough();
  auto* noise = app.add_subcommand("noise", "Signal mixed with independent background light")->fallthrough();
  auto* jitter = app.add_subcommand("jitter", "Correlation blurred by detector time jitter")->fallthrough();
  auto* filter = app.add_subcommand("filter", "Frequency-filtered correlation")->fallthrough();
  auto* scan = app.add_subcommand("scan", "Zero-delay scans behind the reference figures")->fallthrough();
  auto* validate = app.add_subcommand("validate", "Run every closed form against its oracle")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::FileError& e) {
    std::cerr << "antibunch: " << e.what() << "\n";
    return kIo;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  cli::OutputOptions opt;
  opt.format = format == "json" ? cli::Format::json : cli::Format::csv;
  opt.timestamp = !no_timestamp;

  try {
    if (validate->parsed()) {
      const auto r = cli::run_validate(s, opt);
      emit(out_path, [&](std::ostream& os) { os << r.report.dump(2) << "\n"; });
      if (!r.passed) {
        std::cerr << "antibunch: validation failed:";
        for (const auto& name : r.report["failures"]) std::cerr << " " << name.get<std::string>();
        std::cerr << "\n";
        return kValidation;
      }
      return kOk;
    }

    if (scan->parsed() && s.figure.empty()) throw cli::UsageError("scan needs --figure");

    cli::CommandResult r;
    if (bare->parsed()) {
      r = cli::run_bare(s);
    } else if (noise->parsed()) {
      r = cli::run_noise(s);
    } else if (jitter->parsed()) {
      r = cli::run_jitter(s);
    } else if (filter->parsed()) {
      r = cli::run_filter(s);
    } else {
      r = cli::run_scan(s);
    }
    emit(out_path, [&](std::ostream& os) { cli::write_table(os, r.table, opt); });
    if (r.validation_failed) {
      std::cerr << "antibunch: " << r.message << "\n";
      return kValidation;
    }
    return kOk;
  } catch (const cli::IoError& e) {
    std::cerr << "antibunch: " << e.what() << "\n";
    return kIo;
  } catch (const cli::UsageError& e) {
    std::cerr << "antibunch: " << e.what() << "\n";
    return kUsage;
  } catch (const antibunch::emitter::DomainError& e) {
    std::cerr << "antibunch: invalid parameters: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "antibunch: " << e.what() << "\n";
    return 1;
  }
}
