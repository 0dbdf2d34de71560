// Closed-form versus oracle validation suites. Every closed form shipped by
// the library is compared against an independent numerical oracle
// (quadrature for jitter, the Liouvillian engine for everything else) and
// the printed variant of each formula is checked alongside.
#pragma once

#include <string>
#include <vector>

namespace antibunch::validate {

struct FormulaResult {
  std::string suite;        // "bare", "jitter", "filter"
  std::string name;         // stable identifier, e.g. "jitter/coherent/laplace"
  double max_deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  // Printed variant of the same formula, when one exists.
  bool has_printed = false;
  double printed_deviation = 0.0;
  bool printed_matches = false;
  std::string convention;   // jitter: convention under which the printed form holds
  std::string note;
};

struct DegeneratePoint {
  std::string formula;
  std::string description;
  double deviation = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct Options {
  std::string inject_fault;  // formula name whose closed form is perturbed
  // Added to every value of the faulted formula; several times the loosest
  // tolerance (5e-2) so the shift cannot hide inside a legitimate deviation.
  double fault_size = 0.25;
};

struct Report {
  std::vector<FormulaResult> formulas;
  std::vector<DegeneratePoint> degenerate;
  bool passed = false;

  int count(const std::string& suite) const;
  std::vector<std::string> failures() const;
};

// Names accepted by Options::inject_fault.
std::vector<std::string> formula_names();

Report run_validation(const Options& options = {});

}  // namespace antibunch::validate
