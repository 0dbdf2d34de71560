#include "commands.hpp"

#include "parallel.hpp"

#include "antibunch/emitter.hpp"
#include "antibunch/filter.hpp"
#include "antibunch/jitter.hpp"
#include "antibunch/noise.hpp"
#include "antibunch/numerics.hpp"
#include "antibunch/validate.hpp"
#include "antibunch/version.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace antibunch::cli {

namespace {

using emitter::CorrelationCurve;
using emitter::EmitterParams;

constexpr const char* kTimeUnit = "1/rate";
constexpr const char* kRateUnit = "rate";
constexpr const char* kDimensionless = "1";

enum class Drive { incoherent, coherent, heitler };

Drive parse_drive(const std::string& s) {
  if (s == "incoherent") return Drive::incoherent;
  if (s == "coherent") return Drive::coherent;
  if (s == "heitler") return Drive::heitler;
  throw UsageError("--drive must be incoherent, coherent or heitler (got '" + s + "')");
}

void require_positive(double x, const char* flag) {
  if (!(x > 0.0) || !std::isfinite(x)) throw UsageError(std::string(flag) + " must be positive");
}

// Every computation runs with gamma_sigma = 1: rates are divided by gamma
// on entry and delays multiplied by it.
struct Frame {
  double gamma = 1.0;
  double rate(double r) const { return r / gamma; }
  double time(double t) const { return t * gamma; }
};

Frame make_frame(const Settings& s) {
  require_positive(s.gamma, "--gamma");
  return {s.gamma};
}

EmitterParams emitter_params(const Settings& s, Drive d, const Frame& f) {
  switch (d) {
    case Drive::incoherent:
      return EmitterParams::incoherent(f.rate(s.P));
    case Drive::coherent:
      return EmitterParams::coherent(f.rate(s.omega), 1.0, f.rate(s.delta));
    case Drive::heitler:
      return EmitterParams::coherent(f.rate(s.heitler_omega));
  }
  return {};
}

std::vector<double> tau_grid(const Settings& s) {
  require_positive(s.tau_max, "--tau-max");
  if (s.points < 2) throw UsageError("--points must be at least 2");
  return numerics::linspace(0.0, s.tau_max, s.points);
}

std::vector<double> scaled(const std::vector<double>& tau, const Frame& f) {
  std::vector<double> out(tau.size());
  std::transform(tau.begin(), tau.end(), out.begin(), [&](double t) { return f.time(t); });
  return out;
}

void add_emitter_meta(Table& t, const Settings& s, Drive d) {
  t.add_meta("drive", s.drive);
  t.add_meta("gamma_sigma", s.gamma);
  switch (d) {
    case Drive::incoherent:
      t.add_meta("P_sigma", s.P);
      break;
    case Drive::coherent:
      t.add_meta("Omega_sigma", s.omega);
      t.add_meta("Delta_sigma", s.delta);
      break;
    case Drive::heitler:
      t.add_meta("heitler_Omega_sigma", s.heitler_omega);
      t.add_meta("heitler_Omega_sigma_note", "assumed drive amplitude for the Heitler regime");
      break;
  }
}

void add_grid_meta(Table& t, const Settings& s) {
  t.add_meta("tau_max", s.tau_max);
  t.add_meta("points", static_cast<double>(s.points));
  t.add_meta("seed", static_cast<double>(s.seed));
}

std::vector<Column> curve_columns(bool with_oracle) {
  std::vector<Column> cols{{"tau", kTimeUnit}, {"g2", kDimensionless}};
  if (with_oracle) cols.push_back({"g2_oracle", kDimensionless});
  return cols;
}

void fill_rows(Table& t, const std::vector<double>& tau, const std::vector<const std::vector<double>*>& cols) {
  t.rows.reserve(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    std::vector<double> row{tau[i]};
    for (const auto* c : cols) row.push_back((*c)[i]);
    t.rows.push_back(std::move(row));
  }
}

CorrelationCurve bare_curve(Drive d, const EmitterParams& p, const std::vector<double>& grid) {
  switch (d) {
    case Drive::incoherent: return emitter::bare_g2_incoherent(p, grid);
    case Drive::coherent: return emitter::bare_g2_coherent(p, grid);
    case Drive::heitler: return emitter::bare_g2_heitler(p, grid);
  }
  return {};
}

const char* bare_formula(Drive d) {
  switch (d) {
    case Drive::incoherent: return "bare/incoherent";
    case Drive::coherent: return "bare/coherent";
    case Drive::heitler: return "bare/heitler";
  }
  return "";
}

enum class Method { closed_form, oracle, both };

Method parse_method(const std::string& s) {
  if (s == "closed-form") return Method::closed_form;
  if (s == "oracle") return Method::oracle;
  if (s == "both") return Method::both;
  throw UsageError("--method must be closed-form, oracle or both (got '" + s + "')");
}

double max_abs_deviation(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// Assembles the output of a closed-form/oracle pair according to --method.
CommandResult method_output(Table t, Method m, const std::vector<double>& tau,
                            const std::vector<double>* closed, const std::vector<double>* oracle,
                            double tolerance) {
  CommandResult r;
  t.columns = curve_columns(m == Method::both);
  if (m == Method::closed_form) {
    fill_rows(t, tau, {closed});
  } else if (m == Method::oracle) {
    t.columns[1].name = "g2_oracle";
    fill_rows(t, tau, {oracle});
  } else {
    const double dev = max_abs_deviation(*closed, *oracle);
    t.add_meta("max_abs_deviation", dev);
    t.add_meta("tolerance", tolerance);
    fill_rows(t, tau, {closed, oracle});
    if (!(dev <= tolerance)) {
      r.validation_failed = true;
      r.message = "closed form deviates from the oracle by " + format_number(dev) +
                  " (tolerance " + format_number(tolerance) + ")";
    }
  }
  r.table = std::move(t);
  return r;
}

}  // namespace

// --------------------------------------------------------------------- bare

CommandResult run_bare(const Settings& s) {
  const Drive d = parse_drive(s.drive);
  const Frame f = make_frame(s);
  const auto tau = tau_grid(s);
  const auto grid = scaled(tau, f);
  const auto p = emitter_params(s, d, f);

  Table t;
  t.command = "bare";
  t.add_meta("formula", bare_formula(d));
  add_emitter_meta(t, s, d);
  add_grid_meta(t, s);

  const auto curve = bare_curve(d, p, grid);
  if (d == Drive::coherent) {
    const auto env = emitter::mollow_envelopes(p, grid);
    t.columns = curve_columns(false);
    t.columns.push_back({"envelope_lo", kDimensionless});
    t.columns.push_back({"envelope_hi", kDimensionless});
    fill_rows(t, tau, {&curve.values, &env.lower.values, &env.upper.values});
  } else {
    t.columns = curve_columns(false);
    fill_rows(t, tau, {&curve.values});
  }
  return {std::move(t), false, {}};
}

// -------------------------------------------------------------------- noise

CurveData read_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  CurveData c;
  std::string line;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string a, b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) {
      throw IoError(path + ": expected at least two comma-separated columns");
    }
    try {
      std::size_t pa = 0, pb = 0;
      const double tau = std::stod(a, &pa);
      const double g2 = std::stod(b, &pb);
      c.tau.push_back(tau);
      c.g2.push_back(g2);
    } catch (const std::exception&) {
      if (!header_allowed) throw IoError(path + ": non-numeric row '" + line + "'");
    }
    header_allowed = false;
  }
  if (c.tau.size() < 2) throw IoError(path + ": need at least two data rows");
  return c;
}

CommandResult run_noise(const Settings& s) {
  const Frame f = make_frame(s);

  Table t;
  t.command = "noise";

  CorrelationCurve signal;
  if (!s.input.empty()) {
    const auto data = read_curve_csv(s.input);
    signal.tau = data.tau;
    signal.values = data.g2;
    t.add_meta("signal", s.input);
  } else {
    const Drive d = parse_drive(s.drive);
    const auto tau = tau_grid(s);
    signal = bare_curve(d, emitter_params(s, d, f), scaled(tau, f));
    signal.tau = tau;
    t.add_meta("signal", bare_formula(d));
    add_emitter_meta(t, s, d);
    add_grid_meta(t, s);
  }

  noise::NoiseSpec spec;
  if (s.model == "coherent") {
    spec = noise::NoiseSpec::coherent(s.xi);
  } else if (s.model == "thermal") {
    spec = noise::NoiseSpec::thermal(s.xi, s.gamma_n);
    t.add_meta("gamma_n", s.gamma_n);
  } else if (s.model == "custom") {
    if (s.noise_input.empty()) throw UsageError("--model custom needs --noise-input");
    const auto data = read_curve_csv(s.noise_input);
    spec = noise::NoiseSpec::from_curve(s.xi, {data.tau, data.g2, emitter::Provenance::analytic});
    t.add_meta("noise_curve", s.noise_input);
  } else {
    throw UsageError("--model must be coherent, thermal or custom (got '" + s.model + "')");
  }
  t.add_meta("formula", "noise/mix");
  t.add_meta("model", s.model);
  t.add_meta("xi", s.xi);

  const auto mixed = noise::mix_noise(signal, spec);
  t.columns = curve_columns(false);
  fill_rows(t, mixed.tau, {&mixed.values});
  return {std::move(t), false, {}};
}

// ------------------------------------------------------------------- jitter

CommandResult run_jitter(const Settings& s) {
  const Drive d = parse_drive(s.drive);
  const Method m = parse_method(s.method);
  const Frame f = make_frame(s);
  require_positive(s.Gamma, "--Gamma");
  const auto tau = tau_grid(s);
  const auto grid = scaled(tau, f);
  const auto p = emitter_params(s, d, f);

  jitter::JitterKernel k;
  k.kind = jitter::kernel_kind_from_string(s.kind);
  k.convention = jitter::convention_from_string(s.convention);
  k.Gamma = f.rate(s.Gamma);
  k.check();

  // The Heitler regime is the coherent form at a small drive amplitude.
  const auto drive = d == Drive::incoherent ? jitter::Drive::incoherent : jitter::Drive::coherent;

  Table t;
  t.command = "jitter";
  t.add_meta("formula", "jitter/" + jitter::to_string(drive) + "/" + s.kind);
  add_emitter_meta(t, s, d);
  t.add_meta("kind", s.kind);
  t.add_meta("convention", jitter::to_string(k.convention));
  t.add_meta("Gamma", s.Gamma);
  t.add_meta("method", s.method);
  add_grid_meta(t, s);

  std::vector<double> closed, oracle;
  if (m != Method::oracle) closed = jitter::jittered_g2_analytic(drive, k, p, grid).values;
  if (m != Method::closed_form) {
    const auto bare = jitter::bare_signal(p);
    oracle = parallel_map<double>(grid.size(), [&](std::size_t i) {
      return jitter::jittered_value_numeric(bare, k, grid[i]);
    });
  }
  const double tol = s.tolerance > 0.0 ? s.tolerance : 1e-5;
  return method_output(std::move(t), m, tau, &closed, &oracle, tol);
}

// ------------------------------------------------------------------- filter

CommandResult run_filter(const Settings& s) {
  const Drive d = parse_drive(s.drive);
  const Method m = parse_method(s.method);
  const Frame f = make_frame(s);
  if (s.Gamma < 0.0 || !std::isfinite(s.Gamma)) throw UsageError("--Gamma must be non-negative");
  // Gamma = 0 stands for the extreme-filtering proxy 1e-3 gamma_sigma.
  const double Gamma_in = s.Gamma == 0.0 ? 1e-3 * s.gamma : s.Gamma;
  const double Gamma = f.rate(Gamma_in);
  if (s.omega_xi != 0.0 && m != Method::oracle) {
    throw UsageError("--omega-xi is supported by --method oracle only");
  }
  if (!s.regime.empty() && d != Drive::coherent) {
    throw UsageError("--regime applies to --drive coherent only");
  }
  const auto tau = tau_grid(s);
  const auto grid = scaled(tau, f);
  const auto p = emitter_params(s, d, f);

  Table t;
  t.command = "filter";
  add_emitter_meta(t, s, d);
  t.add_meta("Gamma", Gamma_in);
  if (s.Gamma == 0.0) t.add_meta("Gamma_note", "Gamma = 0 replaced by the proxy 1e-3 gamma_sigma");
  t.add_meta("method", s.method);
  if (s.omega_xi != 0.0) t.add_meta("omega_xi", s.omega_xi);
  add_grid_meta(t, s);

  std::vector<double> closed;
  double default_tol = 1e-5;
  std::string formula;
  switch (d) {
    case Drive::incoherent:
      formula = "filter/incoherent";
      if (m != Method::oracle) closed = filter::filtered_g2_incoherent(p, Gamma, grid).values;
      break;
    case Drive::heitler:
      formula = "filter/heitler";
      default_tol = 1e-3;
      if (m != Method::oracle) closed = filter::filtered_g2_heitler(p, Gamma, grid).values;
      break;
    case Drive::coherent:
      if (s.regime.empty()) {
        formula = "filter/coherent-general";
        if (m != Method::oracle) {
          const auto fc = filter::filtered_g2_coherent_general(p, Gamma, grid);
          closed = fc.curve.values;
          if (fc.used_fallback) t.add_meta("degenerate", "rates nearly coincide; values taken from the oracle");
        }
      } else {
        const auto regime = filter::mollow_regime_from_string(s.regime);
        formula = "filter/mollow-" + filter::to_string(regime);
        default_tol = 5e-2;
        if (m != Method::oracle) {
          const auto mc = filter::filtered_g2_mollow_limits(p, Gamma, grid, regime);
          closed = mc.curve.values;
          if (!mc.warning.empty()) t.add_meta("warning", mc.warning);
        }
      }
      break;
  }
  t.add_meta("formula", formula);

  std::vector<double> oracle;
  if (m != Method::closed_form) oracle = filter::filtered_g2_numeric(p, Gamma, grid, f.rate(s.omega_xi)).values;
  const double tol = s.tolerance > 0.0 ? s.tolerance : default_tol;
  return method_output(std::move(t), m, tau, &closed, &oracle, tol);
}

// --------------------------------------------------------------------- scan

namespace {

std::vector<double> Gamma_grid(const Settings& s, double lo, double hi, int n) {
  const double a = s.Gamma_min > 0.0 ? s.Gamma_min : lo;
  const double b = s.Gamma_max > 0.0 ? s.Gamma_max : hi;
  const int k = s.Gamma_points > 0 ? s.Gamma_points : n;
  if (!(b > a) || k < 2) throw UsageError("Gamma grid needs Gamma-max > Gamma-min and at least 2 points");
  return numerics::logspace(a, b, k);
}

// g2 at zero delay versus mean jitter time 1/Gamma, one column per kernel.
// The first row is zero jitter, where the bare value applies.
Table jitter_zero_delay_scan(const Settings& s, const Frame& f,
                             const std::vector<std::pair<std::string, EmitterParams>>& regimes) {
  const auto Gammas = Gamma_grid(s, 1e-2, 1e2, 41);
  std::vector<double> times{0.0};
  for (auto it = Gammas.rbegin(); it != Gammas.rend(); ++it) times.push_back(1.0 / *it);

  const auto& kinds = jitter::all_kernel_kinds();
  Table t;
  t.columns.push_back({"jitter_time", kTimeUnit});
  for (const auto& [label, p] : regimes) {
    for (auto k : kinds) {
      t.columns.push_back({regimes.size() > 1 ? label + "_" + jitter::to_string(k) : jitter::to_string(k),
                           kDimensionless});
    }
  }
  t.rows = parallel_map<std::vector<double>>(times.size(), [&](std::size_t i) {
    std::vector<double> row{times[i]};
    for (const auto& [label, p] : regimes) {
      const auto drive = p.drive == emitter::DriveKind::incoherent ? jitter::Drive::incoherent
                                                                   : jitter::Drive::coherent;
      for (auto kind : kinds) {
        if (times[i] == 0.0) {
          row.push_back(jitter::bare_signal(p).g2(0.0));
          continue;
        }
        jitter::JitterKernel k{kind, f.rate(1.0 / times[i]), jitter::Convention::main_text};
        row.push_back(jitter::jitter_closed_form(drive, kind, p, k.appendix_Gamma(), 0.0,
                                                 jitter::FormVariant::shipped));
      }
    }
    return row;
  });
  t.add_meta("convention", "main-text");
  return t;
}

}  // namespace

CommandResult run_scan(const Settings& s) {
  const Frame f = make_frame(s);
  Table t;
  const std::string& fig = s.figure;
  if (fig == "fig2c") {
    t = jitter_zero_delay_scan(s, f, {{"incoherent", EmitterParams::incoherent(f.rate(s.P))}});
    t.add_meta("formula", "jitter/incoherent/*");
    t.add_meta("P_sigma", s.P);
  } else if (fig == "fig3c") {
    t = jitter_zero_delay_scan(s, f,
                               {{"coherent", EmitterParams::coherent(f.rate(s.omega))},
                                {"heitler", EmitterParams::coherent(f.rate(s.heitler_omega))}});
    t.add_meta("formula", "jitter/coherent/*");
    t.add_meta("Omega_sigma", s.omega);
    t.add_meta("heitler_Omega_sigma", s.heitler_omega);
    t.add_meta("heitler_Omega_sigma_note", "assumed drive amplitude for the Heitler regime");
  } else if (fig == "fig4c") {
    const auto p = EmitterParams::incoherent(f.rate(s.P));
    auto Gammas = Gamma_grid(s, 1e-3, 1e3, 61);
    // The uncorrelated point g2(0) = 1 sits at Gamma = Gamma_sigma / 3.
    const double iso = s.gamma * p.Gamma_sigma() / 3.0;
    if (iso > Gammas.front() && iso < Gammas.back()) {
      Gammas.insert(std::lower_bound(Gammas.begin(), Gammas.end(), iso), iso);
      Gammas.erase(std::unique(Gammas.begin(), Gammas.end()), Gammas.end());
    }
    t.columns = {{"Gamma", kRateUnit}, {"g2_zero", kDimensionless}};
    for (double G : Gammas) t.rows.push_back({G, filter::incoherent_zero_delay(p.Gamma_sigma(), f.rate(G))});
    t.add_meta("formula", "filter/incoherent-zero-delay");
    t.add_meta("P_sigma", s.P);
  } else if (fig == "fig5c") {
    const auto coh = EmitterParams::coherent(f.rate(s.omega));
    const auto heit = EmitterParams::coherent(f.rate(s.heitler_omega));
    const auto Gammas = Gamma_grid(s, 1e-3, 1e3, 61);
    t.columns = {{"Gamma", kRateUnit}, {"coherent", kDimensionless}, {"heitler", kDimensionless}};
    t.rows = parallel_map<std::vector<double>>(Gammas.size(), [&](std::size_t i) {
      const double G = f.rate(Gammas[i]);
      return std::vector<double>{Gammas[i], filter::filtered_g2_coherent_zero_delay(coh, G),
                                 filter::filtered_g2_coherent_zero_delay(heit, G)};
    });
    t.add_meta("formula", "filter/coherent-zero-delay");
    t.add_meta("Omega_sigma", s.omega);
    t.add_meta("heitler_Omega_sigma", s.heitler_omega);
    t.add_meta("heitler_Omega_sigma_note", "assumed drive amplitude for the Heitler regime");
  } else if (fig == "fig6") {
    const double a = s.omega_min > 0.0 ? s.omega_min : 1e-2;
    const double b = s.omega_max > 0.0 ? s.omega_max : 1e2;
    const int n = s.omega_points > 0 ? s.omega_points : 81;
    if (!(b > a) || n < 2) throw UsageError("Omega grid needs omega-max > omega-min and at least 2 points");
    const auto Omegas = numerics::logspace(a, b, n);
    t.columns = {{"Omega", kRateUnit}, {"max_g2", kDimensionless}, {"argmax_Gamma", kRateUnit}};
    t.rows = parallel_map<std::vector<double>>(Omegas.size(), [&](std::size_t i) {
      const auto row = filter::max_bunching_scan({f.rate(Omegas[i])}).front();
      return std::vector<double>{Omegas[i], row.max_g2, s.gamma * row.argmax_Gamma};
    });
    t.add_meta("formula", "filter/max-bunching");
    t.add_meta("Gamma_search", "log grid on [1e-4, 1e4] gamma_sigma, golden-section refinement");
  } else {
    throw UsageError("--figure must be fig2c, fig3c, fig4c, fig5c or fig6 (got '" + fig + "')");
  }
  t.command = "scan";
  t.meta.insert(t.meta.begin(), {"figure", fig});
  t.add_meta("gamma_sigma", s.gamma);
  t.add_meta("seed", static_cast<double>(s.seed));
  return {std::move(t), false, {}};
}

// ----------------------------------------------------------------- validate

namespace {

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return format_number(x);
}

}  // namespace

ValidateResult run_validate(const Settings& s, const OutputOptions& opt) {
  validate::Options vo;
  vo.inject_fault = s.inject_fault;
  const auto report = validate::run_validation(vo);

  nlohmann::json j;
  j["schema"] = kSchemaId;
  j["command"] = "validate";
  j["version"] = version_string();
  if (opt.timestamp) j["generated"] = utc_timestamp();
  j["passed"] = report.passed;
  j["counts"] = {{"bare", report.count("bare")},
                 {"jitter", report.count("jitter")},
                 {"filter", report.count("filter")}};
  if (!s.inject_fault.empty()) j["injected_fault"] = s.inject_fault;

  nlohmann::json formulas = nlohmann::json::array();
  for (const auto& r : report.formulas) {
    nlohmann::json e{{"suite", r.suite},
                     {"name", r.name},
                     {"max_deviation", json_number(r.max_deviation)},
                     {"tolerance", r.tolerance},
                     {"passed", r.passed}};
    if (r.has_printed) {
      e["printed"] = {{"deviation", json_number(r.printed_deviation)}, {"matches", r.printed_matches}};
    } else {
      e["printed"] = nullptr;
    }
    if (!r.convention.empty()) e["convention"] = r.convention;
    if (!r.note.empty()) e["note"] = r.note;
    formulas.push_back(e);
  }
  j["formulas"] = formulas;

  nlohmann::json degenerate = nlohmann::json::array();
  for (const auto& dp : report.degenerate) {
    degenerate.push_back({{"formula", dp.formula},
                          {"description", dp.description},
                          {"deviation", json_number(dp.deviation)},
                          {"tolerance", dp.tolerance},
                          {"passed", dp.passed}});
  }
  j["degenerate"] = degenerate;
  j["failures"] = report.failures();
  return {j, report.passed};
}

}  // namespace antibunch::cli
