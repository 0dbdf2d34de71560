// Acceptance run: one PASS/FAIL line per criterion with the measured numbers.
// Exits non-zero when any criterion fails.
#include "antibunch/emitter.hpp"
#include "antibunch/filter.hpp"
#include "antibunch/jitter.hpp"
#include "antibunch/liouvillian.hpp"
#include "antibunch/noise.hpp"
#include "antibunch/numerics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#ifndef ANTIBUNCH_CLI
#error "ANTIBUNCH_CLI must name the tool binary"
#endif

using namespace antibunch;
using emitter::EmitterParams;
using jitter::Convention;
using jitter::JitterKernel;
using jitter::KernelKind;
using numerics::linspace;
using numerics::logspace;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << x;
  return os.str();
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double quad(const std::function<double(double)>& f, double a, double b, const std::vector<double>& kinks = {}) {
  return numerics::integrate(f, a, b, {1e-12, 1e-14, 8000}, kinks).value;
}

// ------------------------------------------------------------------ criteria

void noise_formula(Outcome& o) {
  const auto tau = linspace(0.0, 10.0, 11);
  const auto signal = emitter::bare_g2_incoherent(EmitterParams::incoherent(0.0), tau);
  const double a = noise::mix_noise(signal, noise::NoiseSpec::coherent(std::sqrt(2.0) - 1.0)).at_zero();
  const double b = noise::mix_noise(signal, noise::NoiseSpec::coherent(2.0)).at_zero();
  const double c = noise::mix_noise(signal, noise::NoiseSpec::thermal(1.0 / 3.0)).at_zero();
  const double dev = std::max({std::abs(a - 0.5), std::abs(b - 8.0 / 9.0), std::abs(c - 0.5)});
  o.detail << "max deviation " << sci(dev) << " (tol 1e-9)";
  o.require(dev < 1e-9, "noise values");
}

void jitter_normalization(Outcome& o) {
  double mass_dev = 0.0, var_dev = 0.0;
  for (KernelKind kind : jitter::all_kernel_kinds()) {
    for (double G : {0.5, 1.0, 2.0, 5.0}) {
      const JitterKernel k{kind, G, Convention::main_text};
      auto d = [&](double t) { return jitter::kernel_density(k, t); };
      // Breakpoints on the kernel scale keep the first quadrature pass from
      // stepping over the bulk of a narrow density.
      auto kinks = jitter::density_kinks(k);
      for (double x : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0}) kinks.push_back(x / G);
      std::sort(kinks.begin(), kinks.end());
      const double lo = -80.0 / G, hi = 80.0 / G;
      const double mass = quad(d, lo, hi, kinks);
      const double mean = quad([&](double t) { return t * d(t); }, lo, hi, kinks);
      const double var = quad([&](double t) { return (t - mean) * (t - mean) * d(t); }, lo, hi, kinks);
      mass_dev = std::max(mass_dev, std::abs(mass - 1.0));
      var_dev = std::max(var_dev, std::abs(var - 1.0 / (G * G)) * G * G);
    }
  }
  o.detail << "mass deviation " << sci(mass_dev) << " (tol 1e-8), relative variance deviation " << sci(var_dev)
           << " (tol 1e-6)";
  o.require(mass_dev < 1e-8, "normalization");
  o.require(var_dev < 1e-6, "variance");
}

void jitter_closed_forms(Outcome& o) {
  const auto tau = linspace(0.0, 10.0, 41);
  const std::vector<std::pair<jitter::Drive, EmitterParams>> cases{
      {jitter::Drive::incoherent, EmitterParams::incoherent(0.0)},
      {jitter::Drive::incoherent, EmitterParams::incoherent(1.0)},
      {jitter::Drive::coherent, EmitterParams::coherent(0.05)},
      {jitter::Drive::coherent, EmitterParams::coherent(2.0)}};
  double worst = 0.0;
  std::string worst_name;
  std::vector<std::string> printed_mismatch;
  int undefined = 0;
  for (jitter::Drive drive : {jitter::Drive::incoherent, jitter::Drive::coherent}) {
    for (KernelKind kind : jitter::all_kernel_kinds()) {
      const std::string name = jitter::to_string(drive) + "/" + jitter::to_string(kind);
      double shipped = 0.0, printed_app = 0.0, printed_main = 0.0;
      for (const auto& [d, p] : cases) {
        if (d != drive) continue;
        const auto bare = jitter::bare_signal(p);
        for (double G : {0.5, 1.0, 2.0, 5.0}) {
          const JitterKernel k{kind, G, Convention::main_text};
          const auto numeric = jitter::jittered_g2_numeric(bare, k, tau);
          shipped = std::max(shipped, sup_diff(jitter::jittered_g2_analytic(drive, k, p, tau).values, numeric.values));
          // Printed forms read with either meaning of their width parameter.
          for (auto [Gapp, slot] : {std::pair{k.appendix_Gamma(), &printed_app}, std::pair{G, &printed_main}}) {
            double dev = 0.0;
            for (std::size_t i = 0; i < tau.size(); ++i) {
              double v = NAN;
              try {
                v = jitter::jitter_closed_form(drive, kind, p, Gapp, tau[i], jitter::FormVariant::printed);
              } catch (const std::exception&) {
              }
              if (std::isfinite(v)) {
                dev = std::max(dev, std::abs(v - numeric.values[i]));
              } else {
                ++undefined;  // 0/0 at a removable point of the printed expression
              }
            }
            *slot = std::max(*slot, dev);
          }
        }
      }
      if (shipped > worst) {
        worst = shipped;
        worst_name = name;
      }
      if (!(printed_app < 1e-5) && !(printed_main < 1e-5)) printed_mismatch.push_back(name);
    }
  }
  o.detail << "8 shipped forms, worst " << sci(worst) << " (" << worst_name << ", tol 1e-5)";
  if (!printed_mismatch.empty()) {
    o.detail << "; printed forms flagged as mismatching under both conventions:";
    for (const auto& n : printed_mismatch) o.detail << " " << n;
  }
  if (undefined > 0) o.detail << "; printed forms undefined at " << undefined << " removable points (shipped forms bridge them)";
  o.require(worst < 1e-5, "shipped closed forms");
}

void jitter_limits(Outcome& o) {
  const auto tau = linspace(0.0, 10.0, 41);
  double fast = 0.0, slow = 0.0;
  for (const auto& [drive, p] : std::vector<std::pair<jitter::Drive, EmitterParams>>{
           {jitter::Drive::incoherent, EmitterParams::incoherent(1.0)},
           {jitter::Drive::coherent, EmitterParams::coherent(2.0)}}) {
    const auto bare = jitter::bare_signal(p);
    std::vector<double> ref;
    for (double t : tau) ref.push_back(bare.g2(t));
    const std::vector<double> ones(tau.size(), 1.0);
    for (KernelKind kind : jitter::all_kernel_kinds()) {
      fast = std::max(fast, sup_diff(jitter::jittered_g2_analytic(drive, {kind, 1e3, Convention::main_text}, p, tau).values, ref));
      slow = std::max(slow, sup_diff(jitter::jittered_g2_analytic(drive, {kind, 1e-2, Convention::main_text}, p, tau).values, ones));
    }
  }
  o.detail << "Gamma=1e3 vs bare " << sci(fast) << " (tol 1e-2), Gamma=1e-2 |g2-1| " << sci(slow) << " (tol 1e-2)";
  o.require(fast < 1e-2, "fast limit");
  o.require(slow < 1e-2, "slow limit");
}

void filtered_incoherent(Outcome& o) {
  const auto p = EmitterParams::incoherent(1.0);
  const double Gs = p.Gamma_sigma();
  double closed_dev = 0.0, oracle_dev = 0.0;
  for (double G : logspace(1e-2, 1e2, 20)) {
    const double expect = 2.0 * Gs / (Gs + 3.0 * G);
    closed_dev = std::max(closed_dev, std::abs(filter::filtered_g2_incoherent(p, G, {0.0}).values[0] - expect));
    oracle_dev = std::max(oracle_dev, std::abs(filter::filtered_g2_numeric(p, G, {0.0}).values[0] - expect));
  }
  const double thermal = filter::filtered_g2_incoherent(p, 1e-3, {0.0}).values[0];
  const double bare = filter::filtered_g2_incoherent(p, 1e3, {0.0}).values[0];
  o.detail << "closed form " << sci(closed_dev) << " (tol 1e-8), oracle " << sci(oracle_dev)
           << " (tol 1e-5), Gamma=1e-3 -> " << thermal << ", Gamma=1e3 -> " << bare;
  o.require(closed_dev < 1e-8, "closed form");
  o.require(oracle_dev < 1e-5, "oracle");
  o.require(std::abs(thermal - 2.0) < 1e-2, "thermal limit");
  o.require(std::abs(bare) < 1e-2, "bare limit");
}

double thermal_shape_deviation(const EmitterParams& p, double ratio, double* where) {
  const double G = ratio * p.Gamma_sigma();
  const auto tau = linspace(0.0, 3.0 / G, 601);
  const auto g = filter::filtered_g2_incoherent(p, G, tau);
  double dev = 0.0;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    const double d = std::abs(g.values[i] - 1.0 - std::exp(-G * tau[i]));
    if (d > dev) {
      dev = d;
      if (where) *where = tau[i] * G;
    }
  }
  return dev;
}

void filtered_incoherent_shape(Outcome& o) {
  const auto p = EmitterParams::incoherent(1.0);
  double where = 0.0;
  const double dev = thermal_shape_deviation(p, 1e-2, &where);
  const double finer = thermal_shape_deviation(p, 1e-3, nullptr);
  o.detail << "sup deviation from 1+exp(-Gamma tau) " << sci(dev) << " at Gamma tau = " << where
           << " (tol 2e-2); exact g2(0) = " << filter::incoherent_zero_delay(p.Gamma_sigma(), 1e-2 * p.Gamma_sigma())
           << ", the expansion error scales as 3 Gamma/Gamma_sigma (" << sci(finer) << " at Gamma = 1e-3 Gamma_sigma)";
  o.require(dev < 2e-2, "shape");
}

void filtered_coherent(Outcome& o) {
  const auto tau = linspace(0.0, 10.0, 41);
  const auto grid = logspace(0.1, 10.0, 6);
  double worst = 0.0, sum_dev = 0.0, printed_worst = 0.0;
  int degenerate = 0, points = 0;
  for (double O : grid) {
    for (double G : grid) {
      const auto p = EmitterParams::coherent(O);
      const auto fc = filter::filtered_g2_coherent_general(p, G, tau);
      if (fc.coefficients.degenerate) {
        ++degenerate;
        continue;
      }
      ++points;
      worst = std::max(worst, sup_diff(fc.curve.values, filter::filtered_g2_numeric(p, G, tau).values));
      const double g0 = filter::filtered_g2_coherent_zero_delay(p, G);
      sum_dev = std::max(sum_dev, std::abs(1.0 + fc.coefficients.sum_amplitudes().real() - g0));
      const auto printed = filter::filtered_coefficients(p, G, filter::AmplitudeSource::printed);
      if (!printed.degenerate) {
        for (double t : tau) {
          std::complex<double> v = 1.0;
          for (int i = 0; i < 7; ++i) v += printed.amplitudes[i] * std::exp(-printed.rates[i] * t);
          printed_worst = std::max(printed_worst, std::abs(v.real() - fc.coefficients.value(t)));
        }
      }
    }
  }
  o.detail << points << " grid points (" << degenerate << " degenerate skipped), pointwise " << sci(worst)
           << " (tol 1e-5), 1+sum G vs g2(0) " << sci(sum_dev) << " (tol 1e-8); amplitudes G3,G5,G6,G7 from pole "
           << "residues, printed transcription deviates by up to " << sci(printed_worst);
  o.require(worst < 1e-5, "pointwise");
  o.require(sum_dev < 1e-8, "amplitude sum");
}

void heitler_filtering(Outcome& o) {
  const auto p = EmitterParams::coherent(1e-2);
  double dev = 0.0;
  std::ostringstream each;
  for (double G : {0.3, 1.0, 3.0}) {
    const double expect = std::pow(1.0 / (1.0 + G), 2);
    const double numeric = filter::filtered_g2_numeric(p, G, {0.0}).values[0];
    dev = std::max(dev, std::abs(numeric - expect));
    each << " " << sci(std::abs(numeric - expect));
  }
  double weak = 0.0;
  for (double G : {0.3, 1.0, 3.0}) {
    weak = std::max(weak, std::abs(filter::filtered_g2_numeric(EmitterParams::coherent(1e-3), G, {0.0}).values[0] -
                                   std::pow(1.0 / (1.0 + G), 2)));
  }
  o.detail << "Omega=1e-2 deviations" << each.str() << " (tol 1e-5); the closed form is the Omega->0 limit, "
           << "at Omega=1e-3 the deviation is " << sci(weak);
  o.require(dev < 1e-5, "Omega = 1e-2");
}

void mollow_filtering(Outcome& o) {
  const auto p = EmitterParams::coherent(20.0);
  double rel = 0.0;
  for (double G : {2.0, 5.0, 10.0}) {
    const double closed = 3.0 * (G + 1.0) / (3.0 * G + 1.0);
    const double numeric = filter::filtered_g2_numeric(p, G, {0.0}).values[0];
    rel = std::max(rel, std::abs(closed / numeric - 1.0));
  }
  std::vector<double> omegas = logspace(1e-2, 1e2, 41);
  double sup = 0.0;
  for (const auto& row : filter::max_bunching_scan(omegas)) sup = std::max(sup, row.max_g2);
  const double broad = filter::filtered_g2_numeric(p, 1e3 * 20.0, {0.0}).values[0];
  o.detail << "central relative " << sci(rel) << " (tol 2e-2), scan supremum " << sup
           << " (in [2.9, 3.0]), Gamma=1e3 Omega g2(0) " << sci(broad) << " (< 1e-2)";
  o.require(rel < 2e-2, "central");
  o.require(sup >= 2.9 && sup <= 3.0, "supremum");
  o.require(broad < 1e-2, "broad filter");
}

void robustness_ordering(Outcome& o) {
  const auto rows = jitter::jitter_robustness_scan({{"heitler", EmitterParams::coherent(0.01)},
                                                    {"incoherent", EmitterParams::incoherent(1.0)},
                                                    {"mollow", EmitterParams::coherent(2.0)}},
                                                   jitter::all_kernel_kinds(), {1.0});
  for (std::size_t k = 0; k < 4; ++k) {
    const double h = rows[k].g2_zero, i = rows[4 + k].g2_zero, m = rows[8 + k].g2_zero;
    o.detail << jitter::to_string(rows[k].kind) << " " << std::setprecision(4) << h << " < " << i << " < " << m
             << (k < 3 ? "; " : "");
    o.require(h < i && i < m, jitter::to_string(rows[k].kind));
  }
}

void engine_invariants(Outcome& o) {
  const auto tau = linspace(0.0, 10.0, 21);
  double trace = 0.0, eps = 0.0, trunc = 0.0, plateau = 0.0, narrow_tail = 0.0;
  const std::vector<std::pair<EmitterParams, double>> cases{
      {EmitterParams::incoherent(1.0), 0.5}, {EmitterParams::coherent(0.3), 1.0},
      {EmitterParams::coherent(2.0), 0.2},   {EmitterParams::coherent(2.0), 5.0},
      {EmitterParams::coherent(20.0), 5.0}};
  for (const auto& [p, G] : cases) {
    for (int n_max : {2, 3}) {
      const auto L = liouvillian::build_liouvillian({p, liouvillian::SensorSpec{0.0, G, 0.0, n_max}});
      const double scale = L.matrix.cwiseAbs().maxCoeff();
      trace = std::max(trace, (L.trace_functional().transpose() * L.matrix).cwiseAbs().maxCoeff() / scale);
    }
    const double e0 = 1e-4 * std::sqrt(G);
    const auto base = liouvillian::filtered_g2_oracle(p, G, tau, 0.0, 2, e0);
    eps = std::max(eps, sup_diff(base.values, liouvillian::filtered_g2_oracle(p, G, tau, 0.0, 2, e0 / 2).values));
    trunc = std::max(trunc, sup_diff(base.values, liouvillian::filtered_g2_oracle(p, G, tau, 0.0, 3, e0).values));
    const double tail = std::abs(liouvillian::filtered_g2_oracle(p, G, {0.0, 50.0}).values[1] - 1.0);
    // A filter narrower than the emitter keeps correlations alive on its own
    // time scale 1/Gamma; only filters with Gamma >= gamma/2 have relaxed by 50.
    if (G >= 0.5) {
      plateau = std::max(plateau, tail);
    } else {
      narrow_tail = tail;
    }
  }
  o.detail << "trace " << sci(trace) << " (tol 1e-9), coupling halving " << sci(eps) << " (tol 1e-6), truncation "
           << sci(trunc) << " (tol 1e-6), plateau " << sci(plateau) << " (tol 1e-5; the Gamma = 0.2 filter is still at "
           << sci(narrow_tail) << ")";
  o.require(trace < 1e-9, "trace");
  o.require(eps < 1e-6, "coupling");
  o.require(trunc < 1e-6, "truncation");
  o.require(plateau < 1e-5, "plateau");
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_cli(const std::string& args) {
  const std::string cmd = std::string(ANTIBUNCH_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

void cli_validate(Outcome& o) {
  const auto clean = run_cli("validate --no-timestamp");
  const auto faulty = run_cli("validate --no-timestamp --inject-fault jitter/incoherent/gaussian");
  std::string named;
  try {
    const auto j = nlohmann::json::parse(faulty.out);
    for (const auto& f : j["failures"]) named += (named.empty() ? "" : " ") + f.get<std::string>();
  } catch (const std::exception&) {
    named = "(unparseable report)";
  }
  o.detail << "clean exit " << clean.code << ", faulted exit " << faulty.code << " naming " << named;
  o.require(clean.code == 0, "clean exit code");
  o.require(faulty.code == 4, "faulted exit code");
  o.require(named == "jitter/incoherent/gaussian", "offending formula");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"noise formula", noise_formula},
      {"jitter kernel normalization and variance", jitter_normalization},
      {"jitter closed forms vs quadrature", jitter_closed_forms},
      {"jitter limits", jitter_limits},
      {"filtered incoherent zero delay", filtered_incoherent},
      {"filtered incoherent small-Gamma shape", filtered_incoherent_shape},
      {"filtered coherent seven-exponential form", filtered_coherent},
      {"Heitler filtering", heitler_filtering},
      {"Mollow filtering", mollow_filtering},
      {"robustness ordering", robustness_ordering},
      {"engine invariants", engine_invariants},
      {"validate exit codes", cli_validate},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.passed) ++failed;
    std::cout << "criterion " << std::setw(2) << i + 1 << " " << (o.passed ? "PASS" : "FAIL") << "  "
              << criteria[i].first << ": " << o.detail.str() << " (" << std::fixed << std::setprecision(2) << secs
              << " s)" << std::defaultfloat << std::setprecision(6) << "\n";
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
